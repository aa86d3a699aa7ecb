#include "arb/errors.hpp"

#include <utility>

namespace arb {

DataError::DataError(std::vector<std::string> problems)
    : std::runtime_error([&] {
        std::string msg;
        for (const auto& p : problems) {
          if (!msg.empty()) msg += '\n';
          msg += p;
        }
        return msg.empty() ? std::string("data error") : msg;
      }()),
      problems_(std::move(problems)) {}

}  // namespace arb
