#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace arb {

/// Violated precondition on a domain value (unknown token, negative amount,
/// missing price, broken hop chain, infeasible flow).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input file problems. Carries every offending line so callers can report
/// them all at once.
class DataError : public std::runtime_error {
 public:
  explicit DataError(std::vector<std::string> problems);

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

}  // namespace arb
