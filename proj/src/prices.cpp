#include "arb/prices.hpp"

#include <cmath>

#include "arb/errors.hpp"

namespace arb {

void PriceTable::set(const TokenId& token, double usd_price) {
  if (!(usd_price >= 0.0) || !std::isfinite(usd_price)) {
    throw DomainError("price of " + token.str() + " must be a nonnegative finite number");
  }
  prices_.insert_or_assign(token, usd_price);
}

std::optional<double> PriceTable::find(const TokenId& token) const {
  if (auto it = prices_.find(token); it != prices_.end()) return it->second;
  return std::nullopt;
}

double PriceTable::at(const TokenId& token) const {
  if (auto it = prices_.find(token); it != prices_.end()) return it->second;
  throw DomainError("no price for token " + token.str());
}

PriceTable PriceTable::scaled(double factor) const {
  if (!(factor > 0.0)) throw DomainError("price scale factor must be positive");
  PriceTable out;
  for (const auto& [token, price] : prices_) out.prices_.emplace(token, price * factor);
  return out;
}

}  // namespace arb
