#pragma once

#include <map>
#include <optional>

#include "arb/amm.hpp"

namespace arb {

/// Centralized-exchange reference prices, fiat units per token unit.
/// A token without an entry is unpriced; it is never treated as zero.
class PriceTable {
 public:
  PriceTable() = default;

  /// Throws DomainError on a negative or non-finite price.
  void set(const TokenId& token, double usd_price);

  std::optional<double> find(const TokenId& token) const;
  /// Throws DomainError naming the token when it is unpriced.
  double at(const TokenId& token) const;
  bool contains(const TokenId& token) const { return prices_.count(token) != 0; }

  std::size_t size() const noexcept { return prices_.size(); }
  const std::map<TokenId, double>& entries() const noexcept { return prices_; }

  /// Copy with every price multiplied by `factor` (> 0).
  PriceTable scaled(double factor) const;

 private:
  std::map<TokenId, double> prices_;
};

}  // namespace arb
