#pragma once

// Reproducible stand-in for a real DEX snapshot: a connected token graph
// whose pools are priced near a hidden reference price, with multiplicative
// noise that opens arbitrage loops.

#include <cstdint>
#include <vector>

#include "arb/amm.hpp"
#include "arb/prices.hpp"

namespace arb {

struct SyntheticSpec {
  int tokens = 51;
  int pools = 208;
  /// Log-normal sigma of each reserve around its fair value.
  double mispricing = 0.02;
  /// Pool TVL is drawn log-uniformly from [min_tvl_usd, max_tvl_usd].
  double min_tvl_usd = 5e4;
  double max_tvl_usd = 5e6;
  double fee_rate = kDefaultFeeRate;
  std::uint64_t seed = 20230901;
};

struct SyntheticMarket {
  std::vector<Pool> pools;
  PriceTable prices;
};

/// Token names are "T00", "T01", ... At most one pool per token pair.
/// Throws DomainError when the pool count cannot connect the tokens or
/// exceeds the number of distinct pairs.
SyntheticMarket make_synthetic_market(const SyntheticSpec& spec);

}  // namespace arb
