#pragma once

// Token graph: tokens are nodes, pools are (possibly parallel) edges.
//
// enumerate_loops() is the data-parallel kernel of this module. It fans the
// depth-first search out over start tokens with OpenMP; the serial variant is
// kept as the reference the parallel one is tested against.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "arb/amm.hpp"
#include "arb/prices.hpp"

namespace arb {

struct GraphFilter {
  double min_tvl_usd = 30000.0;
  double min_reserve = 100.0;
};

struct MarketSnapshot {
  std::vector<Pool> pools;
  std::vector<TokenId> tokens;  // sorted, unique
  std::size_t dropped_pools = 0;
};

/// Σ reserve·price over the pool's two tokens; empty when either is unpriced.
std::optional<double> pool_tvl(const Pool& pool, const PriceTable& prices);

/// Keeps pools with TVL ≥ min_tvl_usd and both reserves ≥ min_reserve. With
/// min_tvl_usd == 0 unpriced pools are kept; otherwise they are dropped.
MarketSnapshot build_graph(std::span<const Pool> pools, const PriceTable& prices,
                           const GraphFilter& filter);

/// A simple directed cycle of hops. The entry token is the first hop's input.
class Loop {
 public:
  /// Throws DomainError unless the hops chain, close on the entry token,
  /// visit distinct tokens, and number at least two.
  explicit Loop(std::vector<Hop> hops);

  const std::vector<Hop>& hops() const noexcept { return hops_; }
  std::size_t size() const noexcept { return hops_.size(); }
  const TokenId& entry_token() const noexcept { return hops_.front().token_in(); }

  /// Tokens in traversal order, starting with the entry token.
  std::vector<TokenId> tokens() const;
  bool contains(const TokenId& token) const;

  /// Same cycle entered at `token`. Throws DomainError if absent.
  Loop rotated_to(const TokenId& token) const;

  /// "X>Y>Z>X"
  std::string label() const;

  friend bool operator==(const Loop&, const Loop&) = default;

 private:
  std::vector<Hop> hops_;
};

/// Every simple directed cycle of exactly `length` distinct tokens, once per
/// rotation class: entered at its lexicographically smallest token. Both
/// traversal directions are returned. Output order is deterministic.
std::vector<Loop> enumerate_loops(const MarketSnapshot& snapshot, int length);
std::vector<Loop> enumerate_loops_serial(const MarketSnapshot& snapshot, int length);

struct ArbitrageCheck {
  bool profitable = false;
  double log_sum = 0.0;
};

/// Σ log(relative price) along the loop; profitable iff the sum is positive.
ArbitrageCheck is_arbitrage_loop(const Loop& loop);

/// Arbitrage loops of `length`, sorted by descending log-sum (canonical order
/// breaks ties).
struct DetectedLoop {
  Loop loop;
  double log_sum;
};
std::vector<DetectedLoop> detect_arbitrage(const MarketSnapshot& snapshot, int length);

}  // namespace arb
