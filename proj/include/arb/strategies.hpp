#pragma once

// Profit maximization for a single arbitrage loop.
//
// Entering the loop at token T with Δ units yields composed output
// A·Δ/(B + Δ). Profit A·Δ/(B + Δ) − Δ is strictly concave and peaks where the
// marginal output equals one:
//
//   Δ* = √(A·B) − B,   profit* = (√A − √B)²      (zero unless A > B)
//
// optimize_single_entry uses the closed form; bisect_optimal_input finds the
// same point by bisection on the nested-swap derivative and is kept as the
// cross-check.

#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "arb/market_graph.hpp"
#include "arb/prices.hpp"

namespace arb {

/// Per-hop amounts, indexed by the loop's hop order.
struct FlowVector {
  std::vector<double> in;
  std::vector<double> out;

  static FlowVector zeros(std::size_t hops) { return {std::vector<double>(hops, 0.0), std::vector<double>(hops, 0.0)}; }
  std::size_t size() const noexcept { return in.size(); }
};

/// Net amount of each loop token left over after executing `flows`:
/// what hops output of it minus what hops consumed of it.
std::map<TokenId, double> net_profit_by_token(const Loop& loop, const FlowVector& flows);

/// Σ net·price. Throws DomainError on an unpriced loop token.
double monetize(const std::map<TokenId, double>& profit_by_token, const PriceTable& prices);

struct SingleEntryResult {
  TokenId entry;
  double optimal_input = 0.0;
  double profit_tokens = 0.0;
  double monetized_profit = 0.0;
};

/// Throws DomainError when `entry` is not on the loop or is unpriced.
SingleEntryResult optimize_single_entry(const Loop& loop, const TokenId& entry,
                                        const PriceTable& prices);

struct BisectionResult {
  double optimal_input = 0.0;
  double derivative_residual = 0.0;  // |d out/dΔ − 1| at the returned point
  int iterations = 0;
};

/// Solves d(out)/dΔ = 1 by bisection using hop-by-hop derivatives of the
/// nested swaps (no closed form involved).
BisectionResult bisect_optimal_input(const Loop& loop, const TokenId& entry);

enum class Strategy { SingleEntry, MaxPrice, MaxMax, ConvexOptimization };

std::string_view strategy_name(Strategy s);

struct StrategyReport {
  Strategy strategy = Strategy::SingleEntry;
  Loop loop;
  std::optional<TokenId> entry;
  std::vector<SingleEntryResult> per_entry;
  std::optional<FlowVector> flows;
  std::map<TokenId, double> profit_by_token;
  double monetized_profit = 0.0;
};

/// Best single-entry result over every token of the loop (same direction).
/// Ties go to the lexicographically smaller token.
StrategyReport maxmax(const Loop& loop, const PriceTable& prices);

/// Single entry at the highest-priced token (ties: smaller token).
StrategyReport maxprice(const Loop& loop, const PriceTable& prices);

/// Flows of the single-entry chain started with `amount` of `entry`, laid out
/// in the hop order of `loop`.
FlowVector single_entry_flows(const Loop& loop, const TokenId& entry, double amount);

}  // namespace arb
