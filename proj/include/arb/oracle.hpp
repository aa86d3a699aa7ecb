#pragma once

// Brute-force grid searches used to cross-check the analytic single-entry
// optimum and the convex solver. They evaluate swaps hop by hop and share no
// code with either method beyond Hop::swap.

#include <cstddef>

#include "arb/market_graph.hpp"
#include "arb/prices.hpp"
#include "arb/strategies.hpp"

namespace arb {

struct LineGridResult {
  double best_input = 0.0;
  double best_profit_tokens = 0.0;
  double best_monetized = 0.0;
  /// Upper bound on (true max − grid max), in $, from the profit's Lipschitz
  /// constant over the interval and half the grid spacing.
  double resolution_bound = 0.0;
};

/// `points` evenly spaced inputs of `entry` over [0, upper], endpoints included.
LineGridResult grid_single_entry(const Loop& loop, const TokenId& entry, const PriceTable& prices,
                                 std::size_t points, double upper);

struct CubeGridResult {
  double best_monetized = 0.0;
  FlowVector best_flows;
  double max_entry_input = 0.0;  // largest risk-free entry amount
  std::size_t feasible_points = 0;
};

/// Three-hop loops only. Grid over (entry input Δ, share of hop-1 output
/// forwarded, share of hop-2 output forwarded), `per_axis` points each, with
/// Δ spanning [0, Δ_max] where Δ_max is where forwarding everything breaks
/// even. Only risk-free points (closing output ≥ Δ) count.
CubeGridResult grid_convex3(const Loop& loop, const PriceTable& prices, std::size_t per_axis);

/// Largest entry amount that still returns at least itself when everything is
/// forwarded (bisection on nested swaps). Zero without arbitrage.
double break_even_input(const Loop& loop);

}  // namespace arb
