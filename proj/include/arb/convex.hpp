#pragma once

// Joint flow optimization over an arbitrage loop.
//
// For an n-hop loop with hop i trading in_i of its input token for out_i of
// its output token:
//
//   maximize    Σ_T price(T)·net(T)
//   subject to  (x_i + γ_i·in_i)(y_i − out_i) ≥ x_i·y_i     every hop
//               out_i ≥ in_{i+1}                          cyclic, risk-free
//               in_i, out_i ≥ 0
//
// Every token is left with a nonnegative balance; intermediate surpluses may
// be kept whenever they are worth more than forwarding them. Forcing
// out_i = in_{i+1} on every hop except the closing one recovers single-entry
// arbitrage (solve_equality_variant).

#include <map>
#include <stdexcept>

#include "arb/market_graph.hpp"
#include "arb/prices.hpp"
#include "arb/strategies.hpp"

namespace arb {

inline constexpr double kDefaultConvexTolerance = 1e-8;

struct ConvexSolution {
  FlowVector flows;
  std::map<TokenId, double> profit_by_token;
  double monetized_profit = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
};

/// Raised when the interior-point iteration cap is hit. Carries the best
/// feasible point reached.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, ConvexSolution best)
      : std::runtime_error(what), best_(std::move(best)) {}

  const ConvexSolution& best() const noexcept { return best_; }

 private:
  ConvexSolution best_;
};

struct ConvexOptions {
  double tolerance = kDefaultConvexTolerance;
  int max_newton_steps = 500;
};

ConvexSolution solve_convex(const Loop& loop, const PriceTable& prices,
                            const ConvexOptions& options = {});

/// Chain constraints tightened to equalities everywhere except the hop that
/// returns to `entry`.
ConvexSolution solve_equality_variant(const Loop& loop, const TokenId& entry,
                                      const PriceTable& prices,
                                      const ConvexOptions& options = {});

/// KKT residual of `flows` for the loop program. Throws DomainError naming
/// the violated constraint when `flows` is infeasible.
double check_kkt(const Loop& loop, const PriceTable& prices, const FlowVector& flows);

/// Throws DomainError naming the first violated constraint, if any.
void check_feasible(const Loop& loop, const FlowVector& flows);

}  // namespace arb
