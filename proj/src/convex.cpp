#include "arb/convex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "arb/barrier.hpp"
#include "arb/errors.hpp"

namespace arb {

namespace {

// Output may approach but never reach the output reserve.
constexpr double kReserveMargin = 1e-9;
// Smallest normalized duality gap the barrier chases. Tighter targets (large
// cost scale, small profit) are finished by the active-set polish instead.
constexpr double kGapFloor = 1e-12;

struct ScaledProgram {
  barrier::Program program;
  double cost_scale = 0.0;  // $ per unit of normalized cost
};

void require_loop_prices(const Loop& loop, const PriceTable& prices) {
  for (const TokenId& t : loop.tokens()) prices.at(t);
}

std::string pool_name(const Hop& h) {
  return h.token_in().str() + "->" + h.token_out().str();
}

void finalize_cost(ScaledProgram& sp, Eigen::VectorXd raw_cost) {
  sp.cost_scale = raw_cost.cwiseAbs().maxCoeff();
  sp.program.cost = sp.cost_scale > 0.0 ? Eigen::VectorXd(raw_cost / sp.cost_scale) : raw_cost;
}

// Variables: u_i = in_i / x_i (index i), v_i = out_i / y_i (index n + i).
ScaledProgram loop_program(const Loop& loop, const PriceTable& prices) {
  const auto& hops = loop.hops();
  const int n = static_cast<int>(hops.size());
  ScaledProgram sp;
  barrier::Program& p = sp.program;
  p.dims = 2 * n;
  Eigen::VectorXd raw = Eigen::VectorXd::Zero(2 * n);
  for (int i = 0; i < n; ++i) {
    const Hop& h = hops[static_cast<std::size_t>(i)];
    const Hop& next = hops[static_cast<std::size_t>((i + 1) % n)];
    raw[i] = prices.at(h.token_in()) * h.reserve_in();
    raw[n + i] = -prices.at(h.token_out()) * h.reserve_out();
    p.hyperbolic.push_back({i, n + i, h.gamma(), 1.0, "pool " + pool_name(h)});
    p.linear.push_back({{{n + i, 1.0}, {(i + 1) % n, -next.reserve_in() / h.reserve_out()}},
                        0.0,
                        "chain " + h.token_out().str() + " (hop " + std::to_string(i) + " out >= hop " +
                            std::to_string((i + 1) % n) + " in)"});
  }
  for (int i = 0; i < n; ++i) {
    p.linear.push_back({{{i, 1.0}}, 0.0, "in[" + std::to_string(i) + "] >= 0"});
    p.linear.push_back({{{n + i, 1.0}}, 0.0, "out[" + std::to_string(i) + "] >= 0"});
    p.linear.push_back({{{n + i, -1.0}}, 1.0 - kReserveMargin, "out[" + std::to_string(i) + "] < reserve"});
  }
  finalize_cost(sp, raw);
  return sp;
}

Eigen::VectorXd loop_point(const Loop& loop, const FlowVector& flows) {
  const auto& hops = loop.hops();
  const std::size_t n = hops.size();
  Eigen::VectorXd z(static_cast<Eigen::Index>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    z[static_cast<Eigen::Index>(i)] = flows.in[i] / hops[i].reserve_in();
    z[static_cast<Eigen::Index>(n + i)] = flows.out[i] / hops[i].reserve_out();
  }
  return z;
}

// Moves flows inward until every pool, chain, and sign constraint holds
// exactly in floating point. Only ever decreases amounts.
void round_inward(const Loop& loop, FlowVector& f) {
  const auto& hops = loop.hops();
  const std::size_t n = hops.size();
  for (std::size_t i = 0; i < n; ++i) {
    f.in[i] = std::max(0.0, f.in[i]);
    f.out[i] = std::max(0.0, f.out[i]);
  }
  for (std::size_t pass = 0; pass < 4 * n + 4; ++pass) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const double cap = std::min(hops[i].swap(f.in[i]), (1.0 - kReserveMargin) * hops[i].reserve_out());
      if (f.out[i] > cap) {
        f.out[i] = cap;
        changed = true;
      }
      const std::size_t next = (i + 1) % n;
      if (f.in[next] > f.out[i]) {
        f.in[next] = f.out[i];
        changed = true;
      }
    }
    if (!changed) break;
  }
}

ConvexSolution package(const Loop& loop, const PriceTable& prices, FlowVector flows,
                       double kkt, int iterations) {
  ConvexSolution sol;
  sol.profit_by_token = net_profit_by_token(loop, flows);
  sol.monetized_profit = monetize(sol.profit_by_token, prices);
  sol.flows = std::move(flows);
  sol.kkt_residual = kkt;
  sol.iterations = iterations;
  return sol;
}

// Strictly interior chain: enter `entry` with `amount` and shave a factor s off
// every pool output and every forwarded amount. Concavity of each swap keeps
// the closing output above `amount` when s = ratio^(-1/2n).
FlowVector interior_chain(const Loop& loop, const TokenId& entry, double amount) {
  const std::size_t n = loop.size();
  const FlowVector full = single_entry_flows(loop, entry, amount);
  std::size_t start = 0;
  while (loop.hops()[start].token_in() != entry) ++start;
  const double ratio = full.out[(start + n - 1) % n] / amount;
  const double shave = std::pow(ratio, -1.0 / (2.0 * static_cast<double>(n)));

  FlowVector f = FlowVector::zeros(n);
  double carried = amount;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = (start + k) % n;
    f.in[i] = carried;
    f.out[i] = shave * loop.hops()[i].swap(carried);
    carried = shave * f.out[i];
  }
  return f;
}

barrier::Options barrier_options(const barrier::Program& p,
                                 double cost_scale, const ConvexOptions& options) {
  const double m = p.constraint_count();
  barrier::Options bo;
  bo.t_initial = 0.0;
  // Objective in $ is −cost_scale·cᵀz; stop once the $ gap is within
  // tolerance·(1 + |objective|).
  bo.gap_abs = options.tolerance / cost_scale;
  bo.gap_rel = options.tolerance;
  bo.t_min = 10.0 * std::sqrt(m) / options.tolerance;
  bo.gap_floor = kGapFloor;
  bo.max_newton_steps = options.max_newton_steps;
  return bo;
}

bool loop_is_arbitrage(const Loop& loop) {
  const ComposedSwap swap = compose_path(loop.hops());
  return swap.coeff_a() > swap.coeff_b();
}

double half_optimal_input(const Loop& loop) {
  const ComposedSwap swap = compose_path(loop.hops());
  const double a = swap.coeff_a();
  const double b = swap.coeff_b();
  return 0.5 * std::sqrt(b) * (a - b) / (std::sqrt(a) + std::sqrt(b));
}

// Polishes a finished barrier run. Returns why the result is not certified,
// or an empty string when it is.
std::string finish(const barrier::Program& p, barrier::Result& res) {
  if (!res.converged) return "hit the Newton step cap";
  const bool polished = barrier::polish(p, res.z, res.t);
  if (res.gap_met || polished) return {};
  char buf[64];
  std::snprintf(buf, sizeof buf, "stalled at duality gap %.3g", res.duality_gap);
  return buf;
}

void validate_tolerance(const ConvexOptions& options) {
  if (!(options.tolerance > 0.0)) throw DomainError("solver tolerance must be positive");
}

}  // namespace

void check_feasible(const Loop& loop, const FlowVector& flows) {
  const auto& hops = loop.hops();
  const std::size_t n = hops.size();
  if (flows.in.size() != n || flows.out.size() != n) {
    throw DomainError("flow vector does not match loop " + loop.label());
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(flows.in[i] >= 0.0) || !std::isfinite(flows.in[i])) {
      throw DomainError("infeasible flow: in[" + std::to_string(i) + "] must be nonnegative");
    }
    if (!(flows.out[i] >= 0.0) || !std::isfinite(flows.out[i])) {
      throw DomainError("infeasible flow: out[" + std::to_string(i) + "] must be nonnegative");
    }
    const Hop& h = hops[i];
    if (!(flows.out[i] < h.reserve_out())) {
      throw DomainError("infeasible flow: out[" + std::to_string(i) + "] reaches the reserve of pool " +
                        pool_name(h));
    }
    // (x + γ·in)(y − out) ≥ x·y, divided through by x·y.
    const double product =
        (1.0 + h.gamma() * flows.in[i] / h.reserve_in()) * (1.0 - flows.out[i] / h.reserve_out()) - 1.0;
    if (product < -1e-9) {
      throw DomainError("infeasible flow: constant-product constraint of pool " + pool_name(h) +
                        " violated by " + std::to_string(-product));
    }
    const double out = flows.out[i];
    const double next_in = flows.in[(i + 1) % n];
    if (out - next_in < -1e-12 * std::max(1.0, out)) {
      throw DomainError("infeasible flow: chain constraint on " + h.token_out().str() + " violated (hop " +
                        std::to_string(i) + " outputs less than hop " + std::to_string((i + 1) % n) +
                        " consumes)");
    }
  }
}

double check_kkt(const Loop& loop, const PriceTable& prices, const FlowVector& flows) {
  require_loop_prices(loop, prices);
  check_feasible(loop, flows);
  const ScaledProgram sp = loop_program(loop, prices);
  return barrier::kkt_residual(sp.program, loop_point(loop, flows));
}

ConvexSolution solve_convex(const Loop& loop, const PriceTable& prices, const ConvexOptions& options) {
  validate_tolerance(options);
  require_loop_prices(loop, prices);
  const std::size_t n = loop.size();
  const ScaledProgram sp = loop_program(loop, prices);

  // Without arbitrage the feasible set is the origin alone: chaining
  // in_{i+1} ≤ out_i ≤ p_i·in_i around the loop forces in_1 ≤ (Π p_i)·in_1.
  if (!loop_is_arbitrage(loop) || !(sp.cost_scale > 0.0)) {
    FlowVector zero = FlowVector::zeros(n);
    const double kkt = barrier::kkt_residual(sp.program, loop_point(loop, zero));
    return package(loop, prices, std::move(zero), kkt, 0);
  }

  const FlowVector start = interior_chain(loop, loop.entry_token(), half_optimal_input(loop));
  const Eigen::VectorXd z0 = loop_point(loop, start);
  barrier::Result res = barrier::solve(sp.program, z0, barrier_options(sp.program, sp.cost_scale, options));
  const std::string failure = finish(sp.program, res);

  FlowVector flows = FlowVector::zeros(n);
  for (std::size_t i = 0; i < n; ++i) {
    flows.in[i] = res.z[static_cast<Eigen::Index>(i)] * loop.hops()[i].reserve_in();
    flows.out[i] = res.z[static_cast<Eigen::Index>(n + i)] * loop.hops()[i].reserve_out();
  }
  round_inward(loop, flows);
  const double kkt = barrier::kkt_residual(sp.program, loop_point(loop, flows));
  ConvexSolution sol = package(loop, prices, std::move(flows), kkt, res.newton_steps);
  if (!failure.empty()) throw SolverError("convex solver " + failure + " on loop " + loop.label(), std::move(sol));
  return sol;
}

namespace {

// Loop rotated to the entry; variables u_i = in_i / x_i for i < n and
// w = out_{n-1} / y_{n-1} at index n. Intermediate outputs equal the next
// hop's input, so they are not separate variables.
ScaledProgram equality_program(const Loop& rotated, const PriceTable& prices) {
  const auto& hops = rotated.hops();
  const int n = static_cast<int>(hops.size());
  ScaledProgram sp;
  barrier::Program& p = sp.program;
  p.dims = n + 1;
  const double price = prices.at(rotated.entry_token());
  Eigen::VectorXd raw = Eigen::VectorXd::Zero(n + 1);
  raw[0] = price * hops.front().reserve_in();
  raw[n] = -price * hops.back().reserve_out();

  for (int i = 0; i < n; ++i) {
    const Hop& h = hops[static_cast<std::size_t>(i)];
    const bool last = i == n - 1;
    const double coeff = last ? 1.0 : hops[static_cast<std::size_t>(i + 1)].reserve_in() / h.reserve_out();
    const int out_var = last ? n : i + 1;
    p.hyperbolic.push_back({i, out_var, h.gamma(), coeff, "pool " + pool_name(h)});
    p.linear.push_back({{{out_var, -coeff}}, 1.0 - kReserveMargin,
                        "out[" + std::to_string(i) + "] < reserve"});
  }
  p.linear.push_back({{{n, 1.0}, {0, -hops.front().reserve_in() / hops.back().reserve_out()}},
                      0.0,
                      "chain " + rotated.entry_token().str() + " (closing output >= entry input)"});
  for (int k = 0; k <= n; ++k) {
    p.linear.push_back({{{k, 1.0}}, 0.0, "var[" + std::to_string(k) + "] >= 0"});
  }
  finalize_cost(sp, raw);
  return sp;
}

Eigen::VectorXd equality_point(const Loop& rotated, const std::vector<double>& in, double closing_out) {
  const auto& hops = rotated.hops();
  const std::size_t n = hops.size();
  Eigen::VectorXd z(static_cast<Eigen::Index>(n + 1));
  for (std::size_t i = 0; i < n; ++i) z[static_cast<Eigen::Index>(i)] = in[i] / hops[i].reserve_in();
  z[static_cast<Eigen::Index>(n)] = closing_out / hops.back().reserve_out();
  return z;
}

}  // namespace

ConvexSolution solve_equality_variant(const Loop& loop, const TokenId& entry, const PriceTable& prices,
                                      const ConvexOptions& options) {
  validate_tolerance(options);
  require_loop_prices(loop, prices);
  const Loop rotated = loop.rotated_to(entry);
  const std::size_t n = loop.size();
  const ScaledProgram sp = equality_program(rotated, prices);

  // Rotated hop k is original hop (offset + k).
  std::size_t offset = 0;
  while (loop.hops()[offset].token_in() != entry) ++offset;

  if (!loop_is_arbitrage(rotated) || !(sp.cost_scale > 0.0)) {
    FlowVector zero = FlowVector::zeros(n);
    const double kkt = barrier::kkt_residual(sp.program, equality_point(rotated, zero.in, 0.0));
    return package(loop, prices, std::move(zero), kkt, 0);
  }

  const FlowVector start = interior_chain(rotated, entry, half_optimal_input(rotated));
  const Eigen::VectorXd z0 = equality_point(rotated, start.in, start.out.back());
  barrier::Result res = barrier::solve(sp.program, z0, barrier_options(sp.program, sp.cost_scale, options));
  const std::string failure = finish(sp.program, res);

  const auto& hops = rotated.hops();
  std::vector<double> in(n);
  for (std::size_t i = 0; i < n; ++i) {
    in[i] = std::max(0.0, res.z[static_cast<Eigen::Index>(i)] * hops[i].reserve_in());
  }
  double closing = std::max(0.0, res.z[static_cast<Eigen::Index>(n)] * hops.back().reserve_out());
  // Inward rounding along the chain; the closing constraint is restored by
  // shrinking the entry amount, which only loosens every downstream pool.
  for (std::size_t pass = 0; pass < 4 * n + 4; ++pass) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double cap = std::min(hops[i].swap(in[i]), (1.0 - kReserveMargin) * hops[i].reserve_out());
      in[i + 1] = std::min(in[i + 1], cap);
    }
    closing = std::min({closing, hops.back().swap(in[n - 1]),
                        (1.0 - kReserveMargin) * hops.back().reserve_out()});
    if (in[0] <= closing) break;
    in[0] = closing;
  }

  FlowVector flows = FlowVector::zeros(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = (offset + k) % n;
    flows.in[i] = in[k];
    flows.out[i] = k + 1 < n ? in[k + 1] : closing;
  }
  const double kkt = barrier::kkt_residual(sp.program, equality_point(rotated, in, closing));
  ConvexSolution sol = package(loop, prices, std::move(flows), kkt, res.newton_steps);
  if (!failure.empty()) {
    throw SolverError("equality-constrained solver " + failure + " on loop " + loop.label(), std::move(sol));
  }
  return sol;
}

}  // namespace arb
