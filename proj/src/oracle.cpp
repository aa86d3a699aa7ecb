#include "arb/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <vector>

#include "arb/errors.hpp"

namespace arb {

namespace {

double nested_out(const Loop& loop, double amount) {
  for (const Hop& h : loop.hops()) amount = h.swap(amount);
  return amount;
}

double nested_slope(const Loop& loop, double amount) {
  double d = 1.0;
  for (const Hop& h : loop.hops()) {
    d *= h.swap_derivative(amount);
    amount = h.swap(amount);
  }
  return d;
}

}  // namespace

LineGridResult grid_single_entry(const Loop& loop, const TokenId& entry, const PriceTable& prices,
                                 std::size_t points, double upper) {
  if (points < 2) throw DomainError("grid needs at least two points");
  if (!(upper > 0.0)) throw DomainError("grid upper bound must be positive");
  const Loop rotated = loop.rotated_to(entry);
  const double price = prices.at(entry);
  const double step = upper / static_cast<double>(points - 1);
  const auto n = static_cast<std::ptrdiff_t>(points);

  double best_profit = 0.0;
  double best_input = 0.0;
#pragma omp parallel
  {
    double local_profit = 0.0;
    double local_input = 0.0;
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t k = 0; k < n; ++k) {
      const double in = step * static_cast<double>(k);
      const double profit = nested_out(rotated, in) - in;
      if (profit > local_profit) {
        local_profit = profit;
        local_input = in;
      }
    }
#pragma omp critical
    {
      if (local_profit > best_profit || (local_profit == best_profit && local_input < best_input)) {
        best_profit = local_profit;
        best_input = local_input;
      }
    }
  }

  LineGridResult r;
  r.best_input = best_input;
  r.best_profit_tokens = best_profit;
  r.best_monetized = best_profit * price;
  // The slope of out(Δ) − Δ decreases monotonically, so its magnitude peaks
  // at an endpoint.
  const double lipschitz =
      std::max(std::abs(nested_slope(rotated, 0.0) - 1.0), std::abs(nested_slope(rotated, upper) - 1.0));
  r.resolution_bound = lipschitz * 0.5 * step * price;
  return r;
}

double break_even_input(const Loop& loop) {
  if (nested_slope(loop, 0.0) <= 1.0) return 0.0;
  double lo = 0.0;
  double hi = loop.hops().front().reserve_in();
  while (nested_out(loop, hi) >= hi) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (nested_out(loop, mid) >= mid) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

CubeGridResult grid_convex3(const Loop& loop, const PriceTable& prices, std::size_t per_axis) {
  if (loop.size() != 3) throw DomainError("the 3-D grid oracle needs a three-hop loop");
  if (per_axis < 2) throw DomainError("grid needs at least two points per axis");
  const auto& hops = loop.hops();
  const double p1 = prices.at(hops[0].token_in());
  const double p2 = prices.at(hops[1].token_in());
  const double p3 = prices.at(hops[2].token_in());

  CubeGridResult r;
  r.best_flows = FlowVector::zeros(3);
  r.max_entry_input = break_even_input(loop);
  if (!(r.max_entry_input > 0.0)) {
    r.feasible_points = 1;
    return r;
  }
  const double step = r.max_entry_input / static_cast<double>(per_axis - 1);
  const double frac_step = 1.0 / static_cast<double>(per_axis - 1);
  const auto n = static_cast<std::ptrdiff_t>(per_axis);

  double best = 0.0;
  std::size_t best_i = 0, best_j = 0, best_k = 0;
  std::size_t feasible = 0;
#pragma omp parallel reduction(+ : feasible)
  {
    double local = 0.0;
    std::size_t li = 0, lj = 0, lk = 0;
#pragma omp for schedule(dynamic, 4) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const double in1 = step * static_cast<double>(i);
      const double out1 = hops[0].swap(in1);
      for (std::ptrdiff_t j = 0; j < n; ++j) {
        const double in2 = out1 * frac_step * static_cast<double>(j);
        const double out2 = hops[1].swap(in2);
        for (std::ptrdiff_t k = 0; k < n; ++k) {
          const double in3 = out2 * frac_step * static_cast<double>(k);
          const double out3 = hops[2].swap(in3);
          if (out3 < in1) continue;
          ++feasible;
          const double value = p1 * (out3 - in1) + p2 * (out1 - in2) + p3 * (out2 - in3);
          if (value > local) {
            local = value;
            li = static_cast<std::size_t>(i);
            lj = static_cast<std::size_t>(j);
            lk = static_cast<std::size_t>(k);
          }
        }
      }
    }
#pragma omp critical
    {
      if (local > best || (local == best && std::tie(li, lj, lk) < std::tie(best_i, best_j, best_k))) {
        best = local;
        best_i = li;
        best_j = lj;
        best_k = lk;
      }
    }
  }
  r.feasible_points = feasible;
  r.best_monetized = best;
  const double in1 = step * static_cast<double>(best_i);
  const double out1 = hops[0].swap(in1);
  const double in2 = out1 * frac_step * static_cast<double>(best_j);
  const double out2 = hops[1].swap(in2);
  const double in3 = out2 * frac_step * static_cast<double>(best_k);
  r.best_flows.in = {in1, in2, in3};
  r.best_flows.out = {out1, out2, hops[2].swap(in3)};
  return r;
}

}  // namespace arb
