// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "arb/compare.hpp"
#include "arb/convex.hpp"
#include "arb/oracle.hpp"
#include "arb/strategies.hpp"
#include "arb/synthetic.hpp"
#include "support.hpp"

using namespace arb;
using arb::testing::ExampleMarket;
using arb::testing::InstanceGenerator;
using arb::testing::rel_diff;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Outcome worked_example() {
  Outcome o;
  const auto t0 = Clock::now();
  const ExampleMarket m;
  const Loop loop = m.forward();
  const struct {
    TokenId entry;
    double input, profit, usd;
  } table[] = {{m.x, 27.0, 16.8, 33.7}, {m.y, 31.5, 19.7, 201.2}, {m.z, 16.4, 10.3, 205.6}};
  for (const auto& e : table) {
    const SingleEntryResult r = optimize_single_entry(loop, e.entry, m.prices);
    o.require(std::abs(r.optimal_input - e.input) <= 0.1, "input for " + e.entry.str() + fmt(" = %.4f", r.optimal_input));
    o.require(std::abs(r.profit_tokens - e.profit) <= 0.1, "profit for " + e.entry.str() + fmt(" = %.4f", r.profit_tokens));
    o.require(std::abs(r.monetized_profit - e.usd) <= 0.5, "usd for " + e.entry.str() + fmt(" = %.4f", r.monetized_profit));
  }
  const StrategyReport mp = maxprice(loop, m.prices);
  const StrategyReport mm = maxmax(loop, m.prices);
  o.require(*mp.entry == m.z && std::abs(mp.monetized_profit - 205.6) <= 0.5, "MaxPrice");
  o.require(*mm.entry == m.z && std::abs(mm.monetized_profit - 205.6) <= 0.5, "MaxMax");
  const ConvexSolution c = solve_convex(loop, m.prices);
  o.require(std::abs(c.monetized_profit - 206.1) <= 0.5, fmt("convex usd = %.4f", c.monetized_profit));
  const double in[] = {31.34, 42.61, 17.05};
  const double out[] = {47.61, 24.81, 31.34};
  for (std::size_t i = 0; i < 3; ++i) {
    o.require(std::abs(c.flows.in[i] - in[i]) <= 0.2 && std::abs(c.flows.out[i] - out[i]) <= 0.2,
              "convex flow on hop " + std::to_string(i));
  }
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 1.0, fmt("took %.3f s", elapsed));
  if (o.pass) o.detail = fmt("convex %.4f $, MaxMax %.4f $", c.monetized_profit, mm.monetized_profit);
  return o;
}

Outcome fee_free_product() {
  Outcome o;
  const ExampleMarket m(0.0);
  const auto check = is_arbitrage_loop(m.forward());
  const double product = std::exp(check.log_sum);
  o.require(check.profitable, "loop not flagged");
  o.require(std::abs(product - 8.0 / 3.0) <= 1e-12, fmt("product %.15f", product));
  double direct = 1.0;
  for (const Hop& h : m.forward().hops()) direct *= h.relative_price();
  o.require(direct == 2.0 * (2.0 / 3.0) * 2.0, fmt("direct product %.17g", direct));
  if (o.pass) o.detail = fmt("product %.15f", product);
  return o;
}

Outcome dominance() {
  Outcome o;
  InstanceGenerator gen(1001);
  int count = 0;
  double worst = 0.0;
  for (; count < 1000; ++count) {
    const auto inst = gen.next_with_arbitrage(gen.uniform_int(3, 5), true);
    const double mp = maxprice(inst.loop, inst.prices).monetized_profit;
    const double mm = maxmax(inst.loop, inst.prices).monetized_profit;
    const double cv = solve_convex(inst.loop, inst.prices).monetized_profit;
    const double tol = 1e-6 * std::max(1.0, mm);
    o.require(mm >= mp, "MaxMax below MaxPrice on loop " + std::to_string(count));
    o.require(cv >= mm - tol, "convex below MaxMax on loop " + std::to_string(count) + fmt(": %.9g vs %.9g", cv, mm));
    worst = std::max(worst, (mm - cv) / std::max(1.0, mm));
  }
  if (o.pass) o.detail = std::to_string(count) + " loops" + fmt(", worst relative shortfall %.2e", worst);
  return o;
}

Outcome no_arbitrage() {
  Outcome o;
  InstanceGenerator gen(1002);
  int count = 0;
  for (; count < 1000; ++count) {
    const auto inst = gen.next(gen.uniform_int(2, 6));
    const bool arbitrage = is_arbitrage_loop(inst.loop).profitable;
    bool all_zero = true;
    for (const TokenId& t : inst.loop.tokens()) {
      all_zero = all_zero && optimize_single_entry(inst.loop, t, inst.prices).optimal_input == 0.0;
    }
    o.require(all_zero == !arbitrage, "single-entry disagrees with the log-sum on loop " + std::to_string(count));
    if (!arbitrage) {
      const double cv = solve_convex(inst.loop, inst.prices).monetized_profit;
      o.require(std::abs(cv) <= 1e-6, fmt("convex profit %.3g without arbitrage", cv));
    }
  }
  if (o.pass) o.detail = std::to_string(count) + " loops";
  return o;
}

Outcome grid_oracles() {
  Outcome o;
  InstanceGenerator gen(1003);
  double worst_gap = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto inst = gen.next_with_arbitrage(3, true);
    for (const TokenId& t : inst.loop.tokens()) {
      const SingleEntryResult r = optimize_single_entry(inst.loop, t, inst.prices);
      const LineGridResult g = grid_single_entry(inst.loop, t, inst.prices, 1'000'000, 2.0 * r.optimal_input);
      const double slack = 1e-9 * std::max(1.0, r.monetized_profit);
      o.require(g.best_monetized <= r.monetized_profit + slack, "1-D grid above closed form");
      o.require(r.monetized_profit - g.best_monetized <= g.resolution_bound + slack, "1-D grid beyond its bound");
    }
    const ConvexSolution c = solve_convex(inst.loop, inst.prices);
    const CubeGridResult cube = grid_convex3(inst.loop, inst.prices, 200);
    o.require(cube.best_monetized <= c.monetized_profit + 1e-8 * std::max(1.0, c.monetized_profit),
              "3-D grid above convex solver" + fmt(": %.9g vs %.9g", cube.best_monetized, c.monetized_profit));
    worst_gap = std::max(worst_gap, (c.monetized_profit - cube.best_monetized) / std::max(1.0, c.monetized_profit));
  }
  if (o.pass) o.detail = fmt("50 loops, 3-D grid within %.2e of the solver", worst_gap);
  return o;
}

Outcome precision() {
  Outcome o;
  InstanceGenerator gen(1004);
  double worst_kkt = 0.0, worst_bis = 0.0, worst_comp = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto inst = gen.next_with_arbitrage(gen.uniform_int(3, 5), true);
    worst_kkt = std::max(worst_kkt, solve_convex(inst.loop, inst.prices).kkt_residual);
    for (const TokenId& t : inst.loop.tokens()) {
      const double closed = optimize_single_entry(inst.loop, t, inst.prices).optimal_input;
      worst_bis = std::max(worst_bis, rel_diff(bisect_optimal_input(inst.loop, t).optimal_input, closed));
    }
  }
  for (int i = 0; i < 500; ++i) {
    const auto inst = gen.next(gen.uniform_int(2, 10));
    const ComposedSwap c = compose_path(inst.loop.hops());
    for (int k = 0; k < 10; ++k) {
      const double d = gen.log_uniform(1e-4, 1e8);
      worst_comp = std::max(worst_comp, rel_diff(c.output(d), evaluate_path(inst.loop.hops(), d)));
    }
  }
  o.require(worst_kkt <= 1e-8, fmt("KKT residual %.2e", worst_kkt));
  o.require(worst_bis <= 1e-9, fmt("bisection gap %.2e", worst_bis));
  o.require(worst_comp <= 1e-12, fmt("composition gap %.2e", worst_comp));
  if (o.pass) {
    o.detail = fmt("KKT %.1e, bisection %.1e", worst_kkt, worst_bis) + fmt(", composition %.1e", worst_comp);
  }
  return o;
}

Outcome long_loops() {
  Outcome o;
  InstanceGenerator gen(1005);
  double worst_mm = 0.0, worst_cv = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto inst = gen.next_with_arbitrage(10, true);
    auto t0 = Clock::now();
    maxmax(inst.loop, inst.prices);
    worst_mm = std::max(worst_mm, seconds_since(t0));
    t0 = Clock::now();
    solve_convex(inst.loop, inst.prices);
    worst_cv = std::max(worst_cv, seconds_since(t0));
  }
  o.require(worst_mm < 0.05, fmt("MaxMax took %.4f s", worst_mm));
  o.require(worst_cv < 10.0, fmt("convex took %.3f s", worst_cv));
  if (o.pass) o.detail = fmt("MaxMax %.2f ms, convex %.2f ms", worst_mm * 1e3, worst_cv * 1e3);
  return o;
}

Outcome synthetic_snapshot() {
  Outcome o;
  const SyntheticMarket market = make_synthetic_market({});
  o.require(market.pools.size() == 208, "pool count");
  std::string detail;
  for (int length : {3, 4}) {
    const auto t0 = Clock::now();
    const auto snap = build_graph(market.pools, market.prices, {});
    const auto found = detect_arbitrage(snap, length);
    const StrategySet set;
    const auto rows = compare_loops(found, market.prices, set);
    std::ostringstream csv;
    write_comparison_csv(csv, rows, set, static_cast<std::size_t>(length));
    const double elapsed = seconds_since(t0);
    o.require(elapsed < 60.0, fmt("length %.0f took %.1f s", length, elapsed));
    for (const auto& r : rows) o.require(r.convex_converged, "non-converged row " + r.loop.label());
    detail += (detail.empty() ? "" : "; ") + std::to_string(found.size()) + " loops of length " +
              std::to_string(length) + fmt(" in %.2f s", elapsed);
  }
  if (o.pass) o.detail = detail;
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"worked example", worked_example},
      {"fee-free price product", fee_free_product},
      {"strategy dominance", dominance},
      {"no-arbitrage equivalence", no_arbitrage},
      {"grid oracles", grid_oracles},
      {"numerical precision", precision},
      {"long loops", long_loops},
      {"synthetic snapshot", synthetic_snapshot},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
