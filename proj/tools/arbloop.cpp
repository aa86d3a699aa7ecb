// arbloop: detect cyclic arbitrage across constant-product pools and compare
// profit-maximization strategies.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 solver non-convergence
// (only with --strict).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "arb/compare.hpp"
#include "arb/convex.hpp"
#include "arb/errors.hpp"
#include "arb/market_data.hpp"
#include "arb/market_graph.hpp"
#include "arb/oracle.hpp"
#include "arb/strategies.hpp"
#include "arb/synthetic.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitSolver = 3;

struct MarketArgs {
  std::string snapshot;
  std::string prices;
  int length = 3;
  double min_tvl = 30000.0;
  double min_reserve = 100.0;
  std::optional<double> fee;
};

void add_market_flags(CLI::App* cmd, MarketArgs& args) {
  cmd->add_option("--snapshot", args.snapshot, "Pool snapshot (CSV or JSON)")->required();
  cmd->add_option("--prices", args.prices, "CEX price table (CSV or JSON)")->required();
  cmd->add_option("--length", args.length, "Loop length")->capture_default_str()->check(CLI::Range(2, 64));
  cmd->add_option("--min-tvl", args.min_tvl, "Drop pools below this TVL in USD")->capture_default_str();
  cmd->add_option("--min-reserve", args.min_reserve, "Drop pools with a reserve below this")
      ->capture_default_str();
  cmd->add_option("--fee", args.fee, "Fee rate applied to every pool (default: per record, else 0.003)");
}

struct Market {
  arb::MarketSnapshot snapshot;
  arb::PriceTable prices;
};

Market load_market(const MarketArgs& args) {
  arb::SnapshotOptions opts;
  opts.fee_override = args.fee;
  const std::vector<arb::Pool> pools = arb::load_snapshot(args.snapshot, opts);
  arb::PriceTable prices = arb::load_prices(args.prices);
  arb::MarketSnapshot snap = arb::build_graph(pools, prices, {args.min_tvl, args.min_reserve});
  std::cerr << "kept " << snap.pools.size() << " pools over " << snap.tokens.size() << " tokens, dropped "
            << snap.dropped_pools << '\n';
  return {std::move(snap), std::move(prices)};
}

// Writes to --out when given, else stdout.
template <typename Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw arb::DataError({path + ": cannot open for writing"});
  write(out);
}

int run_detect(const MarketArgs& args) {
  const Market m = load_market(args);
  const auto found = arb::detect_arbitrage(m.snapshot, args.length);
  std::cout << "loop,log_sum\n";
  for (const auto& d : found) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", d.log_sum);
    std::cout << d.loop.label() << ',' << buf << '\n';
  }
  std::cout << "# " << found.size() << " arbitrage loop(s) of length " << args.length << '\n';
  return 0;
}

int count_nonconverged(const std::vector<arb::ComparisonRow>& rows) {
  int n = 0;
  for (const auto& r : rows) n += r.convex_converged ? 0 : 1;
  return n;
}

int finish(const std::vector<arb::ComparisonRow>& rows, bool strict) {
  const int failed = count_nonconverged(rows);
  if (failed > 0) std::cerr << failed << " convex solve(s) did not converge\n";
  return strict && failed > 0 ? kExitSolver : 0;
}

int run_compare(const MarketArgs& args, const std::string& strategies, const std::string& out,
                double tolerance, bool strict) {
  const arb::StrategySet set = arb::StrategySet::parse(strategies);
  const Market m = load_market(args);
  const auto found = arb::detect_arbitrage(m.snapshot, args.length);
  const auto rows = arb::compare_loops(found, m.prices, set, {tolerance});
  emit(out, [&](std::ostream& os) {
    arb::write_comparison_csv(os, rows, set, static_cast<std::size_t>(args.length));
  });
  std::cerr << rows.size() << " arbitrage loop(s) compared\n";
  return finish(rows, strict);
}

int run_sweep(const MarketArgs& args, const std::string& strategies, const std::string& out, double tolerance,
              bool strict, const std::string& token, double from, double to, double step) {
  const arb::StrategySet set = arb::StrategySet::parse(strategies);
  const Market m = load_market(args);
  const auto found = arb::detect_arbitrage(m.snapshot, args.length);
  const arb::SweepRange range{arb::TokenId(token), from, to, step};
  const auto rows = arb::sweep_prices(found, m.prices, range, set, {tolerance});
  emit(out, [&](std::ostream& os) {
    arb::write_comparison_csv(os, rows, set, static_cast<std::size_t>(args.length), range.token);
  });
  return finish(rows, strict);
}

arb::Loop loop_from_spec(const arb::MarketSnapshot& snap, const std::string& spec) {
  std::vector<arb::TokenId> tokens;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) tokens.emplace_back(item);
  }
  if (tokens.size() < 2) throw arb::DomainError("--loop needs at least two tokens");
  std::vector<arb::Hop> hops;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const arb::TokenId& from = tokens[i];
    const arb::TokenId& to = tokens[(i + 1) % tokens.size()];
    std::size_t found = arb::kNoPoolIndex;
    for (std::size_t p = 0; p < snap.pools.size() && found == arb::kNoPoolIndex; ++p) {
      if (snap.pools[p].has_token(from) && snap.pools[p].has_token(to)) found = p;
    }
    if (found == arb::kNoPoolIndex) {
      throw arb::DomainError("no pool between " + from.str() + " and " + to.str() + " in the snapshot");
    }
    hops.emplace_back(snap.pools[found], from, found);
  }
  return arb::Loop(std::move(hops));
}

int run_oracle(const MarketArgs& args, const std::string& loop_spec, std::size_t grid, std::size_t grid3,
               double tolerance) {
  const Market m = load_market(args);
  const arb::Loop loop = loop_from_spec(m.snapshot, loop_spec);
  const auto check = arb::is_arbitrage_loop(loop);
  std::printf("loop %s  log_sum %.9g  arbitrage %s\n", loop.label().c_str(), check.log_sum,
              check.profitable ? "yes" : "no");

  std::printf("%-8s %14s %14s %14s %14s %s\n", "entry", "closed_form", "grid", "delta", "grid_bound",
              "within");
  for (const arb::TokenId& t : loop.tokens()) {
    const arb::SingleEntryResult exact = arb::optimize_single_entry(loop, t, m.prices);
    const auto g = arb::grid_single_entry(loop, t, m.prices, grid, 2.0 * exact.optimal_input + 1.0);
    const double delta = exact.monetized_profit - g.best_monetized;
    const bool ok = delta >= -1e-9 * (1.0 + exact.monetized_profit) && delta <= g.resolution_bound + 1e-12;
    std::printf("%-8s %14.6f %14.6f %14.3e %14.3e %s\n", t.str().c_str(), exact.monetized_profit,
                g.best_monetized, delta, g.resolution_bound, ok ? "yes" : "NO");
  }

  const arb::ConvexSolution sol = arb::solve_convex(loop, m.prices, {tolerance});
  std::printf("convex solver  %.6f  (kkt %.2e, %d Newton steps)\n", sol.monetized_profit, sol.kkt_residual,
              sol.iterations);
  if (loop.size() == 3) {
    const auto cube = arb::grid_convex3(loop, m.prices, grid3);
    const double excess = cube.best_monetized - sol.monetized_profit;
    std::printf("convex grid    %.6f  (%zu feasible points)  grid - solver %.3e  %s\n", cube.best_monetized,
                cube.feasible_points, excess, excess <= 1e-6 * (1.0 + sol.monetized_profit) ? "ok" : "EXCEEDS");
  } else {
    std::printf("convex grid    skipped (three-hop loops only)\n");
  }
  return 0;
}

int run_synth(const arb::SyntheticSpec& spec, const std::string& snapshot_out, const std::string& prices_out) {
  const arb::SyntheticMarket market = arb::make_synthetic_market(spec);
  emit(snapshot_out, [&](std::ostream& os) { arb::write_snapshot_csv(os, market.pools); });
  emit(prices_out, [&](std::ostream& os) { arb::write_prices_csv(os, market.prices); });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cyclic arbitrage detection and monetized-profit strategies for constant-product pools"};
  app.require_subcommand(1);

  MarketArgs market;
  std::string strategies = "single-entry-all,maxprice,maxmax,convex";
  std::string out;
  double tolerance = arb::kDefaultConvexTolerance;
  bool strict = false;

  const auto valid_strategies = [](const std::string& list) {
    try {
      arb::StrategySet::parse(list);
      return std::string();
    } catch (const arb::DomainError& e) {
      return std::string(e.what());
    }
  };

  auto* detect = app.add_subcommand("detect", "List arbitrage loops, sorted by log relative-price sum");
  add_market_flags(detect, market);

  auto* compare = app.add_subcommand("compare", "Compare strategies on every arbitrage loop (CSV)");
  add_market_flags(compare, market);
  compare->add_option("--strategies", strategies, "Comma-separated strategies")
      ->capture_default_str()
      ->check(valid_strategies);
  compare->add_option("--out", out, "Output CSV (default stdout)");
  compare->add_option("--tolerance", tolerance, "Convex solver tolerance")->capture_default_str();
  compare->add_flag("--strict", strict, "Exit 3 if any convex solve fails to converge");

  std::string sweep_token;
  double sweep_from = 0.0;
  double sweep_to = 20.0;
  double sweep_step = 0.2;
  auto* sweep = app.add_subcommand("sweep", "Recompute the comparison while sweeping one token's price");
  add_market_flags(sweep, market);
  sweep->add_option("--token", sweep_token, "Token whose CEX price is swept")->required();
  sweep->add_option("--from", sweep_from)->capture_default_str();
  sweep->add_option("--to", sweep_to)->capture_default_str();
  sweep->add_option("--step", sweep_step)->capture_default_str();
  sweep->add_option("--strategies", strategies, "Comma-separated strategies")
      ->capture_default_str()
      ->check(valid_strategies);
  sweep->add_option("--out", out, "Output CSV (default stdout)");
  sweep->add_option("--tolerance", tolerance, "Convex solver tolerance")->capture_default_str();
  sweep->add_flag("--strict", strict, "Exit 3 if any convex solve fails to converge");

  std::string loop_spec;
  std::size_t grid = 1000000;
  std::size_t grid3 = 200;
  auto* oracle = app.add_subcommand("oracle", "Check one loop against brute-force grid searches");
  add_market_flags(oracle, market);
  oracle->add_option("--loop", loop_spec, "Tokens in traversal order, e.g. X,Y,Z")->required();
  oracle->add_option("--grid", grid, "Points for the single-entry grid")->capture_default_str();
  oracle->add_option("--grid3", grid3, "Points per axis for the three-hop convex grid")->capture_default_str();
  oracle->add_option("--tolerance", tolerance, "Convex solver tolerance")->capture_default_str();

  arb::SyntheticSpec synth_spec;
  std::string synth_snapshot = "snapshot.csv";
  std::string synth_prices = "prices.csv";
  auto* synth = app.add_subcommand("synth", "Write a synthetic snapshot and price table");
  synth->add_option("--tokens", synth_spec.tokens)->capture_default_str();
  synth->add_option("--pools", synth_spec.pools)->capture_default_str();
  synth->add_option("--mispricing", synth_spec.mispricing)->capture_default_str();
  synth->add_option("--seed", synth_spec.seed)->capture_default_str();
  synth->add_option("--snapshot-out", synth_snapshot)->capture_default_str();
  synth->add_option("--prices-out", synth_prices)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*detect) return run_detect(market);
    if (*compare) return run_compare(market, strategies, out, tolerance, strict);
    if (*sweep) {
      return run_sweep(market, strategies, out, tolerance, strict, sweep_token, sweep_from, sweep_to, sweep_step);
    }
    if (*oracle) return run_oracle(market, loop_spec, grid, grid3, tolerance);
    if (*synth) return run_synth(synth_spec, synth_snapshot, synth_prices);
  } catch (const arb::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const arb::SolverError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const arb::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
