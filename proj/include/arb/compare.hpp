#pragma once

// Strategy comparison over many loops: the per-loop kernel, its OpenMP batch
// driver with a serial reference, price sweeps, and the CSV writer behind the
// `compare` and `sweep` commands.
//
// CSV columns (only the requested strategy groups appear):
//   [sweep_token,sweep_price,] loop, log_sum, token0..token{k-1},
//   entry{i}_input, entry{i}_profit, entry{i}_usd          single-entry-all
//   maxprice_entry, maxprice_usd                          maxprice
//   maxmax_entry, maxmax_usd, maxmax_net{i}                maxmax
//   convex_usd, convex_status, convex_kkt, convex_net{i}   convex
// Index i refers to token{i}; net{i} is the net amount of that token kept.

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arb/convex.hpp"
#include "arb/market_graph.hpp"
#include "arb/strategies.hpp"

namespace arb {

struct StrategySet {
  bool single_entry_all = true;
  bool maxprice = true;
  bool maxmax = true;
  bool convex = true;

  /// Comma-separated subset of {single-entry-all, maxprice, maxmax, convex}.
  /// Throws DomainError on an unknown name.
  static StrategySet parse(std::string_view list);
};

struct ComparisonRow {
  Loop loop;
  double log_sum = 0.0;
  std::optional<double> sweep_price;
  std::vector<SingleEntryResult> per_entry;
  std::optional<StrategyReport> maxprice;
  std::optional<StrategyReport> maxmax;
  std::optional<ConvexSolution> convex;
  bool convex_converged = true;
};

ComparisonRow compare_loop(const Loop& loop, double log_sum, const PriceTable& prices,
                           const StrategySet& strategies, const ConvexOptions& options = {});

/// One row per loop, in input order. Solver non-convergence is recorded in
/// the row, never thrown.
std::vector<ComparisonRow> compare_loops(std::span<const DetectedLoop> loops, const PriceTable& prices,
                                         const StrategySet& strategies, const ConvexOptions& options = {});
std::vector<ComparisonRow> compare_loops_serial(std::span<const DetectedLoop> loops,
                                                const PriceTable& prices, const StrategySet& strategies,
                                                const ConvexOptions& options = {});

struct SweepRange {
  TokenId token;
  double from = 0.0;
  double to = 0.0;
  double step = 1.0;

  /// from, from + step, ..., to (inclusive, count rounded to the nearest step).
  std::vector<double> points() const;
};

/// Rows ordered by price point, then by loop.
std::vector<ComparisonRow> sweep_prices(std::span<const DetectedLoop> loops, const PriceTable& prices,
                                        const SweepRange& range, const StrategySet& strategies,
                                        const ConvexOptions& options = {});

/// Fixed six-significant-digit formatting; byte-identical for identical rows.
void write_comparison_csv(std::ostream& out, std::span<const ComparisonRow> rows,
                          const StrategySet& strategies, std::size_t loop_length,
                          const std::optional<TokenId>& sweep_token = std::nullopt);

std::string format_sig6(double value);

}  // namespace arb
