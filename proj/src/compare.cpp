#include "arb/compare.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "arb/errors.hpp"

namespace arb {

StrategySet StrategySet::parse(std::string_view list) {
  StrategySet set{false, false, false, false};
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const auto comma = list.find(',', pos);
    const std::string_view name = list.substr(pos, comma == std::string_view::npos ? list.npos : comma - pos);
    if (name == "single-entry-all") {
      set.single_entry_all = true;
    } else if (name == "maxprice") {
      set.maxprice = true;
    } else if (name == "maxmax") {
      set.maxmax = true;
    } else if (name == "convex") {
      set.convex = true;
    } else if (!name.empty()) {
      throw DomainError("unknown strategy '" + std::string(name) +
                        "' (expected single-entry-all, maxprice, maxmax, convex)");
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return set;
}

ComparisonRow compare_loop(const Loop& loop, double log_sum, const PriceTable& prices,
                           const StrategySet& strategies, const ConvexOptions& options) {
  ComparisonRow row{loop, log_sum, {}, {}, {}, {}, {}, true};
  if (strategies.single_entry_all || strategies.maxmax) {
    StrategyReport mm = maxmax(loop, prices);
    if (strategies.single_entry_all) row.per_entry = mm.per_entry;
    if (strategies.maxmax) row.maxmax = std::move(mm);
  }
  if (strategies.maxprice) row.maxprice = arb::maxprice(loop, prices);
  if (strategies.convex) {
    try {
      row.convex = solve_convex(loop, prices, options);
    } catch (const SolverError& e) {
      row.convex = e.best();
      row.convex_converged = false;
    }
  }
  return row;
}

namespace {

template <bool Parallel>
std::vector<ComparisonRow> compare_batch(std::span<const DetectedLoop> loops, const PriceTable& prices,
                                         const StrategySet& strategies, const ConvexOptions& options) {
  std::vector<std::optional<ComparisonRow>> slots(loops.size());
  const auto n = static_cast<std::ptrdiff_t>(loops.size());
  if constexpr (Parallel) {
    // Exceptions may not cross the parallel region; the first one is rethrown.
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto& d = loops[static_cast<std::size_t>(i)];
      try {
        slots[static_cast<std::size_t>(i)] = compare_loop(d.loop, d.log_sum, prices, strategies, options);
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto& d = loops[static_cast<std::size_t>(i)];
      slots[static_cast<std::size_t>(i)] = compare_loop(d.loop, d.log_sum, prices, strategies, options);
    }
  }
  std::vector<ComparisonRow> rows;
  rows.reserve(slots.size());
  for (auto& s : slots) rows.push_back(std::move(*s));
  return rows;
}

}  // namespace

std::vector<ComparisonRow> compare_loops(std::span<const DetectedLoop> loops, const PriceTable& prices,
                                         const StrategySet& strategies, const ConvexOptions& options) {
  return compare_batch<true>(loops, prices, strategies, options);
}

std::vector<ComparisonRow> compare_loops_serial(std::span<const DetectedLoop> loops,
                                                const PriceTable& prices, const StrategySet& strategies,
                                                const ConvexOptions& options) {
  return compare_batch<false>(loops, prices, strategies, options);
}

std::vector<double> SweepRange::points() const {
  if (!(step > 0.0) || !(to >= from)) throw DomainError("sweep needs step > 0 and to >= from");
  const auto count = static_cast<std::size_t>(std::llround((to - from) / step)) + 1;
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(from + step * static_cast<double>(k));
  return out;
}

std::vector<ComparisonRow> sweep_prices(std::span<const DetectedLoop> loops, const PriceTable& prices,
                                        const SweepRange& range, const StrategySet& strategies,
                                        const ConvexOptions& options) {
  std::vector<ComparisonRow> rows;
  for (const double price : range.points()) {
    PriceTable swept = prices;
    swept.set(range.token, price);
    for (ComparisonRow& row : compare_loops(loops, swept, strategies, options)) {
      row.sweep_price = price;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string format_sig6(double value) {
  if (value == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

void write_comparison_csv(std::ostream& out, std::span<const ComparisonRow> rows,
                          const StrategySet& strategies, std::size_t loop_length,
                          const std::optional<TokenId>& sweep_token) {
  const std::size_t k = loop_length;
  std::vector<std::string> header;
  if (sweep_token) {
    header.emplace_back("sweep_token");
    header.emplace_back("sweep_price");
  }
  header.emplace_back("loop");
  header.emplace_back("log_sum");
  for (std::size_t i = 0; i < k; ++i) header.push_back("token" + std::to_string(i));
  if (strategies.single_entry_all) {
    for (std::size_t i = 0; i < k; ++i) {
      const std::string p = "entry" + std::to_string(i);
      header.push_back(p + "_input");
      header.push_back(p + "_profit");
      header.push_back(p + "_usd");
    }
  }
  if (strategies.maxprice) {
    header.emplace_back("maxprice_entry");
    header.emplace_back("maxprice_usd");
  }
  if (strategies.maxmax) {
    header.emplace_back("maxmax_entry");
    header.emplace_back("maxmax_usd");
    for (std::size_t i = 0; i < k; ++i) header.push_back("maxmax_net" + std::to_string(i));
  }
  if (strategies.convex) {
    header.emplace_back("convex_usd");
    header.emplace_back("convex_status");
    header.emplace_back("convex_kkt");
    for (std::size_t i = 0; i < k; ++i) header.push_back("convex_net" + std::to_string(i));
  }
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';

  for (const ComparisonRow& row : rows) {
    if (row.loop.size() != k) throw DomainError("row " + row.loop.label() + " has the wrong loop length");
    const std::vector<TokenId> tokens = row.loop.tokens();
    std::vector<std::string> f;
    if (sweep_token) {
      f.push_back(sweep_token->str());
      f.push_back(format_sig6(row.sweep_price.value_or(0.0)));
    }
    f.push_back(row.loop.label());
    f.push_back(format_sig6(row.log_sum));
    for (const TokenId& t : tokens) f.push_back(t.str());
    if (strategies.single_entry_all) {
      for (const SingleEntryResult& r : row.per_entry) {
        f.push_back(format_sig6(r.optimal_input));
        f.push_back(format_sig6(r.profit_tokens));
        f.push_back(format_sig6(r.monetized_profit));
      }
    }
    if (strategies.maxprice) {
      f.push_back(row.maxprice->entry->str());
      f.push_back(format_sig6(row.maxprice->monetized_profit));
    }
    if (strategies.maxmax) {
      f.push_back(row.maxmax->entry->str());
      f.push_back(format_sig6(row.maxmax->monetized_profit));
      for (const TokenId& t : tokens) f.push_back(format_sig6(row.maxmax->profit_by_token.at(t)));
    }
    if (strategies.convex) {
      f.push_back(format_sig6(row.convex->monetized_profit));
      f.push_back(row.convex_converged ? "ok" : "nonconverged");
      f.push_back(format_sig6(row.convex->kkt_residual));
      for (const TokenId& t : tokens) f.push_back(format_sig6(row.convex->profit_by_token.at(t)));
    }
    for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << f[i];
    out << '\n';
  }
}

}  // namespace arb
