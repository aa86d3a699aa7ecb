#include <doctest.h>

#include <sstream>

#include "arb/compare.hpp"
#include "arb/errors.hpp"
#include "arb/market_data.hpp"
#include "arb/synthetic.hpp"
#include "support.hpp"

using namespace arb;
using arb::testing::ExampleMarket;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

}  // namespace

TEST_CASE("strategy list parsing") {
  const StrategySet all = StrategySet::parse("single-entry-all,maxprice,maxmax,convex");
  CHECK(all.single_entry_all);
  CHECK(all.convex);
  const StrategySet some = StrategySet::parse("maxmax");
  CHECK(some.maxmax);
  CHECK_FALSE(some.maxprice);
  CHECK_FALSE(some.convex);
  CHECK_THROWS_AS(StrategySet::parse("maxmax,best"), DomainError);
}

TEST_CASE("comparison row for the worked example") {
  const ExampleMarket m;
  const auto snap = build_graph(m.pools(), m.prices, {0.0, 0.0});
  const auto found = detect_arbitrage(snap, 3);
  REQUIRE(found.size() == 1);
  const auto rows = compare_loops(found, m.prices, StrategySet{});
  REQUIRE(rows.size() == 1);
  const ComparisonRow& r = rows[0];
  CHECK(r.per_entry.size() == 3);
  CHECK(r.maxprice->monetized_profit == doctest::Approx(205.59).epsilon(1e-4));
  CHECK(r.maxmax->monetized_profit == doctest::Approx(205.59).epsilon(1e-4));
  CHECK(r.convex->monetized_profit == doctest::Approx(206.147).epsilon(1e-5));
  CHECK(r.convex_converged);

  std::ostringstream out;
  write_comparison_csv(out, rows, StrategySet{}, 3);
  const auto lines = lines_of(out.str());
  REQUIRE(lines.size() == 2);
  const auto header = split(lines[0]);
  const auto fields = split(lines[1]);
  REQUIRE(header.size() == fields.size());
  auto field = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return fields[i];
    }
    FAIL("no column " << name);
    return std::string();
  };
  CHECK(field("loop") == "X>Y>Z>X");
  CHECK(field("token1") == "Y");
  CHECK(field("maxprice_entry") == "Z");
  CHECK(field("maxmax_entry") == "Z");
  CHECK(field("convex_status") == "ok");
  CHECK(field("convex_usd") == "206.147");
  CHECK(field("entry1_input") == "31.5183");
  CHECK(field("maxmax_net0") == "0");
}

TEST_CASE("empty input gives a header-only CSV") {
  std::ostringstream out;
  write_comparison_csv(out, {}, StrategySet::parse("maxmax"), 3);
  CHECK(out.str() == "loop,log_sum,token0,token1,token2,maxmax_entry,maxmax_usd,maxmax_net0,maxmax_net1,maxmax_net2\n");
}

TEST_CASE("parallel comparison matches the serial reference byte for byte") {
  const SyntheticMarket market = make_synthetic_market({});
  const auto snap = build_graph(market.pools, market.prices, {});
  const auto found = detect_arbitrage(snap, 3);
  REQUIRE(found.size() > 5);
  const StrategySet set;
  const auto par = compare_loops(found, market.prices, set);
  const auto ser = compare_loops_serial(found, market.prices, set);
  std::ostringstream a, b;
  write_comparison_csv(a, par, set, 3);
  write_comparison_csv(b, ser, set, 3);
  CHECK(a.str() == b.str());
  CHECK(lines_of(a.str()).size() == found.size() + 1);

  for (const ComparisonRow& r : par) {
    CHECK(r.convex_converged);
    CHECK(r.maxmax->monetized_profit >= r.maxprice->monetized_profit);
    CHECK(r.convex->monetized_profit >= r.maxmax->monetized_profit - 1e-6 * std::max(1.0, r.maxmax->monetized_profit));
  }
}

TEST_CASE("price sweep yields one row per price point") {
  const ExampleMarket m;
  const auto snap = build_graph(m.pools(), m.prices, {0.0, 0.0});
  const auto found = detect_arbitrage(snap, 3);
  const SweepRange range{m.y, 0.0, 20.0, 0.2};
  CHECK(range.points().size() == 101);
  const auto rows = sweep_prices(found, m.prices, range, StrategySet::parse("maxprice,maxmax,convex"));
  REQUIRE(rows.size() == 101);
  CHECK(*rows.front().sweep_price == 0.0);
  CHECK(*rows.back().sweep_price == doctest::Approx(20.0));
  for (const auto& r : rows) {
    CHECK(r.maxmax->monetized_profit >= r.maxprice->monetized_profit);
    CHECK(r.convex->monetized_profit >= r.maxmax->monetized_profit - 1e-6 * std::max(1.0, r.maxmax->monetized_profit));
  }
  std::ostringstream out;
  write_comparison_csv(out, rows, StrategySet::parse("maxmax"), 3, m.y);
  const auto lines = lines_of(out.str());
  CHECK(lines.size() == 102);
  CHECK(lines[0].rfind("sweep_token,sweep_price,loop", 0) == 0);
  CHECK(lines[1].rfind("Y,0,X>Y>Z>X", 0) == 0);

  CHECK_THROWS_AS((SweepRange{m.y, 1.0, 0.0, 0.1}.points()), DomainError);
  CHECK_THROWS_AS((SweepRange{m.y, 0.0, 1.0, 0.0}.points()), DomainError);
}

TEST_CASE("format_sig6") {
  CHECK(format_sig6(0.0) == "0");
  CHECK(format_sig6(-0.0) == "0");
  CHECK(format_sig6(206.1471284) == "206.147");
  CHECK(format_sig6(1.5e-9) == "1.5e-09");
}
