#include <doctest.h>

#include <cmath>

#include "arb/convex.hpp"
#include "arb/errors.hpp"
#include "arb/oracle.hpp"
#include "arb/strategies.hpp"
#include "support.hpp"

using namespace arb;
using arb::testing::ExampleMarket;
using arb::testing::InstanceGenerator;
using arb::testing::rel_diff;

TEST_CASE("single-entry optimum on the worked example") {
  const ExampleMarket m;
  const Loop loop = m.forward();
  struct Expect {
    TokenId entry;
    double input, profit, usd;
  };
  const Expect table[] = {
      {m.x, 27.0, 16.8, 33.7},
      {m.y, 31.5, 19.7, 201.2},
      {m.z, 16.4, 10.3, 205.6},
  };
  for (const Expect& e : table) {
    const SingleEntryResult r = optimize_single_entry(loop, e.entry, m.prices);
    CHECK(std::abs(r.optimal_input - e.input) <= 0.1);
    CHECK(std::abs(r.profit_tokens - e.profit) <= 0.1);
    CHECK(std::abs(r.monetized_profit - e.usd) <= 0.5);
  }
}

TEST_CASE("MaxPrice and MaxMax on the worked example") {
  const ExampleMarket m;
  const StrategyReport mp = maxprice(m.forward(), m.prices);
  CHECK(*mp.entry == m.z);
  CHECK(mp.monetized_profit == doctest::Approx(205.6).epsilon(0.5 / 205.6));
  CHECK(mp.strategy == Strategy::MaxPrice);

  const StrategyReport mm = maxmax(m.forward(), m.prices);
  CHECK(*mm.entry == m.z);
  CHECK(mm.per_entry.size() == 3);
  CHECK(mm.profit_by_token.at(m.x) == 0.0);
  CHECK(mm.profit_by_token.at(m.y) == 0.0);
  CHECK(mm.profit_by_token.at(m.z) == doctest::Approx(10.28).epsilon(0.01));
  REQUIRE(mm.flows);
  CHECK(mm.flows->in[2] == doctest::Approx(16.43).epsilon(0.01));

  // Raising X's price far enough makes MaxPrice pick X, which is worse.
  PriceTable skewed = m.prices;
  skewed.set(m.x, 25.0);
  const StrategyReport mp2 = maxprice(m.forward(), skewed);
  const StrategyReport mm2 = maxmax(m.forward(), skewed);
  CHECK(*mp2.entry == m.x);
  CHECK(mm2.monetized_profit >= mp2.monetized_profit);
}

TEST_CASE("the reverse direction has no profit from any entry") {
  const ExampleMarket m;
  for (const TokenId& t : m.backward().tokens()) {
    const SingleEntryResult r = optimize_single_entry(m.backward(), t, m.prices);
    CHECK(r.optimal_input == 0.0);
    CHECK(r.profit_tokens == 0.0);
  }
  CHECK(maxmax(m.backward(), m.prices).monetized_profit == 0.0);
}

TEST_CASE("strategy lookups reject unknown or unpriced tokens") {
  const ExampleMarket m;
  CHECK_THROWS_AS(optimize_single_entry(m.forward(), TokenId("Q"), m.prices), DomainError);
  PriceTable partial;
  partial.set(m.x, 1.0);
  CHECK_THROWS_AS(optimize_single_entry(m.forward(), m.y, partial), DomainError);
  CHECK_THROWS_AS(maxmax(m.forward(), partial), DomainError);
  CHECK_THROWS_AS(maxprice(m.forward(), partial), DomainError);
}

TEST_CASE("a fine grid never beats the closed form beyond its resolution") {
  const ExampleMarket m;
  for (const TokenId& t : m.forward().tokens()) {
    const SingleEntryResult r = optimize_single_entry(m.forward(), t, m.prices);
    const LineGridResult g = grid_single_entry(m.forward(), t, m.prices, 1'000'000, 3.0 * r.optimal_input);
    CHECK(g.best_monetized <= r.monetized_profit + 1e-9 * r.monetized_profit);
    CHECK(r.monetized_profit - g.best_monetized <= g.resolution_bound + 1e-9 * r.monetized_profit);
  }

  InstanceGenerator gen(31);
  for (int i = 0; i < 20; ++i) {
    const auto inst = gen.next_with_arbitrage(3, true);
    const TokenId entry = inst.loop.entry_token();
    const SingleEntryResult r = optimize_single_entry(inst.loop, entry, inst.prices);
    const LineGridResult g = grid_single_entry(inst.loop, entry, inst.prices, 1'000'000, 2.0 * r.optimal_input);
    const double slack = 1e-9 * std::max(1.0, r.monetized_profit);
    CHECK(g.best_monetized <= r.monetized_profit + slack);
    CHECK(r.monetized_profit - g.best_monetized <= g.resolution_bound + slack);
  }
}

TEST_CASE("bisection on the nested derivative agrees with the closed form") {
  const ExampleMarket m;
  for (const TokenId& t : m.forward().tokens()) {
    const auto b = bisect_optimal_input(m.forward(), t);
    const auto r = optimize_single_entry(m.forward(), t, m.prices);
    CHECK(rel_diff(b.optimal_input, r.optimal_input) <= 1e-9);
  }
  InstanceGenerator gen(32);
  for (int i = 0; i < 500; ++i) {
    const auto inst = gen.next(gen.uniform_int(2, 10));
    for (const TokenId& t : inst.loop.tokens()) {
      const auto b = bisect_optimal_input(inst.loop, t);
      const auto r = optimize_single_entry(inst.loop, t, inst.prices);
      if (r.optimal_input == 0.0) {
        CHECK(b.optimal_input == 0.0);
      } else {
        CHECK(rel_diff(b.optimal_input, r.optimal_input) <= 1e-9);
      }
    }
  }
}

TEST_CASE("profit is positive exactly when the log-sum is positive") {
  InstanceGenerator gen(33);
  for (int i = 0; i < 1000; ++i) {
    const auto inst = gen.next(gen.uniform_int(2, 6));
    const bool arbitrage = is_arbitrage_loop(inst.loop).profitable;
    for (const TokenId& t : inst.loop.tokens()) {
      const auto r = optimize_single_entry(inst.loop, t, inst.prices);
      CHECK((r.profit_tokens > 0.0) == arbitrage);
      CHECK((r.optimal_input > 0.0) == arbitrage);
    }
  }
}

TEST_CASE("MaxMax dominates MaxPrice on random loops") {
  InstanceGenerator gen(34);
  for (int i = 0; i < 1000; ++i) {
    const auto inst = gen.next_with_arbitrage(gen.uniform_int(3, 5), true);
    const double mm = maxmax(inst.loop, inst.prices).monetized_profit;
    const double mp = maxprice(inst.loop, inst.prices).monetized_profit;
    CHECK(mm >= mp);
    CHECK(mp >= 0.0);
  }
}

TEST_CASE("scaling all prices scales monetized profit and keeps choices") {
  InstanceGenerator gen(35);
  for (int i = 0; i < 200; ++i) {
    const auto inst = gen.next_with_arbitrage(gen.uniform_int(3, 5), true);
    const double k = gen.log_uniform(1e-3, 1e3);
    const PriceTable scaled = inst.prices.scaled(k);
    const auto mm = maxmax(inst.loop, inst.prices);
    const auto mm_k = maxmax(inst.loop, scaled);
    CHECK(*mm.entry == *mm_k.entry);
    CHECK(rel_diff(mm_k.monetized_profit, k * mm.monetized_profit) <= 1e-12);
    const auto mp = maxprice(inst.loop, inst.prices);
    const auto mp_k = maxprice(inst.loop, scaled);
    CHECK(*mp.entry == *mp_k.entry);
    CHECK(rel_diff(mp_k.monetized_profit, k * mp.monetized_profit) <= 1e-12);
  }
}

TEST_CASE("single-entry flows form a feasible chain") {
  const ExampleMarket m;
  const FlowVector f = single_entry_flows(m.forward(), m.y, 31.5);
  CHECK(f.in[1] == 31.5);
  CHECK(f.in[2] == f.out[1]);
  CHECK(f.in[0] == f.out[2]);
  CHECK(f.out[0] > f.in[1]);
  CHECK_NOTHROW(check_feasible(m.forward(), f));
  const auto net = net_profit_by_token(m.forward(), f);
  CHECK(net.at(m.x) == 0.0);
  CHECK(net.at(m.z) == 0.0);
  CHECK(net.at(m.y) == doctest::Approx(19.7).epsilon(0.005));
}

TEST_CASE("strategy names") {
  CHECK(strategy_name(Strategy::MaxMax) == "MaxMax");
  CHECK(strategy_name(Strategy::ConvexOptimization) == "ConvexOptimization");
}
