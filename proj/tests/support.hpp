#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "arb/amm.hpp"
#include "arb/market_graph.hpp"
#include "arb/prices.hpp"

namespace arb::testing {

// Three pools of the worked example, all at the default 0.3% fee unless told
// otherwise: (x, y) = (100, 200), (y, z) = (300, 200), (z, x) = (200, 400).
struct ExampleMarket {
  TokenId x{"X"}, y{"Y"}, z{"Z"};
  Pool xy, yz, zx;
  PriceTable prices;

  explicit ExampleMarket(double fee = kDefaultFeeRate)
      : xy(x, y, 100, 200, fee), yz(y, z, 300, 200, fee), zx(z, x, 200, 400, fee) {
    prices.set(x, 2.0);
    prices.set(y, 10.2);
    prices.set(z, 20.0);
  }

  Loop forward() const { return Loop({Hop(xy, x, 0), Hop(yz, y, 1), Hop(zx, z, 2)}); }
  Loop backward() const { return Loop({Hop(zx, x, 2), Hop(yz, z, 1), Hop(xy, y, 0)}); }
  std::vector<Pool> pools() const { return {xy, yz, zx}; }
};

struct RandomInstance {
  Loop loop;
  PriceTable prices;
};

class InstanceGenerator {
 public:
  explicit InstanceGenerator(std::uint64_t seed) : rng_(seed) {}

  double log_uniform(double lo, double hi) {
    std::uniform_real_distribution<double> d(std::log(lo), std::log(hi));
    return std::exp(d(rng_));
  }
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  // Loop over tokens A0..A{n-1}; reserves log-uniform in [1e2, 1e7], prices
  // log-uniform in [1e-3, 1e3].
  RandomInstance next(int length, double fee = kDefaultFeeRate) {
    std::vector<TokenId> tokens;
    for (int i = 0; i < length; ++i) tokens.emplace_back("A" + std::to_string(i));
    std::vector<Hop> hops;
    for (int i = 0; i < length; ++i) {
      const TokenId& a = tokens[static_cast<std::size_t>(i)];
      const TokenId& b = tokens[static_cast<std::size_t>((i + 1) % length)];
      Pool p(a, b, log_uniform(1e2, 1e7), log_uniform(1e2, 1e7), fee);
      hops.emplace_back(p, a, static_cast<std::size_t>(i));
    }
    PriceTable prices;
    for (const auto& t : tokens) prices.set(t, log_uniform(1e-3, 1e3));
    return {Loop(std::move(hops)), std::move(prices)};
  }

  // Redraws until the loop's log-sum has the requested sign.
  RandomInstance next_with_arbitrage(int length, bool arbitrage) {
    for (;;) {
      RandomInstance inst = next(length);
      if (is_arbitrage_loop(inst.loop).profitable == arbitrage) return inst;
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline double rel_diff(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

}  // namespace arb::testing
