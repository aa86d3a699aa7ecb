#include "arb/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <utility>

#include "arb/errors.hpp"

namespace arb {

namespace {

std::string token_name(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "T%02d", i);
  return buf;
}

}  // namespace

SyntheticMarket make_synthetic_market(const SyntheticSpec& spec) {
  const long long max_pairs = static_cast<long long>(spec.tokens) * (spec.tokens - 1) / 2;
  if (spec.tokens < 2 || spec.pools < spec.tokens - 1 || spec.pools > max_pairs) {
    throw DomainError("synthetic market needs tokens-1 <= pools <= tokens*(tokens-1)/2");
  }
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> log_price(std::log(0.01), std::log(100.0));
  std::uniform_real_distribution<double> log_tvl(std::log(spec.min_tvl_usd), std::log(spec.max_tvl_usd));
  std::normal_distribution<double> noise(0.0, spec.mispricing);

  SyntheticMarket market;
  std::vector<double> fair(static_cast<std::size_t>(spec.tokens));
  for (int i = 0; i < spec.tokens; ++i) {
    fair[static_cast<std::size_t>(i)] = std::exp(log_price(rng));
    market.prices.set(TokenId(token_name(i)), fair[static_cast<std::size_t>(i)]);
  }

  std::set<std::pair<int, int>> pairs;
  // Random spanning tree first so the graph is connected.
  for (int i = 1; i < spec.tokens; ++i) {
    std::uniform_int_distribution<int> parent(0, i - 1);
    pairs.emplace(parent(rng), i);
  }
  std::uniform_int_distribution<int> any(0, spec.tokens - 1);
  while (static_cast<int>(pairs.size()) < spec.pools) {
    int a = any(rng);
    int b = any(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    pairs.emplace(a, b);
  }

  for (const auto& [a, b] : pairs) {
    const double half_tvl = 0.5 * std::exp(log_tvl(rng));
    const double ra = half_tvl / fair[static_cast<std::size_t>(a)] * std::exp(noise(rng));
    const double rb = half_tvl / fair[static_cast<std::size_t>(b)] * std::exp(noise(rng));
    market.pools.emplace_back(TokenId(token_name(a)), TokenId(token_name(b)), ra, rb, spec.fee_rate);
  }
  return market;
}

}  // namespace arb
