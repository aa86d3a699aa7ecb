// Serial vs OpenMP timings for the two batch kernels on a synthetic
// 51-token / 208-pool market.

#include <chrono>
#include <cstdio>
#include <omp.h>

#include "arb/compare.hpp"
#include "arb/market_graph.hpp"
#include "arb/synthetic.hpp"

namespace {

template <typename Fn>
double time_ms(Fn&& fn, int repeats) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < repeats; ++i) fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / repeats;
}

}  // namespace

int main() {
  const arb::SyntheticMarket market = arb::make_synthetic_market({});
  const arb::MarketSnapshot snap = arb::build_graph(market.pools, market.prices, {});
  std::printf("threads %d, %zu tokens, %zu pools\n", omp_get_max_threads(), snap.tokens.size(), snap.pools.size());

  for (int length : {3, 4}) {
    std::size_t count = 0;
    const double serial = time_ms([&] { count = arb::enumerate_loops_serial(snap, length).size(); }, 3);
    const double parallel = time_ms([&] { count = arb::enumerate_loops(snap, length).size(); }, 3);
    std::printf("enumerate length %d: %zu loops  serial %.2f ms  parallel %.2f ms\n", length, count, serial,
                parallel);

    const auto found = arb::detect_arbitrage(snap, length);
    const arb::StrategySet all;
    const double cmp_serial = time_ms([&] { arb::compare_loops_serial(found, market.prices, all); }, 1);
    const double cmp_parallel = time_ms([&] { arb::compare_loops(found, market.prices, all); }, 1);
    std::printf("compare length %d: %zu arbitrage loops  serial %.2f ms  parallel %.2f ms\n", length,
                found.size(), cmp_serial, cmp_parallel);
  }
}
