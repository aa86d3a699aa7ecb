#include "arb/market_graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "arb/errors.hpp"

namespace arb {

std::optional<double> pool_tvl(const Pool& pool, const PriceTable& prices) {
  const auto pa = prices.find(pool.token_a());
  const auto pb = prices.find(pool.token_b());
  if (!pa || !pb) return std::nullopt;
  return pool.reserve_a() * *pa + pool.reserve_b() * *pb;
}

MarketSnapshot build_graph(std::span<const Pool> pools, const PriceTable& prices,
                           const GraphFilter& filter) {
  MarketSnapshot snap;
  std::set<TokenId> tokens;
  for (const Pool& p : pools) {
    bool keep = p.reserve_a() >= filter.min_reserve && p.reserve_b() >= filter.min_reserve;
    if (keep && filter.min_tvl_usd > 0.0) {
      const auto tvl = pool_tvl(p, prices);
      keep = tvl && *tvl >= filter.min_tvl_usd;
    }
    if (!keep) {
      ++snap.dropped_pools;
      continue;
    }
    snap.pools.push_back(p);
    tokens.insert(p.token_a());
    tokens.insert(p.token_b());
  }
  snap.tokens.assign(tokens.begin(), tokens.end());
  return snap;
}

Loop::Loop(std::vector<Hop> hops) : hops_(std::move(hops)) {
  if (hops_.size() < 2) throw DomainError("a loop needs at least two hops");
  std::set<TokenId> seen;
  for (std::size_t i = 0; i < hops_.size(); ++i) {
    const Hop& next = hops_[(i + 1) % hops_.size()];
    if (hops_[i].token_out() != next.token_in()) {
      throw DomainError("loop hops do not chain at hop " + std::to_string(i));
    }
    if (!seen.insert(hops_[i].token_in()).second) {
      throw DomainError("loop revisits token " + hops_[i].token_in().str());
    }
  }
}

std::vector<TokenId> Loop::tokens() const {
  std::vector<TokenId> out;
  out.reserve(hops_.size());
  for (const Hop& h : hops_) out.push_back(h.token_in());
  return out;
}

bool Loop::contains(const TokenId& token) const {
  return std::any_of(hops_.begin(), hops_.end(),
                     [&](const Hop& h) { return h.token_in() == token; });
}

Loop Loop::rotated_to(const TokenId& token) const {
  const auto it = std::find_if(hops_.begin(), hops_.end(),
                               [&](const Hop& h) { return h.token_in() == token; });
  if (it == hops_.end()) {
    throw DomainError("token " + token.str() + " is not on loop " + label());
  }
  std::vector<Hop> rotated(it, hops_.end());
  rotated.insert(rotated.end(), hops_.begin(), it);
  return Loop(std::move(rotated));
}

std::string Loop::label() const {
  std::string out;
  for (const Hop& h : hops_) {
    out += h.token_in().str();
    out += '>';
  }
  out += entry_token().str();
  return out;
}

namespace {

struct Edge {
  std::size_t to;
  std::size_t pool;
};

class LoopSearch {
 public:
  LoopSearch(const MarketSnapshot& snap, int length) : snap_(snap), length_(length) {
    std::map<TokenId, std::size_t> index;
    for (std::size_t i = 0; i < snap.tokens.size(); ++i) index.emplace(snap.tokens[i], i);
    adjacency_.resize(snap.tokens.size());
    for (std::size_t p = 0; p < snap.pools.size(); ++p) {
      const std::size_t a = index.at(snap.pools[p].token_a());
      const std::size_t b = index.at(snap.pools[p].token_b());
      adjacency_[a].push_back({b, p});
      adjacency_[b].push_back({a, p});
    }
    for (auto& edges : adjacency_) {
      std::sort(edges.begin(), edges.end(), [](const Edge& l, const Edge& r) {
        return l.to != r.to ? l.to < r.to : l.pool < r.pool;
      });
    }
  }

  std::size_t token_count() const { return adjacency_.size(); }

  // Loops whose smallest token is `start`.
  std::vector<Loop> from_start(std::size_t start) const {
    std::vector<Loop> found;
    std::vector<std::size_t> path{start};
    std::vector<Edge> used;
    std::vector<char> on_path(adjacency_.size(), 0);
    on_path[start] = 1;
    extend(start, path, used, on_path, found);
    return found;
  }

 private:
  void extend(std::size_t start, std::vector<std::size_t>& path, std::vector<Edge>& used,
              std::vector<char>& on_path, std::vector<Loop>& found) const {
    const std::size_t last = path.back();
    if (static_cast<int>(path.size()) == length_) {
      for (const Edge& e : adjacency_[last]) {
        if (e.to != start) continue;
        used.push_back(e);
        found.push_back(materialize(path, used));
        used.pop_back();
      }
      return;
    }
    for (const Edge& e : adjacency_[last]) {
      if (e.to <= start || on_path[e.to]) continue;
      on_path[e.to] = 1;
      path.push_back(e.to);
      used.push_back(e);
      extend(start, path, used, on_path, found);
      used.pop_back();
      path.pop_back();
      on_path[e.to] = 0;
    }
  }

  Loop materialize(const std::vector<std::size_t>& path, const std::vector<Edge>& used) const {
    std::vector<Hop> hops;
    hops.reserve(used.size());
    for (std::size_t i = 0; i < used.size(); ++i) {
      hops.emplace_back(snap_.pools[used[i].pool], snap_.tokens[path[i]], used[i].pool);
    }
    return Loop(std::move(hops));
  }

  const MarketSnapshot& snap_;
  int length_;
  std::vector<std::vector<Edge>> adjacency_;
};

void check_length(int length) {
  if (length < 2) throw DomainError("loop length must be at least 2");
}

std::vector<Loop> flatten(std::vector<std::vector<Loop>>& per_start) {
  std::size_t total = 0;
  for (const auto& v : per_start) total += v.size();
  std::vector<Loop> out;
  out.reserve(total);
  for (auto& v : per_start) std::move(v.begin(), v.end(), std::back_inserter(out));
  return out;
}

}  // namespace

std::vector<Loop> enumerate_loops_serial(const MarketSnapshot& snapshot, int length) {
  check_length(length);
  const LoopSearch search(snapshot, length);
  std::vector<std::vector<Loop>> per_start(search.token_count());
  for (std::size_t s = 0; s < search.token_count(); ++s) per_start[s] = search.from_start(s);
  return flatten(per_start);
}

std::vector<Loop> enumerate_loops(const MarketSnapshot& snapshot, int length) {
  check_length(length);
  const LoopSearch search(snapshot, length);
  const auto n = static_cast<std::ptrdiff_t>(search.token_count());
  std::vector<std::vector<Loop>> per_start(search.token_count());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t s = 0; s < n; ++s) {
    per_start[static_cast<std::size_t>(s)] = search.from_start(static_cast<std::size_t>(s));
  }
  return flatten(per_start);
}

ArbitrageCheck is_arbitrage_loop(const Loop& loop) {
  double sum = 0.0;
  for (const Hop& h : loop.hops()) sum += std::log(h.relative_price());
  return {sum > 0.0, sum};
}

std::vector<DetectedLoop> detect_arbitrage(const MarketSnapshot& snapshot, int length) {
  std::vector<DetectedLoop> out;
  for (Loop& loop : enumerate_loops(snapshot, length)) {
    const ArbitrageCheck check = is_arbitrage_loop(loop);
    if (check.profitable) out.push_back({std::move(loop), check.log_sum});
  }
  std::stable_sort(out.begin(), out.end(), [](const DetectedLoop& a, const DetectedLoop& b) {
    return a.log_sum > b.log_sum;
  });
  return out;
}

}  // namespace arb
