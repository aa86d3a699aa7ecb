#include "arb/strategies.hpp"

#include <cmath>

#include "arb/errors.hpp"

namespace arb {

std::map<TokenId, double> net_profit_by_token(const Loop& loop, const FlowVector& flows) {
  if (flows.in.size() != loop.size() || flows.out.size() != loop.size()) {
    throw DomainError("flow vector does not match loop " + loop.label());
  }
  std::map<TokenId, double> net;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Hop& h = loop.hops()[i];
    net[h.token_out()] += flows.out[i];
    net[h.token_in()] -= flows.in[i];
  }
  return net;
}

double monetize(const std::map<TokenId, double>& profit_by_token, const PriceTable& prices) {
  double total = 0.0;
  for (const auto& [token, amount] : profit_by_token) total += amount * prices.at(token);
  return total;
}

SingleEntryResult optimize_single_entry(const Loop& loop, const TokenId& entry,
                                        const PriceTable& prices) {
  const Loop rotated = loop.rotated_to(entry);
  const double price = prices.at(entry);
  const ComposedSwap swap = compose_path(rotated.hops());
  const double a = swap.coeff_a();
  const double b = swap.coeff_b();

  SingleEntryResult r{entry};
  if (a > b) {
    const double ra = std::sqrt(a);
    const double rb = std::sqrt(b);
    const double gap = (a - b) / (ra + rb);  // √A − √B without cancellation
    r.optimal_input = rb * gap;
    r.profit_tokens = gap * gap;
  }
  r.monetized_profit = r.profit_tokens * price;
  return r;
}

BisectionResult bisect_optimal_input(const Loop& loop, const TokenId& entry) {
  const Loop rotated = loop.rotated_to(entry);
  const auto slope = [&](double input) {
    double amount = input;
    double d = 1.0;
    for (const Hop& h : rotated.hops()) {
      d *= h.swap_derivative(amount);
      amount = h.swap(amount);
    }
    return d;
  };

  BisectionResult r;
  if (slope(0.0) <= 1.0) {
    r.derivative_residual = 0.0;
    return r;
  }
  double lo = 0.0;
  double hi = rotated.hops().front().reserve_in();
  while (slope(hi) > 1.0) {
    lo = hi;
    hi *= 2.0;
  }
  while (r.iterations < 200 && hi - lo > 1e-15 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (slope(mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++r.iterations;
  }
  r.optimal_input = 0.5 * (lo + hi);
  r.derivative_residual = std::abs(slope(r.optimal_input) - 1.0);
  return r;
}

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::SingleEntry:
      return "SingleEntry";
    case Strategy::MaxPrice:
      return "MaxPrice";
    case Strategy::MaxMax:
      return "MaxMax";
    case Strategy::ConvexOptimization:
      return "ConvexOptimization";
  }
  return "unknown";
}

FlowVector single_entry_flows(const Loop& loop, const TokenId& entry, double amount) {
  const std::vector<Hop>& hops = loop.hops();
  std::size_t start = 0;
  while (start < hops.size() && hops[start].token_in() != entry) ++start;
  if (start == hops.size()) {
    throw DomainError("token " + entry.str() + " is not on loop " + loop.label());
  }
  FlowVector flows = FlowVector::zeros(hops.size());
  double carried = amount;
  for (std::size_t k = 0; k < hops.size(); ++k) {
    const std::size_t i = (start + k) % hops.size();
    flows.in[i] = carried;
    carried = hops[i].swap(carried);
    flows.out[i] = carried;
  }
  return flows;
}

namespace {

StrategyReport report_for(Strategy strategy, const Loop& loop, const SingleEntryResult& best,
                          std::vector<SingleEntryResult> per_entry) {
  StrategyReport rep{strategy, loop, {}, {}, {}, {}, 0.0};
  rep.entry = best.entry;
  rep.per_entry = std::move(per_entry);
  rep.flows = single_entry_flows(loop, best.entry, best.optimal_input);
  for (const TokenId& t : loop.tokens()) rep.profit_by_token[t] = 0.0;
  rep.profit_by_token[best.entry] = best.profit_tokens;
  rep.monetized_profit = best.monetized_profit;
  return rep;
}

void require_prices(const Loop& loop, const PriceTable& prices) {
  for (const TokenId& t : loop.tokens()) prices.at(t);
}

}  // namespace

StrategyReport maxmax(const Loop& loop, const PriceTable& prices) {
  require_prices(loop, prices);
  std::vector<SingleEntryResult> per_entry;
  per_entry.reserve(loop.size());
  std::size_t best = 0;
  for (const TokenId& t : loop.tokens()) {
    per_entry.push_back(optimize_single_entry(loop, t, prices));
    const SingleEntryResult& cur = per_entry.back();
    const SingleEntryResult& lead = per_entry[best];
    if (cur.monetized_profit > lead.monetized_profit ||
        (cur.monetized_profit == lead.monetized_profit && cur.entry < lead.entry)) {
      best = per_entry.size() - 1;
    }
  }
  const SingleEntryResult winner = per_entry[best];
  return report_for(Strategy::MaxMax, loop, winner, std::move(per_entry));
}

StrategyReport maxprice(const Loop& loop, const PriceTable& prices) {
  require_prices(loop, prices);
  const std::vector<TokenId> tokens = loop.tokens();
  const TokenId* top = &tokens.front();
  for (const TokenId& t : tokens) {
    const double p = prices.at(t);
    const double lead = prices.at(*top);
    if (p > lead || (p == lead && t < *top)) top = &t;
  }
  SingleEntryResult r = optimize_single_entry(loop, *top, prices);
  return report_for(Strategy::MaxPrice, loop, r, {r});
}

}  // namespace arb
