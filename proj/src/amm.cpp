#include "arb/amm.hpp"

#include <cmath>
#include <utility>

#include "arb/errors.hpp"

namespace arb {

TokenId::TokenId(std::string symbol) : symbol_(std::move(symbol)) {
  if (symbol_.empty()) throw DomainError("token identifier must be non-empty");
}

Pool::Pool(TokenId token_a, TokenId token_b, double reserve_a, double reserve_b,
           double fee_rate)
    : token_a_(std::move(token_a)),
      token_b_(std::move(token_b)),
      reserve_a_(reserve_a),
      reserve_b_(reserve_b),
      fee_rate_(fee_rate) {
  if (token_a_ == token_b_) {
    throw DomainError("pool tokens must differ: " + token_a_.str());
  }
  if (!(reserve_a_ > 0.0) || !(reserve_b_ > 0.0) || !std::isfinite(reserve_a_) ||
      !std::isfinite(reserve_b_)) {
    throw DomainError("pool " + token_a_.str() + "/" + token_b_.str() +
                      ": reserves must be positive and finite");
  }
  if (!(fee_rate_ >= 0.0 && fee_rate_ < 1.0)) {
    throw DomainError("pool " + token_a_.str() + "/" + token_b_.str() +
                      ": fee rate must lie in [0, 1)");
  }
}

double Pool::reserve_of(const TokenId& t) const {
  if (t == token_a_) return reserve_a_;
  if (t == token_b_) return reserve_b_;
  throw DomainError("token " + t.str() + " is not in pool " + token_a_.str() + "/" +
                    token_b_.str());
}

const TokenId& Pool::other_token(const TokenId& t) const {
  if (t == token_a_) return token_b_;
  if (t == token_b_) return token_a_;
  throw DomainError("token " + t.str() + " is not in pool " + token_a_.str() + "/" +
                    token_b_.str());
}

namespace {

// y·γΔ / (x + γΔ): same value as y − xy/(x + γΔ) without the cancellation
// for small Δ.
double cpmm_out(double x, double y, double gamma, double dx) {
  const double eff = gamma * dx;
  return y * eff / (x + eff);
}

}  // namespace

double swap_out(const Pool& pool, const TokenId& input_token, double amount_in) {
  if (!(amount_in >= 0.0)) throw DomainError("swap amount must be nonnegative");
  const double x = pool.reserve_of(input_token);
  const double y = pool.reserve_of(pool.other_token(input_token));
  return cpmm_out(x, y, pool.gamma(), amount_in);
}

double relative_price(const Pool& pool, const TokenId& of_token) {
  const double own = pool.reserve_of(of_token);
  const double other = pool.reserve_of(pool.other_token(of_token));
  return pool.gamma() * other / own;
}

Hop::Hop(Pool pool, const TokenId& input_token, std::size_t pool_index)
    : pool_(std::move(pool)), pool_index_(pool_index), a_to_b_(input_token == pool_.token_a()) {
  if (!pool_.has_token(input_token)) {
    throw DomainError("hop input " + input_token.str() + " is not in pool " +
                      pool_.token_a().str() + "/" + pool_.token_b().str());
  }
}

double Hop::swap(double amount_in) const {
  if (!(amount_in >= 0.0)) throw DomainError("swap amount must be nonnegative");
  return cpmm_out(reserve_in(), reserve_out(), gamma(), amount_in);
}

double Hop::swap_derivative(double amount_in) const {
  const double x = reserve_in();
  const double d = x + gamma() * amount_in;
  return gamma() * x * reserve_out() / (d * d);
}

ComposedSwap::ComposedSwap(double coeff_a, double coeff_b) : a_(coeff_a), b_(coeff_b) {
  if (!(a_ > 0.0) || !(b_ > 0.0)) {
    throw DomainError("composed swap coefficients must be positive");
  }
}

ComposedSwap ComposedSwap::of_hop(const Hop& hop) {
  return {hop.reserve_out(), hop.reserve_in() / hop.gamma()};
}

double ComposedSwap::output(double amount_in) const { return a_ * amount_in / (b_ + amount_in); }

double ComposedSwap::derivative(double amount_in) const {
  const double d = b_ + amount_in;
  return a_ * b_ / (d * d);
}

ComposedSwap ComposedSwap::then(const ComposedSwap& next) const {
  const double denom = a_ + next.b_;
  return {a_ * next.a_ / denom, b_ * next.b_ / denom};
}

ComposedSwap compose_path(std::span<const Hop> hops) {
  if (hops.empty()) throw DomainError("cannot compose an empty path");
  ComposedSwap acc = ComposedSwap::of_hop(hops.front());
  for (std::size_t i = 1; i < hops.size(); ++i) {
    if (hops[i - 1].token_out() != hops[i].token_in()) {
      throw DomainError("broken chain at hop " + std::to_string(i) + ": " +
                        hops[i - 1].token_out().str() + " feeds " + hops[i].token_in().str());
    }
    acc = acc.then(ComposedSwap::of_hop(hops[i]));
  }
  return acc;
}

double evaluate_path(std::span<const Hop> hops, double amount_in) {
  double amount = amount_in;
  for (const Hop& h : hops) amount = h.swap(amount);
  return amount;
}

}  // namespace arb
