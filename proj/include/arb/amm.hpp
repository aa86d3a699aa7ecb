#pragma once

// Constant-product swap algebra.
//
// A single swap on a pool with reserves (x, y) and fee rate λ obeys
//
//   (x + γ·Δx)(y − Δy) = x·y,   γ = 1 − λ
//
// so Δy = y·γΔx / (x + γΔx). Every hop, and every chain of hops, has the
// shape a·Δ / (b + Δ); ComposedSwap carries that closed form.

#include <compare>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace arb {

inline constexpr double kDefaultFeeRate = 0.003;

class TokenId {
 public:
  explicit TokenId(std::string symbol);

  const std::string& str() const noexcept { return symbol_; }

  friend bool operator==(const TokenId&, const TokenId&) = default;
  friend std::strong_ordering operator<=>(const TokenId& a, const TokenId& b) {
    return a.symbol_ <=> b.symbol_;
  }

 private:
  std::string symbol_;
};

class Pool {
 public:
  Pool(TokenId token_a, TokenId token_b, double reserve_a, double reserve_b,
       double fee_rate = kDefaultFeeRate);

  const TokenId& token_a() const noexcept { return token_a_; }
  const TokenId& token_b() const noexcept { return token_b_; }
  double reserve_a() const noexcept { return reserve_a_; }
  double reserve_b() const noexcept { return reserve_b_; }
  double fee_rate() const noexcept { return fee_rate_; }
  double gamma() const noexcept { return 1.0 - fee_rate_; }

  bool has_token(const TokenId& t) const noexcept {
    return t == token_a_ || t == token_b_;
  }
  /// Throws DomainError when `t` is not one of the pool's tokens.
  double reserve_of(const TokenId& t) const;
  const TokenId& other_token(const TokenId& t) const;

  friend bool operator==(const Pool&, const Pool&) = default;

 private:
  TokenId token_a_;
  TokenId token_b_;
  double reserve_a_;
  double reserve_b_;
  double fee_rate_;
};

/// Output amount for swapping `amount_in` of `input_token` into `pool`.
double swap_out(const Pool& pool, const TokenId& input_token, double amount_in);

/// Price of `of_token` in units of the pool's other token, net of fee:
/// (1 − λ)·r_other / r_own.
double relative_price(const Pool& pool, const TokenId& of_token);

inline constexpr std::size_t kNoPoolIndex = std::numeric_limits<std::size_t>::max();

/// A pool traversed in one direction.
class Hop {
 public:
  Hop(Pool pool, const TokenId& input_token, std::size_t pool_index = kNoPoolIndex);

  const Pool& pool() const noexcept { return pool_; }
  std::size_t pool_index() const noexcept { return pool_index_; }
  bool a_to_b() const noexcept { return a_to_b_; }

  const TokenId& token_in() const noexcept { return a_to_b_ ? pool_.token_a() : pool_.token_b(); }
  const TokenId& token_out() const noexcept { return a_to_b_ ? pool_.token_b() : pool_.token_a(); }
  double reserve_in() const noexcept { return a_to_b_ ? pool_.reserve_a() : pool_.reserve_b(); }
  double reserve_out() const noexcept { return a_to_b_ ? pool_.reserve_b() : pool_.reserve_a(); }
  double gamma() const noexcept { return pool_.gamma(); }

  double swap(double amount_in) const;
  /// d(output)/d(input) at `amount_in`.
  double swap_derivative(double amount_in) const;
  double relative_price() const noexcept { return gamma() * reserve_out() / reserve_in(); }

  friend bool operator==(const Hop&, const Hop&) = default;

 private:
  Pool pool_;
  std::size_t pool_index_;
  bool a_to_b_;
};

/// output(Δ) = coeff_a·Δ / (coeff_b + Δ).
class ComposedSwap {
 public:
  ComposedSwap(double coeff_a, double coeff_b);

  static ComposedSwap of_hop(const Hop& hop);

  double coeff_a() const noexcept { return a_; }
  double coeff_b() const noexcept { return b_; }

  double output(double amount_in) const;
  double derivative(double amount_in) const;

  /// Feeds this swap's output into `next`.
  ComposedSwap then(const ComposedSwap& next) const;

 private:
  double a_;
  double b_;
};

/// Closed-form composition of a chained hop sequence. Throws DomainError on an
/// empty path or when a hop's output token is not the next hop's input.
ComposedSwap compose_path(std::span<const Hop> hops);

/// Nested hop-by-hop evaluation; the reference the closed form is checked against.
double evaluate_path(std::span<const Hop> hops, double amount_in);

}  // namespace arb

template <>
struct std::hash<arb::TokenId> {
  std::size_t operator()(const arb::TokenId& t) const noexcept {
    return std::hash<std::string>{}(t.str());
  }
};
