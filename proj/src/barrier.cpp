#include "arb/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace arb::barrier {

namespace {

double hyper_value(const HyperbolicRow& r, const Eigen::VectorXd& z) {
  const double e = r.gamma * z[r.in_var];
  return e / (1.0 + e) - r.out_coeff * z[r.out_var];
}

double linear_value(const LinearRow& r, const Eigen::VectorXd& z) {
  double v = r.constant;
  for (const auto& [k, c] : r.terms) v += c * z[k];
  return v;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// t·cᵀz − Σ log s_j; +inf outside the strict interior.
double barrier_objective(const Program& p, const Eigen::VectorXd& z, double t) {
  double phi = t * p.cost.dot(z);
  for (const auto& r : p.hyperbolic) {
    const double s = hyper_value(r, z);
    if (!(s > 0.0)) return kInf;
    phi -= std::log(s);
  }
  for (const auto& r : p.linear) {
    const double s = linear_value(r, z);
    if (!(s > 0.0)) return kInf;
    phi -= std::log(s);
  }
  return phi;
}

void barrier_derivatives(const Program& p, const Eigen::VectorXd& z, double t,
                         Eigen::VectorXd& grad, Eigen::MatrixXd& hess) {
  grad = t * p.cost;
  hess.setZero(p.dims, p.dims);
  for (const auto& r : p.hyperbolic) {
    const double u = z[r.in_var];
    const double d = 1.0 + r.gamma * u;
    const double h1 = r.gamma / (d * d);
    const double h2 = -2.0 * r.gamma * r.gamma / (d * d * d);
    const double s = hyper_value(r, z);
    const int k = r.in_var;
    const int l = r.out_var;
    // ∇s = h1·e_k − κ·e_l,  ∇²s = h2·e_k e_kᵀ
    grad[k] -= h1 / s;
    grad[l] += r.out_coeff / s;
    const double inv_s2 = 1.0 / (s * s);
    hess(k, k) += h1 * h1 * inv_s2 - h2 / s;
    hess(l, l) += r.out_coeff * r.out_coeff * inv_s2;
    hess(k, l) -= h1 * r.out_coeff * inv_s2;
    hess(l, k) -= h1 * r.out_coeff * inv_s2;
  }
  for (const auto& r : p.linear) {
    const double s = linear_value(r, z);
    const double inv_s2 = 1.0 / (s * s);
    for (const auto& [i, ci] : r.terms) {
      grad[i] -= ci / s;
      for (const auto& [j, cj] : r.terms) hess(i, j) += ci * cj * inv_s2;
    }
  }
}

// t that brings z closest to the central path: minimizes the Newton decrement
// ‖t·c + ∇b‖ in the barrier Hessian's inverse norm.
double centering_t(const Program& p, const Eigen::VectorXd& z) {
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  barrier_derivatives(p, z, 0.0, grad, hess);
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
  const Eigen::VectorXd hc = ldlt.solve(p.cost);
  const double chc = p.cost.dot(hc);
  const double t = -grad.dot(hc) / chc;
  const double fallback = p.constraint_count() / std::max(std::abs(p.cost.dot(z)), 1e-300);
  if (!std::isfinite(t) || !(chc > 0.0)) return std::clamp(fallback, 1e-2, 1e10);
  return std::clamp(t, 1e-6, 1e10);
}

}  // namespace

Eigen::VectorXd Program::slacks(const Eigen::VectorXd& z) const {
  Eigen::VectorXd s(constraint_count());
  int j = 0;
  for (const auto& r : hyperbolic) s[j++] = hyper_value(r, z);
  for (const auto& r : linear) s[j++] = linear_value(r, z);
  return s;
}

Eigen::MatrixXd Program::jacobian(const Eigen::VectorXd& z) const {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(constraint_count(), dims);
  int j = 0;
  for (const auto& r : hyperbolic) {
    const double d = 1.0 + r.gamma * z[r.in_var];
    jac(j, r.in_var) += r.gamma / (d * d);
    jac(j, r.out_var) -= r.out_coeff;
    ++j;
  }
  for (const auto& r : linear) {
    for (const auto& [k, c] : r.terms) jac(j, k) += c;
    ++j;
  }
  return jac;
}

const std::string& Program::constraint_name(int j) const {
  const auto nh = static_cast<int>(hyperbolic.size());
  return j < nh ? hyperbolic[static_cast<std::size_t>(j)].name
                : linear[static_cast<std::size_t>(j - nh)].name;
}

Result solve(const Program& program, Eigen::VectorXd z0, const Options& options) {
  Result res;
  res.z = std::move(z0);
  const double m = program.constraint_count();
  double t = options.t_initial;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  if (!(t > 0.0)) t = centering_t(program, res.z);

  for (;;) {
    // Centering: damped Newton on t·cᵀz − Σ log s_j.
    for (;;) {
      if (res.newton_steps >= options.max_newton_steps) {
        res.t = t;
        res.duality_gap = m / t;
        return res;
      }
      barrier_derivatives(program, res.z, t, grad, hess);
      const Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
      const Eigen::VectorXd step = ldlt.solve(-grad);
      const double decrement_sq = -grad.dot(step);
      if (!std::isfinite(decrement_sq) || decrement_sq / 2.0 <= options.newton_decrement_tol) break;

      const double phi0 = barrier_objective(program, res.z, t);
      // Predicted decrease below the rounding noise of the barrier value.
      if (decrement_sq < 1e-13 * std::abs(phi0)) break;
      double alpha = 1.0;
      bool moved = false;
      while (alpha > 1e-14) {
        const Eigen::VectorXd trial = res.z + alpha * step;
        const double phi = barrier_objective(program, trial, t);
        // Strict decrease too: near the rounding floor of phi the Armijo
        // margin vanishes and equal values would be accepted forever.
        if (phi <= phi0 - 0.25 * alpha * decrement_sq && phi < phi0) {
          res.z = trial;
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      ++res.newton_steps;
      // No representable descent left at this t: the point is as centered as
      // floating point allows.
      if (!moved) break;
    }
    ++res.outer_iterations;
    const double gap = m / t;
    const double objective = program.cost.dot(res.z);
    const double requested = options.gap_abs + options.gap_rel * std::abs(objective);
    if (t >= options.t_min && gap <= std::max(requested, options.gap_floor)) {
      res.t = t;
      res.duality_gap = gap;
      res.converged = true;
      res.gap_met = gap <= requested;
      return res;
    }
    t *= options.t_growth;
  }
}

Eigen::VectorXd nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iterations) {
  const Eigen::Index n = a.cols();
  if (max_iterations <= 0) max_iterations = static_cast<int>(3 * n + 10);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<char> passive(static_cast<std::size_t>(n), 0);
  const double tol = 1e-14 * std::max(1.0, a.cwiseAbs().maxCoeff()) * std::max(1.0, b.cwiseAbs().maxCoeff()) *
                     static_cast<double>(std::max<Eigen::Index>(n, 1));

  auto solve_passive = [&]() {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    }
    Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
    const Eigen::VectorXd sol = sub.colPivHouseholderQr().solve(b);
    Eigen::VectorXd full = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < idx.size(); ++k) full[idx[k]] = sol[static_cast<Eigen::Index>(k)];
    return full;
  };

  for (int outer = 0; outer < max_iterations; ++outer) {
    const Eigen::VectorXd w = a.transpose() * (b - a * x);
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w[j] > best_w) {
        best_w = w[j];
        best = j;
      }
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = 1;

    for (int inner = 0; inner < max_iterations; ++inner) {
      const Eigen::VectorXd s = solve_passive();
      double alpha = 1.0;
      bool all_positive = true;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && s[j] <= 0.0) {
          all_positive = false;
          const double denom = x[j] - s[j];
          if (denom > 0.0) alpha = std::min(alpha, x[j] / denom);
        }
      }
      if (all_positive) {
        x = s;
        break;
      }
      x += alpha * (s - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x[j] <= 1e-15) {
          passive[static_cast<std::size_t>(j)] = 0;
          x[j] = 0.0;
        }
      }
    }
  }
  return x;
}

double kkt_residual(const Program& program, const Eigen::VectorXd& z) {
  const double cost_scale = program.cost.cwiseAbs().maxCoeff();
  if (!(cost_scale > 0.0)) return 0.0;
  const Eigen::VectorXd c = program.cost / cost_scale;
  const Eigen::VectorXd s = program.slacks(z);
  const Eigen::MatrixXd jac = program.jacobian(z);
  const int m = program.constraint_count();
  const int d = program.dims;

  // Columns: scaled constraint gradients over scaled slacks.
  Eigen::MatrixXd system = Eigen::MatrixXd::Zero(d + m, m);
  Eigen::VectorXd scaled_slack(m);
  for (int j = 0; j < m; ++j) {
    double norm = jac.row(j).norm();
    if (!(norm > 0.0)) norm = 1.0;
    system.block(0, j, d, 1) = jac.row(j).transpose() / norm;
    scaled_slack[j] = std::max(0.0, s[j]) / norm;
    system(d + j, j) = scaled_slack[j];
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d + m);
  rhs.head(d) = c;

  const Eigen::VectorXd lambda = nnls(system, rhs);
  const double stationarity = (system.topRows(d) * lambda - c).cwiseAbs().maxCoeff();
  const double complementarity = lambda.cwiseProduct(scaled_slack).cwiseAbs().maxCoeff();
  return std::max(stationarity, complementarity);
}

namespace {

// Newton on  c − J_Aᵀλ = 0,  g_A(z) = 0  from z. Returns the solution only when
// it converges with λ ≥ 0 and every constraint outside A still holds.
std::optional<Eigen::VectorXd> solve_active_set(const Program& program, const Eigen::VectorXd& z,
                                                const std::vector<int>& active,
                                                const Eigen::VectorXd& lambda0) {
  const int m = program.constraint_count();
  const int d = program.dims;
  const int nh = static_cast<int>(program.hyperbolic.size());
  const int a = static_cast<int>(active.size());
  Eigen::VectorXd x = z;
  Eigen::VectorXd lambda = lambda0;
  double residual = kInf;
  for (int it = 0; it < 30; ++it) {
    const Eigen::MatrixXd jac = program.jacobian(x);
    const Eigen::VectorXd s = program.slacks(x);
    Eigen::MatrixXd ja(a, d);
    Eigen::VectorXd ga(a);
    for (int k = 0; k < a; ++k) {
      ja.row(k) = jac.row(active[static_cast<std::size_t>(k)]);
      ga[k] = s[active[static_cast<std::size_t>(k)]];
    }
    const Eigen::VectorXd station = program.cost - ja.transpose() * lambda;
    const double next = std::max(station.cwiseAbs().maxCoeff(), ga.cwiseAbs().maxCoeff());
    if (it > 0 && !(next < residual)) break;
    residual = next;
    if (residual <= 1e-15) break;

    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(d + a, d + a);
    for (int k = 0; k < a; ++k) {
      const int j = active[static_cast<std::size_t>(k)];
      if (j >= nh) continue;
      const HyperbolicRow& r = program.hyperbolic[static_cast<std::size_t>(j)];
      const double den = 1.0 + r.gamma * x[r.in_var];
      kkt(r.in_var, r.in_var) += lambda[k] * 2.0 * r.gamma * r.gamma / (den * den * den);
    }
    kkt.topRightCorner(d, a) = -ja.transpose();
    kkt.bottomLeftCorner(a, d) = ja;
    Eigen::VectorXd rhs(d + a);
    rhs.head(d) = -station;
    rhs.tail(a) = -ga;
    const Eigen::VectorXd delta = kkt.completeOrthogonalDecomposition().solve(rhs);
    if (!delta.allFinite()) return std::nullopt;
    x += delta.head(d);
    lambda += delta.tail(a);
  }
  if (!(residual <= 1e-12) || (lambda.array() < 0.0).any()) return std::nullopt;
  const Eigen::VectorXd s = program.slacks(x);
  for (int j = 0; j < m; ++j) {
    if (std::find(active.begin(), active.end(), j) == active.end() && !(s[j] > 0.0)) return std::nullopt;
  }
  return x;
}

}  // namespace

bool polish(const Program& program, Eigen::VectorXd& z, double t) {
  const int m = program.constraint_count();
  const Eigen::VectorXd s0 = program.slacks(z);
  // Barrier multipliers are 1/(t·s); a constraint is guessed active when its
  // multiplier outweighs its slack. On nearly degenerate loops the guess can
  // include one constraint too many, so each single drop is tried as well.
  const double cut = 1.0 / std::sqrt(t);
  std::vector<int> guess;
  for (int j = 0; j < m; ++j) {
    if (s0[j] < cut) guess.push_back(j);
  }
  if (guess.empty()) return false;

  const double base = program.cost.dot(z);
  std::optional<Eigen::VectorXd> best;
  double best_obj = base + 1e-15;  // a correct active set never does worse
  for (int drop = -1; drop < static_cast<int>(guess.size()); ++drop) {
    std::vector<int> active;
    for (int k = 0; k < static_cast<int>(guess.size()); ++k) {
      if (k != drop) active.push_back(guess[static_cast<std::size_t>(k)]);
    }
    if (active.empty()) continue;
    Eigen::VectorXd lambda(static_cast<Eigen::Index>(active.size()));
    for (std::size_t k = 0; k < active.size(); ++k) {
      lambda[static_cast<Eigen::Index>(k)] = 1.0 / (t * std::max(s0[active[k]], 1e-300));
    }
    const auto x = solve_active_set(program, z, active, lambda);
    if (x && program.cost.dot(*x) <= best_obj) {
      best_obj = program.cost.dot(*x);
      best = x;
    }
    if (drop == -1 && best) break;
  }
  if (!best) return false;
  z = *best;
  return true;
}

}  // namespace arb::barrier
