#pragma once

// Log-barrier interior-point method for the small convex programs that arise
// from pool-constrained arbitrage:
//
//   minimize    cᵀz
//   subject to  γ·z_k / (1 + γ·z_k) − κ·z_l ≥ 0     (hyperbolic rows)
//               b + aᵀz ≥ 0                         (linear rows)
//
// Hyperbolic rows are a constant-product pool constraint written in reserve-
// normalized variables: z_k = input / input_reserve, κ·z_l = output /
// output_reserve. Their left side is concave, so −log of it is convex.

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace arb::barrier {

struct HyperbolicRow {
  int in_var = 0;
  int out_var = 0;
  double gamma = 1.0;
  double out_coeff = 1.0;
  std::string name;
};

struct LinearRow {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;
  std::string name;
};

struct Program {
  int dims = 0;
  Eigen::VectorXd cost;
  std::vector<HyperbolicRow> hyperbolic;
  std::vector<LinearRow> linear;

  int constraint_count() const {
    return static_cast<int>(hyperbolic.size() + linear.size());
  }
  /// Constraint values, hyperbolic rows first.
  Eigen::VectorXd slacks(const Eigen::VectorXd& z) const;
  /// One row per constraint, same order as slacks().
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& z) const;
  const std::string& constraint_name(int j) const;
};

struct Options {
  /// Nonpositive: pick the t that best centers the starting point.
  double t_initial = 1.0;
  double t_growth = 10.0;
  /// Outer loop stops once m/t ≤ gap_abs + gap_rel·|cᵀz| and t ≥ t_min.
  double gap_abs = 1e-9;
  double gap_rel = 1e-9;
  double t_min = 0.0;
  /// Gap targets below this are raised to it; past it the barrier terms fall
  /// under rounding noise.
  double gap_floor = 0.0;
  int max_newton_steps = 500;
  double newton_decrement_tol = 1e-10;
};

struct Result {
  Eigen::VectorXd z;
  int newton_steps = 0;
  int outer_iterations = 0;
  double t = 0.0;
  double duality_gap = 0.0;  // m/t at the last centered point
  bool converged = false;
  bool gap_met = false;  // the requested gap, not just the floor
};

/// `z0` must be strictly feasible. Returns the last strictly feasible iterate
/// even when the Newton step cap is hit (converged == false).
Result solve(const Program& program, Eigen::VectorXd z0, const Options& options);

/// Refines a barrier iterate found at weight `t` by Newton's method on the
/// KKT equations of the constraints it treats as active. Replaces `z` and
/// returns true only when the multipliers come out nonnegative, every other
/// constraint stays satisfied, and the objective does not get worse. The
/// result lies on the boundary, up to rounding.
bool polish(const Program& program, Eigen::VectorXd& z, double t);

/// KKT residual at `z`: multipliers are fitted by nonnegative least squares
/// to stationarity plus complementary slackness, with the cost scaled to unit
/// max-norm and each constraint scaled by its gradient norm. Returns the max
/// of the stationarity and complementarity residuals.
double kkt_residual(const Program& program, const Eigen::VectorXd& z);

/// Lawson–Hanson nonnegative least squares: argmin ‖A·x − b‖₂ over x ≥ 0.
Eigen::VectorXd nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iterations = 0);

}  // namespace arb::barrier
