#include <doctest.h>

#include <cmath>
#include <random>

#include "arb/barrier.hpp"

using namespace arb::barrier;

TEST_CASE("nnls solves an unconstrained-interior problem exactly") {
  Eigen::MatrixXd a(3, 2);
  a << 1, 0, 0, 1, 1, 1;
  const Eigen::VectorXd x_true = Eigen::Vector2d(2.0, 3.0);
  const Eigen::VectorXd x = nnls(a, a * x_true);
  CHECK((x - x_true).norm() <= 1e-12);
}

TEST_CASE("nnls clamps to the boundary") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2);
  const Eigen::VectorXd x = nnls(a, Eigen::Vector2d(-1.0, 4.0));
  CHECK(x(0) == 0.0);
  CHECK(x(1) == doctest::Approx(4.0));
}

TEST_CASE("nnls satisfies its own optimality conditions on random problems") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 8, n = 5;
    Eigen::MatrixXd a(m, n);
    Eigen::VectorXd b(m);
    for (int i = 0; i < m; ++i) {
      b(i) = nd(rng);
      for (int j = 0; j < n; ++j) a(i, j) = nd(rng);
    }
    const Eigen::VectorXd x = nnls(a, b);
    const Eigen::VectorXd w = a.transpose() * (b - a * x);
    for (int j = 0; j < n; ++j) {
      CHECK(x(j) >= 0.0);
      if (x(j) > 0.0) {
        CHECK(std::abs(w(j)) <= 1e-9);
      } else {
        CHECK(w(j) <= 1e-9);
      }
    }
  }
}

TEST_CASE("barrier solves a small linear program") {
  // minimize -z0 - z1  s.t.  z0 >= 0, z1 >= 0, 1 - z0 - 2 z1 >= 0, 1 - 2 z0 - z1 >= 0
  Program p;
  p.dims = 2;
  p.cost = Eigen::Vector2d(-1.0, -1.0);
  p.linear.push_back({{{0, 1.0}}, 0.0, "z0"});
  p.linear.push_back({{{1, 1.0}}, 0.0, "z1"});
  p.linear.push_back({{{0, -1.0}, {1, -2.0}}, 1.0, "a"});
  p.linear.push_back({{{0, -2.0}, {1, -1.0}}, 1.0, "b"});
  Options o;
  const Result r = solve(p, Eigen::Vector2d(0.1, 0.1), o);
  CHECK(r.converged);
  CHECK(r.z(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-7));
  CHECK(r.z(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-7));
  CHECK(kkt_residual(p, r.z) <= 1e-7);
  CHECK(kkt_residual(p, Eigen::Vector2d(0.1, 0.1)) > 1e-2);
  CHECK(p.constraint_name(2) == "a");
}

TEST_CASE("barrier on a single hyperbolic row matches the analytic optimum") {
  // maximize  p_out·κ·v − p_in·u  with  γu/(1+γu) ≥ κv,  u in [0, 10]
  // optimum: v at the curve, γ/(1+γu)² = p_in/p_out
  const double gamma = 0.997, kappa = 1.0, p_in = 0.5, p_out = 1.0;
  Program p;
  p.dims = 2;
  p.cost = Eigen::Vector2d(p_in, -p_out * kappa);
  p.hyperbolic.push_back({0, 1, gamma, kappa, "pool"});
  p.linear.push_back({{{0, 1.0}}, 0.0, "u"});
  p.linear.push_back({{{1, 1.0}}, 0.0, "v"});
  p.linear.push_back({{{0, -1.0}}, 10.0, "cap"});
  const Result r = solve(p, Eigen::Vector2d(0.5, 0.1), Options{});
  const double u_star = (std::sqrt(gamma * p_out / p_in) - 1.0) / gamma;
  CHECK(r.converged);
  CHECK(r.z(0) == doctest::Approx(u_star).epsilon(1e-6));
  CHECK(r.z(1) == doctest::Approx(gamma * u_star / (1 + gamma * u_star)).epsilon(1e-6));
}
