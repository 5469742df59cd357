// Copyright 2026 The hamid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "checks.hpp"

#include "hamid/bessel.hpp"
#include "hamid/linear_ssm.hpp"
#include "hamid/mri.hpp"
#include "hamid/nonlinear_ssm.hpp"
#include "hamid/random.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace hamid;
using hamid::testing::central_difference;
using hamid::testing::gradient_matches;

namespace {

struct Point {
  Vector theta, x, u, y;
};

Point linear_point(const LinearSsmModel& m, Rng& rng, std::uint64_t seed) {
  const Vector ts = linear_example_theta_star();
  Point p;
  p.theta = ts + 0.1 * standard_normal(2, rng);
  p.u = standard_normal(m.dims().input_size(), rng).cwiseMax(-1.0).cwiseMin(1.0);
  p.y = m.simulate(ts, p.u, seed).y;
  p.x = Vector(0);
  return p;
}

Point nonlinear_point(const NonlinearSsmModel& m, Rng& rng, std::uint64_t seed) {
  Point p;
  p.theta = Vector::Constant(1, -0.5 + 0.2 * draw_normal(rng));
  p.u = 0.3 * standard_normal(m.dims().input_size(), rng);
  const Simulation sim = m.simulate(Vector::Constant(1, -0.5), p.u, seed);
  p.x = sim.x + 0.05 * standard_normal(sim.x.size(), rng);
  p.y = sim.y;
  return p;
}

Point mri_point(const MriModel& m, Rng& rng, std::uint64_t seed) {
  Point p;
  p.theta = Vector::Constant(1, mri_example_tau1() + 0.05 * draw_normal(rng));
  p.u = (std::numbers::pi / 9.0) * standard_normal(m.dims().input_size(), rng);
  p.y = m.simulate(Vector::Constant(1, mri_example_tau1()), p.u, seed).y;
  p.x = Vector(0);
  return p;
}

void check_joint_gradient(const ProbabilisticModel& m, const Point& p) {
  const JointGradient g = m.grad_log_joint(p.theta, p.x, p.u, p.y);
  const Vector fd_theta = central_difference(
      [&](const Vector& t) { return m.log_joint(t, p.x, p.u, p.y); }, p.theta, 1e-5);
  CHECK(gradient_matches(g.theta, fd_theta, 1e-5, 1e-8));
  REQUIRE(g.x.size() == p.x.size());
  if (p.x.size() > 0) {
    const Vector fd_x = central_difference(
        [&](const Vector& x) { return m.log_joint(p.theta, x, p.u, p.y); }, p.x, 1e-5);
    CHECK(gradient_matches(g.x, fd_x, 1e-5, 1e-8));
  }
}

void check_data_gradient(const ProbabilisticModel& m, const Point& p) {
  REQUIRE(m.has_data_gradient());
  const DataGradient g = m.grad_log_joint_data(p.theta, p.x, p.u, p.y);
  const Vector fd_u = central_difference(
      [&](const Vector& u) { return m.log_joint(p.theta, p.x, u, p.y); }, p.u, 1e-5);
  const Vector fd_y = central_difference(
      [&](const Vector& y) { return m.log_joint(p.theta, p.x, p.u, y); }, p.y, 1e-5);
  CHECK(gradient_matches(g.u, fd_u, 1e-5, 1e-8));
  CHECK(gradient_matches(g.y, fd_y, 1e-5, 1e-8));
}

void check_output_vjp(const ProbabilisticModel& m, const Point& p, Rng& rng) {
  const Vector w = standard_normal(m.dims().output_size(), rng);
  const Vector vjp = m.deterministic_output_vjp(p.theta, p.u, w);
  const Vector fd = central_difference(
      [&](const Vector& u) { return w.dot(m.deterministic_output(p.theta, u)); }, p.u, 1e-6);
  CHECK(gradient_matches(vjp, fd, 1e-5, 1e-8));
}

/// Dense Gaussian log density of the stacked outputs of a linear SSM.
double dense_linear_loglik(const LinearSsmConfig& c, const Vector& theta, const Vector& u,
                           const Vector& y) {
  const Matrix A = c.system_matrix(theta);
  const int n = c.state_size();
  const int ny = static_cast<int>(c.C.rows());
  const int nu = static_cast<int>(c.B.cols());
  const int T = c.horizon;
  // Means and the covariance of the stacked states.
  std::vector<Vector> mean(T);
  mean[0] = c.x0_mean;
  for (int t = 1; t < T; ++t) mean[t] = A * mean[t - 1] + c.B * u.segment(nu * (t - 1), nu);
  Matrix P = Matrix::Zero(n * T, n * T);
  P.block(0, 0, n, n) = c.x0_cov;
  for (int t = 1; t < T; ++t) {
    // Cov(x_t, x_s) = A Cov(x_{t-1}, x_s) for s < t.
    for (int s = 0; s < t; ++s) {
      P.block(n * t, n * s, n, n) = A * P.block(n * (t - 1), n * s, n, n);
      P.block(n * s, n * t, n, n) = P.block(n * t, n * s, n, n).transpose();
    }
    P.block(n * t, n * t, n, n) = A * P.block(n * (t - 1), n * (t - 1), n, n) * A.transpose() +
                                  c.sigma_w;
  }
  Matrix G = Matrix::Zero(ny * T, n * T);
  Matrix S = Matrix::Zero(ny * T, ny * T);
  Vector mu(ny * T);
  for (int t = 0; t < T; ++t) {
    G.block(ny * t, n * t, ny, n) = c.C;
    S.block(ny * t, ny * t, ny, ny) = c.sigma_v;
    mu.segment(ny * t, ny) = c.C * mean[t] + c.D * u.segment(nu * t, nu);
  }
  S += G * P * G.transpose();
  const Eigen::LLT<Matrix> llt(S);
  const Vector r = y - mu;
  const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return -0.5 * logdet - 0.5 * r.dot(llt.solve(r));
}

LinearSsmConfig three_state_config() {
  LinearSsmConfig c;
  c.A = Matrix{{0.5, 0.1, 0.0}, {0.2, 0.6, 0.1}, {0.0, -0.3, 0.4}};
  c.B = Matrix{{1.0, 0.0}, {0.0, 0.5}, {0.2, 1.0}};
  c.C = Matrix{{1.0, 0.0, 0.5}, {0.0, 1.0, 0.0}};
  c.D = Matrix{{0.1, 0.0}, {0.0, 0.0}};
  c.sigma_w = Matrix{{0.04, 0.01, 0.0}, {0.01, 0.03, 0.0}, {0.0, 0.0, 0.02}};
  c.sigma_v = Matrix{{0.05, 0.01}, {0.01, 0.02}};
  c.free_param_index_set = {{0, 0}, {2, 1}};
  c.x0_mean = Vector{{0.3, -0.1, 0.2}};
  c.x0_cov = 0.2 * Matrix::Identity(3, 3);
  c.horizon = 5;
  return c;
}

}  // namespace

TEST_CASE("gradients of the three models match finite differences at 100 points") {
  Rng rng = make_rng(20260101);
  const LinearSsmModel linear(LinearSsmConfig::example());
  const NonlinearSsmModel nonlinear;
  const MriModel mri;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const Point a = linear_point(linear, rng, k);
    const Point b = nonlinear_point(nonlinear, rng, k);
    const Point c = mri_point(mri, rng, k);
    check_joint_gradient(linear, a);
    check_joint_gradient(nonlinear, b);
    check_joint_gradient(mri, c);
  }
}

TEST_CASE("data gradients and output vector-Jacobian products match finite differences") {
  Rng rng = make_rng(77);
  const LinearSsmModel linear(LinearSsmConfig::example());
  const NonlinearSsmModel nonlinear;
  const MriModel mri;
  for (std::uint64_t k = 0; k < 10; ++k) {
    const Point a = linear_point(linear, rng, k);
    const Point b = nonlinear_point(nonlinear, rng, k);
    const Point c = mri_point(mri, rng, k);
    check_data_gradient(linear, a);
    check_data_gradient(nonlinear, b);
    check_data_gradient(mri, c);
    check_output_vjp(linear, a, rng);
    check_output_vjp(nonlinear, b, rng);
    check_output_vjp(mri, c, rng);
  }
}

TEST_CASE("Gaussian prior") {
  const GaussianPrior prior{10.0};
  CHECK(prior.gradient(Vector::Zero(2)).norm() == 0.0);
  const Vector g = prior.gradient(Vector{{1.0, 0.0}});
  CHECK(g(0) == doctest::Approx(-0.01).epsilon(1e-15));
  CHECK(g(1) == 0.0);
  const Vector theta{{0.3, -2.0}};
  CHECK(prior.log_density(theta) - prior.log_density(Vector::Zero(2)) ==
        doctest::Approx(-theta.squaredNorm() / 200.0).epsilon(1e-14));
  const GaussianPrior flat{std::numeric_limits<double>::infinity()};
  CHECK(flat.log_density(theta) == 0.0);
  CHECK(flat.gradient(theta).norm() == 0.0);
}

TEST_CASE("Kalman likelihood equals the dense Gaussian marginal") {
  SUBCASE("two-state example, T = 5") {
    LinearSsmConfig c = LinearSsmConfig::example();
    c.horizon = 5;
    const LinearSsmModel m(c);
    Rng rng = make_rng(3);
    for (int k = 0; k < 5; ++k) {
      const Vector theta = linear_example_theta_star() + 0.2 * standard_normal(2, rng);
      const Vector u = standard_normal(5, rng);
      const Vector y = m.simulate(theta, u, k).y + 0.1 * standard_normal(5, rng);
      const double dense = dense_linear_loglik(c, theta, u, y);
      CHECK(kalman_loglik(c, theta, u, y).value == doctest::Approx(dense).epsilon(1e-9));
    }
  }
  SUBCASE("three states, two inputs, two outputs") {
    const LinearSsmConfig c = three_state_config();
    const LinearSsmModel m(c);
    Rng rng = make_rng(4);
    for (int k = 0; k < 5; ++k) {
      const Vector theta = Vector{{0.5, -0.3}} + 0.1 * standard_normal(2, rng);
      const Vector u = standard_normal(10, rng);
      const Vector y = m.simulate(theta, u, k).y;
      const double dense = dense_linear_loglik(c, theta, u, y);
      const KalmanResult kr = kalman_loglik(c, theta, u, y);
      CHECK(kr.value == doctest::Approx(dense).epsilon(1e-9));
      const Vector fd = central_difference(
          [&](const Vector& t) { return kalman_loglik(c, t, u, y).value; }, theta, 1e-5);
      CHECK(gradient_matches(kr.grad, fd, 1e-6, 1e-8));
      const DataGradient dg = kalman_data_gradient(c, theta, u, y);
      const Vector fd_u = central_difference(
          [&](const Vector& v) { return kalman_loglik(c, theta, v, y).value; }, u, 1e-5);
      CHECK(gradient_matches(dg.u, fd_u, 1e-5, 1e-8));
    }
  }
}

TEST_CASE("Kalman gradient matches finite differences to 1e-6") {
  const LinearSsmConfig c = LinearSsmConfig::example();
  const LinearSsmModel m(c);
  Rng rng = make_rng(5);
  for (int k = 0; k < 20; ++k) {
    const Vector theta = linear_example_theta_star() + 0.1 * standard_normal(2, rng);
    const Vector u = standard_normal(c.horizon, rng);
    const Vector y = m.simulate(linear_example_theta_star(), u, k).y;
    const KalmanResult kr = kalman_loglik(c, theta, u, y);
    const Vector fd = central_difference(
        [&](const Vector& t) { return kalman_loglik(c, t, u, y).value; }, theta, 1e-5);
    CHECK(gradient_matches(kr.grad, fd, 1e-6, 1e-8));
  }
}

TEST_CASE("Kalman filter without process noise and with a known start") {
  LinearSsmConfig c;
  c.A = Matrix::Constant(1, 1, 0.8);
  c.B = Matrix::Constant(1, 1, 1.0);
  c.C = Matrix::Constant(1, 1, 2.0);
  c.D = Matrix::Constant(1, 1, 0.5);
  c.sigma_w = Matrix::Zero(1, 1);
  c.sigma_v = Matrix::Constant(1, 1, 0.09);
  c.free_param_index_set = {{0, 0}};
  c.x0_mean = Vector::Constant(1, 0.4);
  c.x0_cov = Matrix::Zero(1, 1);
  c.horizon = 3;
  const Vector theta = Vector::Constant(1, 0.8);
  const Vector u{{1.0, -0.5, 0.25}};
  const Vector y{{1.7, 2.1, 0.3}};
  double x = 0.4;
  double expected = 0.0;
  for (int t = 0; t < 3; ++t) {
    const double r = y(t) - (2.0 * x + 0.5 * u(t));
    expected += -0.5 * std::log(0.09) - 0.5 * r * r / 0.09;
    x = 0.8 * x + u(t);
  }
  CHECK(kalman_loglik(c, theta, u, y).value == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("Kalman likelihood is invariant under a state similarity transform") {
  // The free entry A(0, 0) is unchanged by T = blockdiag(1, T2).
  LinearSsmConfig c = three_state_config();
  c.free_param_index_set = {{0, 0}};
  Matrix T = Matrix::Identity(3, 3);
  T.block(1, 1, 2, 2) = Matrix{{2.0, 0.5}, {-0.3, 1.5}};
  const Matrix Ti = T.inverse();
  LinearSsmConfig d = c;
  d.A = T * c.A * Ti;
  d.B = T * c.B;
  d.C = c.C * Ti;
  d.sigma_w = T * c.sigma_w * T.transpose();
  d.x0_mean = T * c.x0_mean;
  d.x0_cov = T * c.x0_cov * T.transpose();
  Rng rng = make_rng(6);
  const Vector theta = Vector::Constant(1, 0.45);
  const Vector u = standard_normal(10, rng);
  const Vector y = LinearSsmModel(c).simulate(theta, u, 1).y;
  const KalmanResult a = kalman_loglik(c, theta, u, y);
  const KalmanResult b = kalman_loglik(d, theta, u, y);
  CHECK(std::abs(a.value - b.value) <= 1e-10 * (1.0 + std::abs(a.value)));
  CHECK(b.grad(0) == doctest::Approx(a.grad(0)).epsilon(1e-8));
}

TEST_CASE("linear simulation without noise is the matrix recursion") {
  LinearSsmConfig c = LinearSsmConfig::example();
  c.sigma_w.setZero();
  c.sigma_v.setZero();
  c.x0_cov.setZero();
  c.x0_mean.setZero();
  const LinearSsmModel m(c);
  Rng rng = make_rng(8);
  const Vector theta = linear_example_theta_star();
  const Vector u = standard_normal(c.horizon, rng);
  const Vector y = m.simulate(theta, u, 99).y;
  const Matrix A = c.system_matrix(theta);
  Vector x = Vector::Zero(2);
  for (int t = 0; t < c.horizon; ++t) {
    CHECK(y(t) == doctest::Approx((c.C * x)(0)).epsilon(1e-14).scale(1.0));
    x = A * x + c.B * u(t);
  }
  CHECK((m.deterministic_output(theta, u) - y).norm() < 1e-12);
}

TEST_CASE("simulation is a pure function of its arguments") {
  const LinearSsmModel linear(LinearSsmConfig::example());
  const NonlinearSsmModel nonlinear;
  const MriModel mri;
  Rng rng = make_rng(9);
  for (const ProbabilisticModel* m :
       {static_cast<const ProbabilisticModel*>(&linear),
        static_cast<const ProbabilisticModel*>(&nonlinear),
        static_cast<const ProbabilisticModel*>(&mri)}) {
    const Vector theta = m == &linear ? linear_example_theta_star()
                                      : Vector::Constant(1, m == &mri ? 0.7 : -0.5);
    const Vector u = 0.3 * standard_normal(m->dims().input_size(), rng);
    const Simulation a = m->simulate(theta, u, 1234);
    const Simulation b = m->simulate(theta, u, 1234);
    const Simulation c = m->simulate(theta, u, 1235);
    CHECK(a.y == b.y);
    CHECK(a.x == b.x);
    CHECK(a.y != c.y);
    CHECK(m->deterministic_output(theta, u).allFinite());
    CHECK(m->deterministic_output(theta, u) == m->deterministic_output(theta, u));
  }
}

TEST_CASE("deterministic output is the simulation mean for the linear and MRI models") {
  const int draws = 100000;
  auto check_mean = [&](const ProbabilisticModel& m, const Vector& theta, const Vector& u) {
    const Vector expected = m.deterministic_output(theta, u);
    const Eigen::Index n = expected.size();
    Vector sum = Vector::Zero(n);
    Vector sum_sq = Vector::Zero(n);
    for (int s = 0; s < draws; ++s) {
      const Vector y = m.simulate(theta, u, static_cast<std::uint64_t>(s)).y;
      sum += y;
      sum_sq += y.cwiseProduct(y);
    }
    const Vector mean = sum / draws;
    const Vector var = sum_sq / draws - mean.cwiseProduct(mean);
    for (Eigen::Index i = 0; i < n; ++i) {
      CHECK(std::abs(mean(i) - expected(i)) <= 3.0 * std::sqrt(var(i) / draws));
    }
  };
  Rng rng = make_rng(10);
  const LinearSsmModel linear(LinearSsmConfig::example());
  check_mean(linear, linear_example_theta_star(), standard_normal(50, rng));
  const MriModel mri;
  check_mean(mri, Vector::Constant(1, mri_example_tau1()),
             (std::numbers::pi / 9.0) * standard_normal(29, rng));
}

TEST_CASE("nonlinear model at the zero-residual point") {
  NonlinearSsmConfig c;
  c.horizon = 1;
  const NonlinearSsmModel m(c);
  const Vector zero = Vector::Zero(1);
  // -2T log s is the only remaining term.
  CHECK(m.log_joint(zero, zero, zero, zero) == doctest::Approx(-2.0 * std::log(0.1)));
  const JointGradient g = m.grad_log_joint(zero, zero, zero, zero);
  CHECK(g.theta(0) == 0.0);
  CHECK(g.x(0) == 0.0);
  const NonlinearSsmModel full;
  CHECK(full.deterministic_output(Vector::Constant(1, 0.37), Vector::Zero(30)).norm() == 0.0);
}

TEST_CASE("MRI model basics") {
  const double sigma_sq = 0.1;
  SUBCASE("single step with zero transverse magnetisation") {
    MriConfig c;
    c.horizon = 1;
    const MriModel m(c);
    const Vector tau = Vector::Constant(1, 0.6);
    const Vector u = Vector::Zero(1);
    const double y = 0.42;
    const double expected = std::log(y / sigma_sq) - y * y / (2.0 * sigma_sq);
    CHECK(m.log_joint(tau, Vector(0), u, Vector::Constant(1, y)) ==
          doctest::Approx(expected).epsilon(1e-14));
    CHECK(rician::dlog_pdf_dnu(y, 0.0, sigma_sq) == 0.0);
    CHECK(m.deterministic_output(tau, u)(0) ==
          doctest::Approx(std::sqrt(sigma_sq * std::numbers::pi / 2.0)).epsilon(1e-14));
  }
  SUBCASE("identity rotation keeps the fixed point") {
    MriConfig c;
    c.tau2 = 1.0;
    const MriRollout r = mri_forward(c, 1.0, Vector::Zero(c.horizon));
    REQUIRE(r.states.size() == static_cast<std::size_t>(c.horizon + 1));
    for (const auto& x : r.states) {
      CHECK(x(0) == 1.0);
      CHECK(x(1) == 0.0);
    }
  }
  SUBCASE("quarter turn") {
    MriConfig c;
    c.horizon = 1;
    c.x_init = Eigen::Vector2d(0.3, 0.8);
    const double tau1 = 0.7;
    const MriRollout r = mri_forward(c, tau1, Vector::Constant(1, std::numbers::pi / 2.0));
    const double a = tau1 * 0.3 + 1.0 - tau1;
    const double b = c.tau2 * 0.8;
    CHECK(r.states[1](0) == doctest::Approx(-b).epsilon(1e-14).scale(1.0));
    CHECK(r.states[1](1) == doctest::Approx(a).epsilon(1e-14).scale(1.0));
  }
  SUBCASE("sensitivities match finite differences") {
    const MriConfig c;
    Rng rng = make_rng(12);
    const Vector u = (std::numbers::pi / 4.0) * standard_normal(c.horizon, rng);
    const double tau1 = mri_example_tau1();
    const double h = 1e-6;
    const MriRollout r = mri_forward(c, tau1, u);
    const MriRollout hi = mri_forward(c, tau1 + h, u);
    const MriRollout lo = mri_forward(c, tau1 - h, u);
    for (std::size_t t = 0; t < r.states.size(); ++t) {
      const Eigen::Vector2d fd = (hi.states[t] - lo.states[t]) / (2.0 * h);
      CHECK(gradient_matches(r.sensitivities[t], fd, 1e-6, 1e-9));
    }
  }
  SUBCASE("Rician mean against Monte Carlo at unit signal") {
    Rng rng = make_rng(13);
    const int n = 1000000;
    const double s = std::sqrt(sigma_sq);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double z1 = 1.0 + s * draw_normal(rng);
      const double z2 = s * draw_normal(rng);
      const double y = std::hypot(z1, z2);
      sum += y;
      sum_sq += y * y;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum_sq / n - mean * mean) / n);
    CHECK(std::abs(mean - rician::mean(1.0, sigma_sq)) <= 3.0 * se);
  }
}

TEST_CASE("argument errors") {
  const NonlinearSsmModel m;
  CHECK_THROWS_AS(m.log_joint(Vector::Zero(1), Vector::Zero(3), Vector::Zero(30), Vector::Zero(30)),
                  ArgumentError);
  CHECK_THROWS_AS(m.simulate(Vector::Zero(2), Vector::Zero(30), 0), ArgumentError);
  LinearSsmConfig c = LinearSsmConfig::example();
  c.free_param_index_set = {{2, 0}};
  CHECK_THROWS_AS(LinearSsmModel{c}, ArgumentError);
  MriConfig mc;
  mc.sigma_sq = -1.0;
  CHECK_THROWS_AS(MriModel{mc}, ArgumentError);
}
