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

#include "hamid/linear_ssm.hpp"

#include "hamid/random.hpp"

#include <cmath>

namespace hamid {

LinearSsmConfig LinearSsmConfig::example() {
  LinearSsmConfig c;
  c.A = Matrix(2, 2);
  c.A << 0.7, 0.3, -0.2, 0.7;
  c.B = Matrix(2, 1);
  c.B << 0.0, 1.0;
  c.C = Matrix(1, 2);
  c.C << 1.0, 0.0;
  c.D = Matrix::Zero(1, 1);
  c.sigma_w = 0.05 * 0.05 * Matrix::Identity(2, 2);
  c.sigma_v = 0.1 * 0.1 * Matrix::Identity(1, 1);
  c.free_param_index_set = {{1, 0}, {1, 1}};
  c.x0_mean = Vector::Zero(2);
  c.x0_cov = 0.1 * 0.1 * Matrix::Identity(2, 2);
  c.horizon = 50;
  return c;
}

Vector linear_example_theta_star() {
  Vector t(2);
  t << -0.2, 0.7;
  return t;
}

void LinearSsmConfig::validate() const {
  const auto n = A.rows();
  require(n >= 1 && A.cols() == n, "linear_ssm: A must be square and non-empty");
  require(B.rows() == n, "linear_ssm: B must have as many rows as A");
  require(C.cols() == n, "linear_ssm: C must have as many columns as A");
  require(D.rows() == C.rows() && D.cols() == B.cols(), "linear_ssm: D has wrong shape");
  require(sigma_w.rows() == n && sigma_w.cols() == n, "linear_ssm: Sigma_w has wrong shape");
  require(sigma_v.rows() == C.rows() && sigma_v.cols() == C.rows(),
          "linear_ssm: Sigma_v has wrong shape");
  require(x0_mean.size() == n, "linear_ssm: x0_mean has wrong length");
  require(x0_cov.rows() == n && x0_cov.cols() == n, "linear_ssm: x0_cov has wrong shape");
  require(is_symmetric_psd(sigma_w), "linear_ssm: Sigma_w must be symmetric positive semidefinite");
  require(is_symmetric_psd(sigma_v), "linear_ssm: Sigma_v must be symmetric positive semidefinite");
  require(is_symmetric_psd(x0_cov), "linear_ssm: x0_cov must be symmetric positive semidefinite");
  require(!free_param_index_set.empty(), "linear_ssm: at least one free parameter is required");
  for (auto [r, c] : free_param_index_set) {
    require(r >= 0 && r < n && c >= 0 && c < n, "linear_ssm: free parameter index out of range");
  }
  require(horizon >= 1, "linear_ssm: horizon must be >= 1");
}

Matrix LinearSsmConfig::system_matrix(const Vector& theta) const {
  require_size(theta, static_cast<Eigen::Index>(free_param_index_set.size()), "theta");
  Matrix a = A;
  for (std::size_t j = 0; j < free_param_index_set.size(); ++j) {
    const auto [r, c] = free_param_index_set[j];
    a(r, c) = theta(static_cast<Eigen::Index>(j));
  }
  return a;
}

namespace {

// The two-state, single-input, single-output case gets fully fixed-size
// matrices; everything else runs on dynamic ones.
template <int N, int NY, int NU>
struct KalmanTypes {
  using MatNN = Eigen::Matrix<double, N, N>;
  using MatYN = Eigen::Matrix<double, NY, N>;
  using MatNY = Eigen::Matrix<double, N, NY>;
  using MatYY = Eigen::Matrix<double, NY, NY>;
  using MatNU = Eigen::Matrix<double, N, NU>;
  using MatYU = Eigen::Matrix<double, NY, NU>;
  using VecN = Eigen::Matrix<double, N, 1>;
  using VecY = Eigen::Matrix<double, NY, 1>;
  using VecU = Eigen::Matrix<double, NU, 1>;
};

constexpr int kDyn = Eigen::Dynamic;

bool is_siso2(const LinearSsmConfig& c) {
  return c.state_size() == 2 && c.C.rows() == 1 && c.B.cols() == 1;
}

template <class Llt>
double half_logdet(const Llt& llt) {
  double s = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) s += std::log(l(i, i));
  return s;
}

template <int N, int NY, int NU>
KalmanResult kalman_impl(const LinearSsmConfig& config, const Vector& theta, const Vector& u,
                         const Vector& y) {
  using K = KalmanTypes<N, NY, NU>;
  const int nu = static_cast<int>(config.B.cols());
  const int ny = static_cast<int>(config.C.rows());
  const int T = config.horizon;
  const int np = static_cast<int>(config.free_param_index_set.size());

  const typename K::MatNN A = config.system_matrix(theta);
  const typename K::MatNN At = A.transpose();
  const typename K::MatYN C = config.C;
  const typename K::MatNY Ct = C.transpose();
  const typename K::MatYU D = config.D;
  const typename K::MatNU B = config.B;
  const typename K::MatNN Sw = config.sigma_w;
  const typename K::MatYY Sv = config.sigma_v;

  typename K::VecN m = config.x0_mean;
  typename K::MatNN P = config.x0_cov;
  std::vector<typename K::VecN> dm(np, K::VecN::Zero(m.size()));
  std::vector<typename K::MatNN> dP(np, K::MatNN::Zero(P.rows(), P.cols()));

  KalmanResult out;
  out.grad = Vector::Zero(np);

  for (int t = 0; t < T; ++t) {
    const typename K::VecU ut = u.segment(static_cast<Eigen::Index>(t) * nu, nu);
    const typename K::VecY yt = y.segment(static_cast<Eigen::Index>(t) * ny, ny);

    const typename K::VecY e = yt - C * m - D * ut;
    const typename K::MatNY PCt = P * Ct;
    const typename K::MatYY S = C * PCt + Sv;
    Eigen::LLT<typename K::MatYY> llt(S);
    if (llt.info() != Eigen::Success) {
      throw NumericDomainError("kalman_loglik: innovation covariance is not positive definite");
    }
    const typename K::VecY Sinv_e = llt.solve(e);
    const typename K::MatYN Sinv_CP = llt.solve(PCt.transpose());  // S^{-1} C P
    out.value += -half_logdet(llt) - 0.5 * e.dot(Sinv_e);

    const typename K::VecN mf = m + PCt * Sinv_e;
    const typename K::MatNN Pf = P - PCt * Sinv_CP;
    const typename K::MatNN PfAt = Pf * At;

    for (int j = 0; j < np; ++j) {
      const typename K::VecY de = -(C * dm[j]);
      const typename K::MatNY dPCt = dP[j] * Ct;
      const typename K::MatYY dS = C * dPCt;
      const typename K::MatYY Sinv_dS = llt.solve(dS);
      out.grad(j) += -0.5 * (Sinv_dS.trace() - Sinv_e.dot(dS * Sinv_e) + 2.0 * Sinv_e.dot(de));

      // Filtered mean: mf = m + P C' S^{-1} e.
      const typename K::VecN dmf =
          dm[j] + dPCt * Sinv_e - PCt * (Sinv_dS * Sinv_e) + PCt * llt.solve(de);
      // Filtered covariance: Pf = P - P C' S^{-1} C P.
      const typename K::MatNN cross = dPCt * Sinv_CP;
      const typename K::MatNN dPf =
          dP[j] - cross - cross.transpose() + Sinv_CP.transpose() * dS * Sinv_CP;

      // dA is the unit matrix at the free entry (r, c).
      const auto [r, c] = config.free_param_index_set[j];
      dm[j] = A * dmf;
      dm[j](r) += mf(c);
      typename K::MatNN dAPfAt = K::MatNN::Zero(P.rows(), P.cols());
      dAPfAt.row(r) = PfAt.row(c);
      dP[j] = dAPfAt + dAPfAt.transpose() + A * dPf * At;
    }

    m = A * mf + B * ut;
    P = A * PfAt + Sw;
  }
  if (!std::isfinite(out.value) || !out.grad.allFinite()) {
    throw NumericDomainError("kalman_loglik: non-finite likelihood");
  }
  return out;
}

template <int N, int NY, int NU>
DataGradient kalman_data_impl(const LinearSsmConfig& config, const Vector& theta, const Vector& u,
                              const Vector& y) {
  using K = KalmanTypes<N, NY, NU>;
  const int nu = static_cast<int>(config.B.cols());
  const int ny = static_cast<int>(config.C.rows());
  const int T = config.horizon;

  const typename K::MatNN A = config.system_matrix(theta);
  const typename K::MatYN C = config.C;
  const typename K::MatYU D = config.D;
  const typename K::MatNU B = config.B;
  const typename K::MatNN Sw = config.sigma_w;
  const typename K::MatYY Sv = config.sigma_v;

  // Forward pass: gains and whitened innovations. The covariance recursion
  // does not depend on the data.
  std::vector<typename K::MatNY> gain(T);
  std::vector<typename K::VecY> sinv_e(T);
  typename K::VecN m = config.x0_mean;
  typename K::MatNN P = config.x0_cov;
  for (int t = 0; t < T; ++t) {
    const typename K::VecU ut = u.segment(static_cast<Eigen::Index>(t) * nu, nu);
    const typename K::VecY yt = y.segment(static_cast<Eigen::Index>(t) * ny, ny);
    const typename K::VecY e = yt - C * m - D * ut;
    const typename K::MatNY PCt = P * C.transpose();
    Eigen::LLT<typename K::MatYY> llt(C * PCt + Sv);
    if (llt.info() != Eigen::Success) {
      throw NumericDomainError("kalman_loglik: innovation covariance is not positive definite");
    }
    sinv_e[t] = llt.solve(e);
    gain[t] = llt.solve(PCt.transpose()).transpose();
    const typename K::VecN mf = m + gain[t] * e;
    const typename K::MatNN Pf = P - gain[t] * PCt.transpose();
    m = A * mf + B * ut;
    P = A * Pf * A.transpose() + Sw;
  }

  // Reverse pass over m_{t+1} = A (m_t + K_t e_t) + B u_t, e_t = y_t - C m_t - D u_t,
  // with log-likelihood -0.5 sum e_t' S_t^{-1} e_t.
  DataGradient g{Vector(static_cast<Eigen::Index>(nu) * T), Vector(static_cast<Eigen::Index>(ny) * T)};
  typename K::VecN lambda = K::VecN::Zero(A.rows());  // adjoint of m_{t+1}
  for (int t = T - 1; t >= 0; --t) {
    const typename K::VecN a_mf = A.transpose() * lambda;
    const typename K::VecY a_e = -sinv_e[t] + gain[t].transpose() * a_mf;
    g.y.segment(static_cast<Eigen::Index>(t) * ny, ny) = a_e;
    g.u.segment(static_cast<Eigen::Index>(t) * nu, nu) = B.transpose() * lambda - D.transpose() * a_e;
    lambda = a_mf - C.transpose() * a_e;
  }
  if (!g.u.allFinite() || !g.y.allFinite()) {
    throw NumericDomainError("kalman_loglik: non-finite data gradient");
  }
  return g;
}

}  // namespace

KalmanResult kalman_loglik(const LinearSsmConfig& config, const Vector& theta, const Vector& u,
                           const Vector& y) {
  const int nu = static_cast<int>(config.B.cols());
  const int ny = static_cast<int>(config.C.rows());
  require_size(u, static_cast<Eigen::Index>(nu) * config.horizon, "u");
  require_size(y, static_cast<Eigen::Index>(ny) * config.horizon, "y");
  return is_siso2(config) ? kalman_impl<2, 1, 1>(config, theta, u, y)
                          : kalman_impl<kDyn, kDyn, kDyn>(config, theta, u, y);
}

DataGradient kalman_data_gradient(const LinearSsmConfig& config, const Vector& theta,
                                  const Vector& u, const Vector& y) {
  const int nu = static_cast<int>(config.B.cols());
  const int ny = static_cast<int>(config.C.rows());
  require_size(u, static_cast<Eigen::Index>(nu) * config.horizon, "u");
  require_size(y, static_cast<Eigen::Index>(ny) * config.horizon, "y");
  return is_siso2(config) ? kalman_data_impl<2, 1, 1>(config, theta, u, y)
                          : kalman_data_impl<kDyn, kDyn, kDyn>(config, theta, u, y);
}

namespace {

ModelDims linear_dims(const LinearSsmConfig& c) {
  c.validate();
  ModelDims d;
  d.n_theta = static_cast<int>(c.free_param_index_set.size());
  d.n_x = 0;
  d.n_u = static_cast<int>(c.B.cols());
  d.n_y = static_cast<int>(c.C.rows());
  d.horizon = c.horizon;
  return d;
}

}  // namespace

LinearSsmModel::LinearSsmModel(LinearSsmConfig config, GaussianPrior prior)
    : ProbabilisticModel(linear_dims(config), prior), config_(std::move(config)) {}

double LinearSsmModel::log_joint(const Vector& theta, const Vector& x, const Vector& u,
                                 const Vector& y) const {
  check_arguments(theta, x, u, y);
  return kalman_loglik(config_, theta, u, y).value;
}

JointGradient LinearSsmModel::grad_log_joint(const Vector& theta, const Vector& x, const Vector& u,
                                             const Vector& y) const {
  check_arguments(theta, x, u, y);
  return {kalman_loglik(config_, theta, u, y).grad, Vector(0)};
}

DataGradient LinearSsmModel::grad_log_joint_data(const Vector& theta, const Vector& x,
                                                const Vector& u, const Vector& y) const {
  check_arguments(theta, x, u, y);
  return kalman_data_gradient(config_, theta, u, y);
}

Vector LinearSsmModel::deterministic_output_vjp(const Vector& theta, const Vector& u,
                                                const Vector& w) const {
  check_theta_input(theta, u);
  require_size(w, dims().output_size(), "w");
  const auto& c = config_;
  const int nu = dims().n_u;
  const int ny = dims().n_y;
  const Matrix A = c.system_matrix(theta);
  Vector gu(dims().input_size());
  Vector lambda = Vector::Zero(c.state_size());  // adjoint of x_{t+1}
  for (int t = c.horizon - 1; t >= 0; --t) {
    const Vector wt = w.segment(static_cast<Eigen::Index>(t) * ny, ny);
    gu.segment(static_cast<Eigen::Index>(t) * nu, nu) =
        c.B.transpose() * lambda + c.D.transpose() * wt;
    lambda = A.transpose() * lambda + c.C.transpose() * wt;
  }
  return gu;
}

Simulation LinearSsmModel::simulate(const Vector& theta, const Vector& u,
                                    std::uint64_t seed) const {
  check_theta_input(theta, u);
  const auto& c = config_;
  const int n = c.state_size();
  const int nu = dims().n_u;
  const int ny = dims().n_y;
  const Matrix A = c.system_matrix(theta);
  const Matrix Lw = psd_factor(c.sigma_w);
  const Matrix Lv = psd_factor(c.sigma_v);
  Rng rng = make_rng(seed, {0x6c696e});

  Vector x = c.x0_mean + psd_factor(c.x0_cov) * standard_normal(n, rng);
  Vector y(dims().output_size());
  for (int t = 0; t < c.horizon; ++t) {
    const Vector ut = u.segment(static_cast<Eigen::Index>(t) * nu, nu);
    y.segment(static_cast<Eigen::Index>(t) * ny, ny) =
        c.C * x + c.D * ut + Lv * standard_normal(ny, rng);
    x = A * x + c.B * ut + Lw * standard_normal(n, rng);
  }
  return {y, Vector(0)};
}

Vector LinearSsmModel::deterministic_output(const Vector& theta, const Vector& u) const {
  check_theta_input(theta, u);
  const auto& c = config_;
  const int nu = dims().n_u;
  const int ny = dims().n_y;
  const Matrix A = c.system_matrix(theta);
  Vector x = c.x0_mean;
  Vector y(dims().output_size());
  for (int t = 0; t < c.horizon; ++t) {
    const Vector ut = u.segment(static_cast<Eigen::Index>(t) * nu, nu);
    y.segment(static_cast<Eigen::Index>(t) * ny, ny) = c.C * x + c.D * ut;
    x = A * x + c.B * ut;
  }
  return y;
}

}  // namespace hamid
