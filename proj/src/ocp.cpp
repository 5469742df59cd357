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

#include "hamid/ocp.hpp"

#include "hamid/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hamid {
namespace {

constexpr double kPowerTolerance = 1e-12;

double bound_at(const Vector& b, Eigen::Index i) { return b.size() == 1 ? b(0) : b(i); }

void check_box(const BoxConstraint& b, Eigen::Index n) {
  require(b.lower.size() == 1 || b.lower.size() == n, "box constraint: lower bound length");
  require(b.upper.size() == 1 || b.upper.size() == n, "box constraint: upper bound length");
}

bool box_contains(const BoxConstraint& b, const Vector& u) {
  check_box(b, u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u(i) < bound_at(b.lower, i) || u(i) > bound_at(b.upper, i)) return false;
  }
  return true;
}

Vector box_project(const BoxConstraint& b, const Vector& u) {
  if (box_contains(b, u)) return u;
  Vector out = u;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    out(i) = std::clamp(u(i), bound_at(b.lower, i), bound_at(b.upper, i));
  }
  return out;
}

bool ball_contains(const PowerBallConstraint& c, const Vector& u) {
  return u.squaredNorm() <= c.bound * (1.0 + kPowerTolerance);
}

Vector ball_project(const PowerBallConstraint& c, const Vector& u) {
  if (ball_contains(c, u)) return u;
  return u * std::sqrt(c.bound / u.squaredNorm());
}

void validate_box(const BoxConstraint& b) {
  require(b.lower.size() >= 1 && b.upper.size() >= 1, "box constraint: empty bounds");
  if (b.lower.size() == b.upper.size()) {
    require((b.lower.array() <= b.upper.array()).all(), "box constraint: lower > upper");
  } else {
    require(b.lower.size() == 1 || b.upper.size() == 1, "box constraint: bound lengths differ");
    require(b.lower.maxCoeff() <= b.upper.minCoeff(), "box constraint: lower > upper");
  }
}

}  // namespace

ConstraintSet::ConstraintSet()
    : v_(BoxConstraint{Vector::Constant(1, -std::numeric_limits<double>::infinity()),
                       Vector::Constant(1, std::numeric_limits<double>::infinity())}) {}

ConstraintSet::ConstraintSet(Variant v) : v_(std::move(v)) {
  std::visit(
      [](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, BoxConstraint>) {
          validate_box(c);
        } else if constexpr (std::is_same_v<T, PowerBallConstraint>) {
          require(c.bound > 0.0, "power constraint: bound must be > 0");
        } else {
          validate_box(c.box);
          require(c.ball.bound > 0.0, "power constraint: bound must be > 0");
        }
      },
      v_);
}

ConstraintSet ConstraintSet::box(double lower, double upper) {
  return ConstraintSet(BoxConstraint{Vector::Constant(1, lower), Vector::Constant(1, upper)});
}

ConstraintSet ConstraintSet::power(double bound) {
  return ConstraintSet(PowerBallConstraint{bound});
}

ConstraintSet ConstraintSet::intersection(double lower, double upper, double bound) {
  return ConstraintSet(IntersectionConstraint{
      BoxConstraint{Vector::Constant(1, lower), Vector::Constant(1, upper)},
      PowerBallConstraint{bound}});
}

std::string ConstraintSet::kind() const {
  switch (v_.index()) {
    case 0: return "box";
    case 1: return "power";
    default: return "intersection";
  }
}

bool ConstraintSet::contains(const Vector& u) const {
  return std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, BoxConstraint>) {
          return box_contains(c, u);
        } else if constexpr (std::is_same_v<T, PowerBallConstraint>) {
          return ball_contains(c, u);
        } else {
          return box_contains(c.box, u) && ball_contains(c.ball, u);
        }
      },
      v_);
}

Vector ConstraintSet::project(const Vector& u) const {
  require_finite(u, "project: u");
  return std::visit(
      [&](const auto& c) -> Vector {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, BoxConstraint>) {
          return box_project(c, u);
        } else if constexpr (std::is_same_v<T, PowerBallConstraint>) {
          return ball_project(c, u);
        } else {
          if (box_contains(c.box, u) && ball_contains(c.ball, u)) return u;
          return dykstra_projection(c, u);
        }
      },
      v_);
}

Vector dykstra_projection(const IntersectionConstraint& c, const Vector& u, int max_sweeps,
                          double tol) {
  Vector x = u;
  Vector p = Vector::Zero(u.size());
  Vector q = Vector::Zero(u.size());
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const Vector y = box_project(c.box, x + p);
    p = x + p - y;
    const Vector x_next = ball_project(c.ball, y + q);
    q = y + q - x_next;
    const double change = (x_next - x).norm();
    x = x_next;
    if (change <= tol) break;
  }
  // Final clamp so that amplitude bounds hold exactly; the power bound then
  // holds up to the Dykstra tolerance.
  return box_project(c.box, x);
}

// ---------------------------------------------------------------------------

OcpSpec OcpSpec::make(std::shared_ptr<const ProbabilisticModel> model, Vector theta_star,
                      std::vector<PhasePoint> initial_points, LeapfrogParams leapfrog,
                      double mass, ConstraintSet constraints) {
  require(model != nullptr, "ocp: model is null");
  const auto& dims = model->dims();
  OcpSpec s;
  s.target = Vector::Zero(dims.position_size());
  s.weight = Vector::Zero(dims.position_size());
  require_size(theta_star, dims.n_theta, "theta_star");
  s.target.head(dims.n_theta) = theta_star;
  s.weight.head(dims.n_theta).setOnes();
  s.model = std::move(model);
  s.theta_star = std::move(theta_star);
  s.initial_points = std::move(initial_points);
  s.leapfrog = leapfrog;
  s.mass = mass;
  s.constraints = std::move(constraints);
  return s;
}

void OcpSpec::validate() const {
  require(model != nullptr, "ocp: model is null");
  const auto& dims = model->dims();
  const int d = dims.position_size();
  require_size(theta_star, dims.n_theta, "theta_star");
  require_size(target, d, "ocp: target");
  require_size(weight, d, "ocp: weight");
  int ones = 0;
  for (int i = 0; i < d; ++i) {
    require(weight(i) == 0.0 || weight(i) == 1.0, "ocp: weight must be 0/1");
    if (weight(i) == 1.0) {
      require(i < dims.n_theta, "ocp: weight selects a latent coordinate");
      ++ones;
    }
  }
  require(ones == dims.n_theta, "ocp: weight must select every theta coordinate");
  require(!initial_points.empty(), "ocp: at least one initial phase point is required");
  for (const auto& p : initial_points) {
    require(p.q.size() == d && p.rho.size() == d, "ocp: initial phase point has wrong dimension");
  }
  leapfrog.validate();
  require(mass > 0.0, "ocp: mass must be positive");
}

void PgdSettings::validate() const {
  require(max_iters >= 0, "pgd: max_iters must be >= 0");
  require(initial_step > 0.0, "pgd: initial_step must be > 0");
  require(backtrack > 0.0 && backtrack < 1.0, "pgd: backtrack must lie in (0, 1)");
  require(armijo > 0.0 && armijo < 1.0, "pgd: armijo must lie in (0, 1)");
  require(fd_step > 0.0, "pgd: fd_step must be > 0");
}

std::string to_string(GradientMode mode) {
  return mode == GradientMode::kAdjoint ? "adjoint" : "finite_difference";
}

GradientMode gradient_mode_from_string(const std::string& s) {
  if (s == "finite_difference") return GradientMode::kFiniteDifference;
  if (s == "adjoint") return GradientMode::kAdjoint;
  throw ArgumentError("pgd: unknown gradient_mode '" + s + "'");
}

std::string to_string(PgdStop stop) {
  switch (stop) {
    case PgdStop::kMaxIterations: return "max_iterations";
    case PgdStop::kStepUnderflow: return "step_underflow";
    case PgdStop::kCostStalled: return "cost_stalled";
    case PgdStop::kStationary: return "stationary";
  }
  return "unknown";
}

Vector ocp_output(const OcpSpec& spec, const Vector& u, std::size_t realization) {
  if (spec.output_noise_seeds.empty()) return spec.model->deterministic_output(spec.theta_star, u);
  return spec.model->simulate(spec.theta_star, u, spec.output_noise_seeds.at(realization)).y;
}

namespace {

double ocp_cost_serial_or_parallel(const OcpSpec& spec, const Vector& u, int threads) {
  require_size(u, spec.model->dims().input_size(), "ocp: u");
  const std::size_t realizations = std::max<std::size_t>(1, spec.output_noise_seeds.size());
  const int m = static_cast<int>(spec.initial_points.size());
  double total = 0.0;
  for (std::size_t r = 0; r < realizations; ++r) {
    const HamiltonianContext ctx(*spec.model, u, ocp_output(spec, u, r), spec.mass);
    std::vector<double> terms(static_cast<std::size_t>(m));
    parallel_for(m, threads, [&](int i) {
      const PhasePoint end = leapfrog_endpoint(ctx, spec.initial_points[i], spec.leapfrog);
      terms[static_cast<std::size_t>(i)] =
          (spec.weight.array() * (end.q - spec.target).array().square()).sum();
    });
    for (double t : terms) total += t;
  }
  return total / (static_cast<double>(m) * static_cast<double>(realizations));
}

}  // namespace

double ocp_cost(const OcpSpec& spec, const Vector& u) {
  spec.validate();
  return ocp_cost_serial_or_parallel(spec, u, spec.threads);
}

namespace {

struct PotentialGradients {
  Vector q;
  Vector u;
  Vector y;
};

PotentialGradients potential_gradients(const HamiltonianContext& ctx, const Vector& q) {
  const auto& model = ctx.model();
  const int nt = model.dims().n_theta;
  const Vector theta = q.head(nt);
  const Vector x = q.tail(q.size() - nt);
  PotentialGradients g;
  g.q = grad_potential(ctx, q);
  DataGradient d = model.grad_log_joint_data(theta, x, ctx.u(), ctx.y());
  g.u = -d.u;
  g.y = -d.y;
  return g;
}

/// Products of the second derivatives of U at q with v: d(grad_q U)/dq v and
/// the transposed mixed blocks d(grad_q U)/du' v, d(grad_q U)/dy' v, all from
/// a central difference of analytic gradients along v.
PotentialGradients second_products(const HamiltonianContext& ctx, const Vector& q,
                                   const Vector& v, double fd_step) {
  const double norm = v.norm();
  if (norm == 0.0) {
    return {Vector::Zero(q.size()), Vector::Zero(ctx.u().size()), Vector::Zero(ctx.y().size())};
  }
  const double h = fd_step * (1.0 + q.lpNorm<Eigen::Infinity>());
  const Vector dir = v / norm;
  const PotentialGradients up = potential_gradients(ctx, q + h * dir);
  const PotentialGradients down = potential_gradients(ctx, q - h * dir);
  const double scale = norm / (2.0 * h);
  return {scale * (up.q - down.q), scale * (up.u - down.u), scale * (up.y - down.y)};
}

/// Reverse accumulation of |q(L) - q*|_W^2 through one leapfrog rollout.
/// Adds the direct input gradient to gu and the output gradient to gy.
void rollout_adjoint(const OcpSpec& spec, const HamiltonianContext& ctx, const PhasePoint& p0,
                     double fd_step, Vector& gu, Vector& gy) {
  const double eps = spec.leapfrog.epsilon;
  const int steps = spec.leapfrog.steps;
  const std::vector<PhasePoint> path = leapfrog_rollout(ctx, p0, spec.leapfrog);
  Vector a_q = 2.0 * spec.weight.cwiseProduct(path.back().q - spec.target);
  Vector a_rho = Vector::Zero(a_q.size());
  for (int k = steps - 1; k >= 0; --k) {
    a_rho += (eps / spec.mass) * a_q;
    // Interior points receive the closing half kick of step k-1 and the
    // opening half kick of step k, both driven by the same adjoint.
    const double c = k >= 1 ? eps : 0.5 * eps;
    const PotentialGradients hv = second_products(ctx, path[k].q, a_rho, fd_step);
    a_q -= c * hv.q;
    gu -= c * hv.u;
    gy -= c * hv.y;
  }
}

Vector adjoint_gradient(const OcpSpec& spec, const Vector& u, const PgdSettings& settings) {
  const auto& model = *spec.model;
  require(model.has_data_gradient(),
          "pgd: gradient_mode 'adjoint' needs data gradients, which " + model.type_name() +
              " does not provide");
  require(spec.output_noise_seeds.empty(),
          "pgd: gradient_mode 'adjoint' supports only the deterministic output");
  const Vector y = model.deterministic_output(spec.theta_star, u);
  const HamiltonianContext ctx(model, u, y, spec.mass);
  const int m = static_cast<int>(spec.initial_points.size());
  std::vector<Vector> gus(static_cast<std::size_t>(m));
  std::vector<Vector> gys(static_cast<std::size_t>(m));
  parallel_for(m, std::max(settings.threads, spec.threads), [&](int i) {
    Vector gu = Vector::Zero(u.size());
    Vector gy = Vector::Zero(y.size());
    rollout_adjoint(spec, ctx, spec.initial_points[i], settings.fd_step, gu, gy);
    gus[static_cast<std::size_t>(i)] = std::move(gu);
    gys[static_cast<std::size_t>(i)] = std::move(gy);
  });
  Vector gu = Vector::Zero(u.size());
  Vector gy = Vector::Zero(y.size());
  for (int i = 0; i < m; ++i) {
    gu += gus[static_cast<std::size_t>(i)];
    gy += gys[static_cast<std::size_t>(i)];
  }
  gu += model.deterministic_output_vjp(spec.theta_star, u, gy);
  gu /= static_cast<double>(m);
  if (!gu.allFinite()) throw NumericDomainError("ocp: non-finite adjoint gradient");
  return gu;
}

Vector finite_difference_gradient(const OcpSpec& spec, const Vector& u,
                                  const PgdSettings& settings) {
  const int n = static_cast<int>(u.size());
  Vector g(n);
  // Parallelism goes over coordinates; each cost evaluation runs serially.
  parallel_for(n, std::max(settings.threads, spec.threads), [&](int t) {
    const double h = settings.fd_step * (1.0 + std::abs(u(t)));
    Vector up = u;
    Vector down = u;
    up(t) += h;
    down(t) -= h;
    g(t) = (ocp_cost_serial_or_parallel(spec, up, 1) - ocp_cost_serial_or_parallel(spec, down, 1)) /
           (up(t) - down(t));
  });
  return g;
}

}  // namespace

Vector ocp_gradient(const OcpSpec& spec, const Vector& u, const PgdSettings& settings) {
  spec.validate();
  settings.validate();
  require_size(u, spec.model->dims().input_size(), "ocp: u");
  if (settings.gradient_mode == GradientMode::kAdjoint) return adjoint_gradient(spec, u, settings);
  return finite_difference_gradient(spec, u, settings);
}

int drop_divergent_points(OcpSpec& spec, const Vector& u) {
  spec.validate();
  require_size(u, spec.model->dims().input_size(), "ocp: u");
  const HamiltonianContext ctx(*spec.model, u, ocp_output(spec, u), spec.mass);
  const int m = static_cast<int>(spec.initial_points.size());
  std::vector<char> keep(static_cast<std::size_t>(m), 0);
  parallel_for(m, spec.threads, [&](int i) {
    try {
      const PhasePoint end = leapfrog_endpoint(ctx, spec.initial_points[i], spec.leapfrog);
      keep[static_cast<std::size_t>(i)] = end.q.allFinite() && end.rho.allFinite();
    } catch (const NumericDomainError&) {
      keep[static_cast<std::size_t>(i)] = 0;
    }
  });
  std::vector<PhasePoint> kept;
  for (int i = 0; i < m; ++i) {
    if (keep[static_cast<std::size_t>(i)]) kept.push_back(std::move(spec.initial_points[i]));
  }
  const int dropped = m - static_cast<int>(kept.size());
  spec.initial_points = std::move(kept);
  return dropped;
}

PgdResult projected_gradient_descent(const std::function<double(const Vector&)>& cost,
                                     const std::function<Vector(const Vector&)>& gradient,
                                     const ConstraintSet& constraints, const Vector& u_init,
                                     const PgdSettings& settings) {
  require(settings.max_iters >= 0, "pgd: max_iters must be >= 0");
  require(settings.backtrack > 0.0 && settings.backtrack < 1.0, "pgd: backtrack must lie in (0, 1)");
  require(settings.armijo > 0.0 && settings.armijo < 1.0, "pgd: armijo must lie in (0, 1)");
  require(settings.initial_step > 0.0, "pgd: initial_step must be > 0");

  auto safe_cost = [&](const Vector& u) {
    try {
      const double c = cost(u);
      return std::isfinite(c) ? c : std::numeric_limits<double>::infinity();
    } catch (const NumericDomainError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  PgdResult res;
  res.u = constraints.project(u_init);
  double current = cost(res.u);
  res.cost_trace.push_back(current);
  const double min_step = settings.initial_step * 1e-14;
  const double max_step = settings.initial_step * 1e8;
  double step = settings.initial_step;

  for (int k = 0; k < settings.max_iters; ++k) {
    Vector g;
    try {
      g = gradient(res.u);
    } catch (const NumericDomainError&) {
      g = Vector::Constant(res.u.size(), std::numeric_limits<double>::quiet_NaN());
    }
    if (!g.allFinite() || g.squaredNorm() == 0.0) {
      res.stop = PgdStop::kStationary;
      return res;
    }
    bool accepted = false;
    Vector trial;
    double trial_cost = 0.0;
    while (step >= min_step) {
      trial = constraints.project(res.u - step * g);
      const Vector d = trial - res.u;
      if (d.squaredNorm() == 0.0) {
        res.stop = PgdStop::kStationary;
        return res;
      }
      trial_cost = safe_cost(trial);
      if (trial_cost <= current + settings.armijo * g.dot(d)) {
        accepted = true;
        break;
      }
      step *= settings.backtrack;
    }
    if (!accepted) {
      res.stop = PgdStop::kStepUnderflow;
      return res;
    }
    ++res.iterations;
    const double previous = current;
    res.u = trial;
    current = trial_cost;
    res.cost_trace.push_back(current);
    if (std::abs(current - previous) <= 1e-10 * (1.0 + std::abs(current))) {
      res.stop = PgdStop::kCostStalled;
      return res;
    }
    step = std::min(step / settings.backtrack, max_step);
  }
  res.stop = PgdStop::kMaxIterations;
  return res;
}

PgdResult pgd_solve(const OcpSpec& spec, const Vector& u_init, const PgdSettings& settings) {
  spec.validate();
  settings.validate();
  return projected_gradient_descent(
      [&](const Vector& u) { return ocp_cost_serial_or_parallel(spec, u, spec.threads); },
      [&](const Vector& u) { return ocp_gradient(spec, u, settings); }, spec.constraints, u_init,
      settings);
}

}  // namespace hamid
