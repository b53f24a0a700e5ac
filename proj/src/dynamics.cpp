#include "swim/dynamics.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <optional>
#include <set>

#include "swim/errors.hpp"

namespace swim {

namespace {

// u_dot for R = R0 exp(u^) and body angular velocity Omega: the inverse
// right-trivialized exponential differential, truncated after the quadratic
// term (enough for 4th order with u = O(step)).
Vec3 dexpinv_step(const Vec3& u, const Vec3& omega) {
  return omega + 0.5 * u.cross(omega) + (1.0 / 12.0) * u.cross(u.cross(omega));
}

Vec6 solve_impulse(const MassMatrices& mm, const VecX& sdot, double* residual) {
  const Mat6 mr = mm.Mr();
  Eigen::LLT<Mat6> llt(mr);
  if (llt.info() != Eigen::Success)
    throw MassMatrixSingular("total mass matrix is not positive definite");
  const Vec6 impulse = mm.N * sdot;
  const Vec6 rigid = llt.solve(-impulse);
  if (residual != nullptr) {
    const double scale =
        mr.norm() * rigid.norm() + mm.N.norm() * sdot.norm() + 1e-300;
    *residual = (mr * rigid + impulse).norm() / scale;
  }
  return rigid;
}

}  // namespace

RigidVelocity rigid_velocity(const MassMatrices& mm, const VecX& sdot) {
  if (sdot.size() != mm.N.cols()) throw ConfigError("shape rate has wrong dimension");
  const Vec6 rigid = solve_impulse(mm, sdot, nullptr);
  return {rigid.head<3>(), rigid.tail<3>()};
}

RigidVelocity rigid_velocity(const MassModel& model, const VecX& s, const VecX& sdot) {
  return rigid_velocity(model.at(s), sdot);
}

Trajectory integrate(const MassModel& model, const ControlSchedule& controls,
                     const BodyState& initial, double step) {
  if (step <= 0.0) throw ConfigError("integration step must be positive");
  if (initial.s.size() != model.n())
    throw ConfigError("initial shape coordinates do not match the model");

  const double t_end = controls.duration();
  std::set<double> cut_set = {0.0, t_end};
  for (double b : controls.breakpoints())
    if (b > 0.0 && b < t_end) cut_set.insert(b);
  const std::vector<double> cuts(cut_set.begin(), cut_set.end());

  Trajectory traj;
  traj.step = step;

  BodyState state = initial;
  std::optional<MassMatrices> carried;  // mass data at the current state.s

  // Schedule evaluation pinned to the current smooth piece: the right end of
  // a piece takes the left limit (an interior nudge), so discontinuities at
  // breakpoints never leak into the previous piece's stages.
  auto lambda_in = [&](double t, double a, double b) {
    const double nudge = 1e-9 * (b - a);
    return controls.value(t >= b ? b - nudge : t);
  };

  struct Stage {
    Vec3 du;
    Vec3 dr;
    VecX ds;
  };
  auto eval_stage = [&](const Vec3& u, const VecX& lam, const MassMatrices& mm) -> Stage {
    double residual = 0.0;
    const Vec6 rigid = solve_impulse(mm, lam, &residual);
    traj.max_impulse_residual = std::max(traj.max_impulse_residual, residual);
    return {dexpinv_step(u, rigid.head<3>()), state.R * rot_exp(u) * rigid.tail<3>(), lam};
  };

  auto record = [&](double t) {
    if (!carried) carried = model.at(state.s);
    const RigidVelocity vel = rigid_velocity(*carried, controls.value(std::min(t, t_end)));
    traj.samples.push_back({t, state, vel});
    traj.max_orthogonality_drift =
        std::max(traj.max_orthogonality_drift, orthogonality_defect(state.R));
  };

  record(0.0);

  for (size_t piece = 0; piece + 1 < cuts.size(); ++piece) {
    const double piece_start = cuts[piece], piece_end = cuts[piece + 1];
    const double len = piece_end - piece_start;
    const int nsteps = std::max(1, static_cast<int>(std::ceil(len / step - 1e-12)));
    const double h = len / nsteps;

    for (int k = 0; k < nsteps; ++k) {
      const double t = piece_start + k * h;
      if (!carried) carried = model.at(state.s);

      const Stage k1 = eval_stage(Vec3::Zero(), lambda_in(t, piece_start, piece_end), *carried);
      const VecX s2 = state.s + 0.5 * h * k1.ds;
      const Stage k2 = eval_stage(0.5 * h * k1.du,
                                  lambda_in(t + 0.5 * h, piece_start, piece_end), model.at(s2));
      const VecX s3 = state.s + 0.5 * h * k2.ds;
      const Stage k3 = eval_stage(0.5 * h * k2.du,
                                  lambda_in(t + 0.5 * h, piece_start, piece_end), model.at(s3));
      const VecX s4 = state.s + h * k3.ds;
      const Stage k4 =
          eval_stage(h * k3.du, lambda_in(t + h, piece_start, piece_end), model.at(s4));

      const Vec3 u = h / 6.0 * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du);
      state.R = state.R * rot_exp(u);
      state.r += h / 6.0 * (k1.dr + 2.0 * k2.dr + 2.0 * k3.dr + k4.dr);
      state.s += h / 6.0 * (k1.ds + 2.0 * k2.ds + 2.0 * k3.ds + k4.ds);

      carried.reset();
      record(k + 1 == nsteps ? piece_end : t + h);
    }
  }
  return traj;
}

std::pair<double, double> check_constraints(const DensityField& rho,
                                            const std::function<FieldPtr(double)>& path,
                                            double t_end, int grid,
                                            const QuadratureRule& rule) {
  const double h = t_end / grid;
  const double delta = h / 8.0;
  double worst_linear = 0.0, worst_angular = 0.0;

  for (int k = 0; k <= grid; ++k) {
    const double t = k * h;
    // Symmetric stencil, shifted inward at the path ends.
    const double lo = std::max(0.0, std::min(t - delta, t_end - 2.0 * delta));
    const double hi = lo + 2.0 * delta;
    const FieldPtr f_lo = path(lo), f_hi = path(hi), f = path(t);

    Vec3 linear = Vec3::Zero(), angular = Vec3::Zero();
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const Vec3& x = rule.points[q];
      const double w = rule.weights[q] * rho.value(x);
      const Vec3 theta = x + f->value(x);
      const Vec3 rate = (f_hi->value(x) - f_lo->value(x)) / (2.0 * delta);
      linear += w * theta;
      angular += w * rate.cross(theta);
    }
    worst_linear = std::max(worst_linear, linear.norm());
    worst_angular = std::max(worst_angular, angular.norm());
  }
  return {worst_linear, worst_angular};
}

std::pair<double, double> check_constraints(const SwimmerConfig& config,
                                            const std::function<VecX(double)>& s_path,
                                            double t_end, int grid, const QuadratureRule& rule) {
  return check_constraints(
      config.density, [&](double t) { return total_field(config, s_path(t)); }, t_end, grid,
      rule);
}

ProjectedPath::ProjectedPath(const DensityField& rho, std::function<FieldPtr(double)> path,
                             double t_end, int grid, const QuadratureRule& rule)
    : path_(std::move(path)), t_end_(t_end), rule_(rule), rho_(rho), mass_(0.0) {
  for (size_t q = 0; q < rule_.points.size(); ++q)
    mass_ += rule_.weights[q] * rho_.value(rule_.points[q]);

  // March R_dot = R G^ across the grid with the same Lie RK4 used by the
  // main integrator; G depends on time only.
  times_.resize(grid + 1);
  frames_.resize(grid + 1);
  const double h = t_end_ / grid;
  Mat3 rot = Mat3::Identity();
  times_[0] = 0.0;
  frames_[0] = rot;
  for (int k = 0; k < grid; ++k) {
    const double t = k * h;
    const Vec3 g1 = spin_rate(t);
    const Vec3 gm = spin_rate(t + 0.5 * h);
    const Vec3 g2 = spin_rate(t + h);
    const Vec3 k1 = dexpinv_step(Vec3::Zero(), g1);
    const Vec3 k2 = dexpinv_step(0.5 * h * k1, gm);
    const Vec3 k3 = dexpinv_step(0.5 * h * k2, gm);
    const Vec3 k4 = dexpinv_step(h * k3, g2);
    rot = rot * rot_exp(h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    times_[k + 1] = t + h;
    frames_[k + 1] = rot;
  }
}

Vec3 ProjectedPath::drift_at(double t) const {
  const FieldPtr f = path_(t);
  Vec3 acc = Vec3::Zero();
  for (size_t q = 0; q < rule_.points.size(); ++q) {
    const Vec3& x = rule_.points[q];
    acc += rule_.weights[q] * rho_.value(x) * (x + f->value(x));
  }
  return acc / mass_;
}

Vec3 ProjectedPath::spin_rate(double t) const {
  const double delta = t_end_ / (times_.size() - 1) / 8.0;
  const double lo = std::max(0.0, std::min(t - delta, t_end_ - 2.0 * delta));
  const double hi = lo + 2.0 * delta;
  const FieldPtr f_lo = path_(lo), f_hi = path_(hi);
  const Vec3 r_lo = drift_at(lo), r_hi = drift_at(hi);

  Mat3 inertia = Mat3::Zero();
  Vec3 torque = Vec3::Zero();
  for (size_t q = 0; q < rule_.points.size(); ++q) {
    const Vec3& x = rule_.points[q];
    const double w = rule_.weights[q] * rho_.value(x);
    const Vec3 a = x + f_lo->value(x) - r_lo;
    const Vec3 b = x + f_hi->value(x) - r_hi;
    const Vec3 mid = 0.5 * (a + b);
    const Vec3 rate = (b - a) / (2.0 * delta);
    inertia += w * (mid.squaredNorm() * Mat3::Identity() - mid * mid.transpose());
    torque += w * rate.cross(mid);
  }
  Eigen::LLT<Mat3> llt(inertia);
  if (llt.info() != Eigen::Success)
    throw InertiaSingular("inertia tensor of the recentered path is singular");
  return llt.solve(torque);
}

Mat3 ProjectedPath::frame(double t) const {
  if (t <= 0.0) return frames_.front();
  if (t >= t_end_) return frames_.back();
  const double h = t_end_ / (times_.size() - 1);
  const size_t k = std::min(frames_.size() - 2, static_cast<size_t>(t / h));
  const double a = (t - times_[k]) / h;
  const Mat3 rel = frames_[k].transpose() * frames_[k + 1];
  return frames_[k] * rot_exp(a * rot_log(rel));
}

Vec3 ProjectedPath::drift(double t) const { return drift_at(t); }

FieldPtr ProjectedPath::field(double t) const {
  return std::make_shared<FrameCorrectedField>(path_(t), frame(t), drift_at(t));
}

ProjectedPath project_self_propelled(const DensityField& rho, std::function<FieldPtr(double)> path,
                                     double t_end, int grid, const QuadratureRule& rule) {
  return ProjectedPath(rho, std::move(path), t_end, grid, rule);
}

}  // namespace swim
