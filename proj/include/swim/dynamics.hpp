#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "swim/config.hpp"
#include "swim/mass.hpp"
#include "swim/schedule.hpp"
#include "swim/types.hpp"

namespace swim {

// Pose and shape of the swimmer: orientation R, center-of-mass position r,
// shape coordinates s.
struct BodyState {
  Mat3 R = Mat3::Identity();
  Vec3 r = Vec3::Zero();
  VecX s;
};

// Rigid velocity in the body frame: angular Omega, linear v (r_dot = R v).
struct RigidVelocity {
  Vec3 Omega = Vec3::Zero();
  Vec3 v = Vec3::Zero();
};

struct TrajectorySample {
  double t;
  BodyState state;
  RigidVelocity velocity;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double step = 0.0;
  int order = 4;
  // Worst relative defect of Mr (Omega; v) + N sdot = 0 over all steps.
  double max_impulse_residual = 0.0;
  // Worst |R' R - Id| over all samples.
  double max_orthogonality_drift = 0.0;

  const TrajectorySample& front() const { return samples.front(); }
  const TrajectorySample& back() const { return samples.back(); }
};

// The unique rigid velocity with zero total impulse for shape rates sdot:
// (Omega; v) = -Mr^{-1} N sdot.  Throws MassMatrixSingular when the Cholesky
// factorization of Mr fails.
RigidVelocity rigid_velocity(const MassMatrices& mm, const VecX& sdot);
RigidVelocity rigid_velocity(const MassModel& model, const VecX& s, const VecX& sdot);

// Fixed-step 4th-order Lie-group integrator (Runge-Kutta-Munthe-Kaas) for
// d/dt (R, r, s) driven by the schedule: sdot = lambda(t), rigid part from
// rigid_velocity, orientation advanced by R exp(u^) with the truncated
// dexpinv series.  Steps are split at schedule breakpoints so discontinuous
// controls are integrated piecewise; mass data is refreshed at every stage.
Trajectory integrate(const MassModel& model, const ControlSchedule& controls,
                     const BodyState& initial, double step);

// Self-propulsion residuals of a shape path: max over the grid of
// |int rho Theta_t| and |int rho dTheta_t/dt x Theta_t| (time derivative by
// central differences).
std::pair<double, double> check_constraints(const DensityField& rho,
                                            const std::function<FieldPtr(double)>& path,
                                            double t_end, int grid = 32,
                                            const QuadratureRule& rule = ball_rule());
std::pair<double, double> check_constraints(const SwimmerConfig& config,
                                            const std::function<VecX(double)>& s_path,
                                            double t_end, int grid = 32,
                                            const QuadratureRule& rule = ball_rule());

// A shape path made self-propelled: the drift r(t) = (1/m) int rho Theta_t
// is removed and the residual spin is compensated by the frame R(t) solving
// R_dot = R G^ with G = I(Theta~)^{-1} int rho dTheta~/dt x Theta~.  The
// corrected displacement field is R(t)(Theta_t - r(t)) - id inside the body
// (blended back to the input outside).
class ProjectedPath {
 public:
  ProjectedPath(const DensityField& rho, std::function<FieldPtr(double)> path, double t_end,
                int grid = 64, const QuadratureRule& rule = ball_rule());

  FieldPtr field(double t) const;   // corrected displacement field
  Vec3 drift(double t) const;      // removed translation r(t)
  Mat3 frame(double t) const;      // compensating rotation R(t)
  double t_end() const { return t_end_; }

 private:
  std::function<FieldPtr(double)> path_;
  double t_end_;
  QuadratureRule rule_;
  DensityField rho_;
  double mass_;
  std::vector<double> times_;
  std::vector<Mat3> frames_;  // R at the grid times; geodesic interpolation between
  Vec3 drift_at(double t) const;
  Vec3 spin_rate(double t) const;  // G(t)
};

ProjectedPath project_self_propelled(const DensityField& rho, std::function<FieldPtr(double)> path,
                                     double t_end, int grid = 64,
                                     const QuadratureRule& rule = ball_rule());

}  // namespace swim
