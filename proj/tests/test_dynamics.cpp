#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "swim/config.hpp"
#include "swim/dynamics.hpp"
#include "swim/errors.hpp"
#include "swim/fields.hpp"
#include "swim/mass.hpp"
#include "swim/rectify.hpp"
#include "swim/schedule.hpp"
#include "swim/types.hpp"

using namespace swim;

namespace {

constexpr double kPi = 3.14159265358979323846;
const Vec3 kAxes(1.0, 0.8, 0.6);

ShellTransportModel canonical_model(int n = 5) {
  Vec6 mu;
  mu << 0.1, 0.2, 0.3, 0.4, 0.5, 0.6;
  return ShellTransportModel::from_diagonal(Vec3(1, 2, 4), 1.0, mu, n);
}

BodyState rest_state(int n) {
  BodyState state;
  state.s = VecX::Zero(n);
  return state;
}

double state_distance(const BodyState& a, const BodyState& b) {
  return rot_log(a.R.transpose() * b.R).norm() + (a.r - b.r).norm() + (a.s - b.s).norm();
}

// Deterministic "random" five-channel sine schedule used by the invariant and
// convergence checks.
SchedulePtr random_sine_schedule(double duration, double amplitude_scale = 1.0) {
  std::mt19937 gen(101);
  std::uniform_real_distribution<double> amp(0.2, 0.6), freq(1.0, 3.0), phase(0.0, 2 * kPi);
  std::vector<SineSchedule::Channel> channels(5);
  for (auto& ch : channels) {
    ch.amplitude = amplitude_scale * amp(gen);
    ch.frequency = std::round(freq(gen));  // whole periods close the loop
    ch.phase = phase(gen);
    ch.offset = 0.0;
  }
  return std::make_shared<SineSchedule>(channels, duration);
}

const SwimmerConfig& shell_config() {
  static const SwimmerConfig config = make_rigid_shell_config(
      DensityField::constant(1.0), make_ellipsoid_field(kAxes), 5);
  return config;
}

}  // namespace

TEST_CASE("zero-impulse velocity: values, rest, linearity") {
  const ShellTransportModel model = canonical_model();
  const VecX s0 = VecX::Zero(5);

  // Rotating the shell about e1 pushes the body back: Omega = -mu1/(I1+mu1).
  VecX e1 = VecX::Zero(5);
  e1[0] = 1.0;
  const RigidVelocity w = rigid_velocity(model, s0, e1);
  CHECK(w.Omega.x() == doctest::Approx(-0.1 / 1.1).epsilon(1e-12));
  CHECK(std::abs(w.Omega.y()) < 1e-14);
  CHECK(std::abs(w.Omega.z()) < 1e-14);
  CHECK(w.v.norm() < 1e-14);

  // Unit shell translation along e1: v = -mu4/(m+mu4).
  VecX e4 = VecX::Zero(5);
  e4[3] = 1.0;
  const RigidVelocity t = rigid_velocity(model, s0, e4);
  CHECK(t.v.x() == doctest::Approx(-0.4 / 1.4).epsilon(1e-12));
  CHECK(t.Omega.norm() < 1e-14);

  // No deformation, no motion.
  const RigidVelocity still = rigid_velocity(model, s0, VecX::Zero(5));
  CHECK(still.Omega.norm() == 0.0);
  CHECK(still.v.norm() == 0.0);

  // The response is linear in the rates, at rest and away from it.
  std::mt19937 gen(31);
  std::normal_distribution<double> nrm;
  for (const double off : {0.0, 0.2}) {
    VecX s(5), a(5), b(5);
    for (int i = 0; i < 5; ++i) {
      s[i] = off * nrm(gen);
      a[i] = nrm(gen);
      b[i] = nrm(gen);
    }
    const RigidVelocity va = rigid_velocity(model, s, a);
    const RigidVelocity vb = rigid_velocity(model, s, b);
    const RigidVelocity vab = rigid_velocity(model, s, 2.0 * a - 0.5 * b);
    CHECK((vab.Omega - (2.0 * va.Omega - 0.5 * vb.Omega)).norm() < 1e-12);
    CHECK((vab.v - (2.0 * va.v - 0.5 * vb.v)).norm() < 1e-12);
  }
}

TEST_CASE("a degenerate mass matrix is reported, not silently inverted") {
  const ShellTransportModel broken =
      ShellTransportModel::from_diagonal(Vec3::Zero(), 0.0, Vec6::Zero(), 1);
  VecX rate(1);
  rate << 1.0;
  CHECK_THROWS_AS(rigid_velocity(broken, VecX::Zero(1), rate), MassMatrixSingular);
}

TEST_CASE("zero controls leave the state untouched") {
  const ShellTransportModel model = canonical_model();
  auto zeros = std::make_shared<PiecewiseConstantSchedule>(5);
  zeros->append(1.0, VecX::Zero(5));
  const Trajectory path = integrate(model, *zeros, rest_state(5), 1e-3);
  CHECK(path.samples.size() == 1001);
  for (const auto& sample : path.samples) {
    CHECK((sample.state.R - Mat3::Identity()).norm() < 1e-15);
    CHECK(sample.state.r.norm() < 1e-15);
    CHECK(sample.state.s.norm() < 1e-15);
  }
}

TEST_CASE("impulse and orthogonality stay at machine precision over T=2") {
  const ShellTransportModel model = canonical_model();
  const SchedulePtr controls = random_sine_schedule(2.0);
  const Trajectory path = integrate(model, *controls, rest_state(5), 1e-3);
  CHECK(path.max_impulse_residual < 1e-10);
  CHECK(path.max_orthogonality_drift < 1e-10);
  // The motion itself is not trivial.
  CHECK(state_distance(path.front().state, path.back().state) > 1e-6);
}

TEST_CASE("step halving shows fourth-order convergence") {
  const ShellTransportModel model = canonical_model();
  const SchedulePtr controls = random_sine_schedule(2.0, 2.0);
  // Probe inside the asymptotic window: below h = 4e-3 the endpoint error of
  // this problem reaches the accumulated-roundoff floor near 6e-12 and the
  // ratio degrades, so halve from 1.6e-2 where the error is about 5e-10.
  const BodyState exact = integrate(model, *controls, rest_state(5), 5e-4).back().state;
  const double e1 =
      state_distance(integrate(model, *controls, rest_state(5), 1.6e-2).back().state, exact);
  const double e2 =
      state_distance(integrate(model, *controls, rest_state(5), 8e-3).back().state, exact);
  CHECK(e2 > 0.0);
  const double ratio = e1 / e2;
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("breakpoints split the steps exactly") {
  const ShellTransportModel model = canonical_model();
  auto controls = std::make_shared<PiecewiseConstantSchedule>(5);
  VecX a = VecX::Zero(5), b = VecX::Zero(5);
  a[0] = 0.3;
  b[2] = -0.2;
  controls->append(0.3, a);
  controls->append(0.7, b);
  const Trajectory path = integrate(model, *controls, rest_state(5), 1e-3);
  REQUIRE(path.samples.size() == 1001);
  CHECK(path.samples[300].t == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(path.samples.back().t == doctest::Approx(1.0).epsilon(1e-14));

  // Recorded velocities match the zero-impulse law at both ends.
  const RigidVelocity v0 = rigid_velocity(model, path.front().state.s, a);
  CHECK((path.front().velocity.Omega - v0.Omega).norm() < 1e-13);
  CHECK((path.front().velocity.v - v0.v).norm() < 1e-13);
  const RigidVelocity vT = rigid_velocity(model, path.back().state.s, b);
  CHECK((path.back().velocity.Omega - vT.Omega).norm() < 1e-12);
  CHECK((path.back().velocity.v - vT.v).norm() < 1e-12);
}

TEST_CASE("running a schedule forward then negated brings the state back") {
  const ShellTransportModel model = canonical_model();
  std::mt19937 gen(41);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::vector<VecX> legs;
  for (int k = 0; k < 4; ++k) {
    VecX rates(5);
    for (int i = 0; i < 5; ++i) rates[i] = u(gen);
    legs.push_back(rates);
  }
  auto controls = std::make_shared<PiecewiseConstantSchedule>(5);
  for (const auto& rates : legs) controls->append(0.25, rates);
  for (auto it = legs.rbegin(); it != legs.rend(); ++it) controls->append(0.25, -*it);
  const Trajectory path = integrate(model, *controls, rest_state(5), 1e-3);
  CHECK(state_distance(path.front().state, path.back().state) < 1e-8);
}

TEST_CASE("a single movement field cannot swim: cyclic inputs close the loop") {
  Vec6 mu;
  mu << 0.1, 0.2, 0.3, 0.4, 0.5, 0.6;
  const ShellTransportModel model = ShellTransportModel::from_diagonal(Vec3(1, 2, 4), 1.0, mu, 1);

  // Smooth cycle: one full sine period.
  std::vector<SineSchedule::Channel> ch(1);
  ch[0].amplitude = 0.4;
  ch[0].frequency = 1.0;
  const SineSchedule sine(ch, 1.0);
  const Trajectory smooth = integrate(model, sine, rest_state(1), 1e-3);
  CHECK(state_distance(smooth.front().state, smooth.back().state) < 1e-8);

  // Bang-bang cycle: forward then exactly backward.
  auto sched = std::make_shared<PiecewiseConstantSchedule>(1);
  VecX rate(1);
  rate << 0.3;
  sched->append(0.5, rate);
  sched->append(0.5, -rate);
  const Trajectory pcw = integrate(model, *sched, rest_state(1), 1e-3);
  CHECK(state_distance(pcw.front().state, pcw.back().state) < 1e-8);
}

TEST_CASE("dynamics are equivariant under a change of the initial pose") {
  const ShellTransportModel model = canonical_model();
  const SchedulePtr controls = random_sine_schedule(1.0);
  const Mat3 Q = rot_exp(Vec3(0.7, -0.3, 0.4));
  const Vec3 q(1.0, 2.0, -0.5);

  const Trajectory base = integrate(model, *controls, rest_state(5), 1e-3);
  BodyState moved = rest_state(5);
  moved.R = Q;
  moved.r = q;
  const Trajectory shifted = integrate(model, *controls, moved, 1e-3);

  const BodyState& xb = base.back().state;
  const BodyState& xs = shifted.back().state;
  CHECK((xs.R - Q * xb.R).norm() < 1e-9);
  CHECK((xs.r - (Q * xb.r + q)).norm() < 1e-9);
  CHECK((xs.s - xb.s).norm() < 1e-12);
}

TEST_CASE("mollified schedules: exactness, L1 closeness, small widths") {
  // Away from the jump a mollified piecewise-constant schedule is exact.
  auto step_sched = std::make_shared<PiecewiseConstantSchedule>(1);
  VecX lo(1), hi(1);
  lo << 0.0;
  hi << 1.0;
  step_sched->append(0.5, lo);
  step_sched->append(0.5, hi);
  const SchedulePtr smooth = smooth_controls(step_sched, 0.05);
  CHECK(smooth->n() == 1);
  CHECK(smooth->duration() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(smooth->value(0.2)[0] - 0.0) < 1e-13);
  CHECK(std::abs(smooth->value(0.8)[0] - 1.0) < 1e-13);
  // Mollifying a unit jump at width w costs at most w in L1.
  const double l1 = schedule_l1_distance(*step_sched, *smooth);
  CHECK(l1 <= 0.05 + 1e-9);
  CHECK(l1 > 5e-3);

  // Smooth inputs barely move: deviation is O(width^2).
  std::vector<SineSchedule::Channel> ch(2);
  ch[0].amplitude = 0.5;
  ch[0].frequency = 1.0;
  ch[1].amplitude = 0.3;
  ch[1].frequency = 2.0;
  ch[1].phase = 0.7;
  auto sine = std::make_shared<SineSchedule>(ch, 1.0);
  const SchedulePtr tiny = smooth_controls(sine, 1e-6);
  for (const double t : {0.3, 0.55, 0.8})
    CHECK((tiny->value(t) - sine->value(t)).norm() < 1e-9);
}

TEST_CASE("narrower mollification tracks the raw trajectory strictly better") {
  const ShellTransportModel model = canonical_model();
  std::mt19937 gen(59);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  auto raw = std::make_shared<PiecewiseConstantSchedule>(5);
  for (int k = 0; k < 4; ++k) {
    VecX rates(5);
    for (int i = 0; i < 5; ++i) rates[i] = u(gen);
    raw->append(0.25, rates);
  }
  const Trajectory reference = integrate(model, *raw, rest_state(5), 1e-3);

  const auto deviation = [&](double width) {
    const Trajectory path =
        integrate(model, *smooth_controls(raw, width), rest_state(5), 1e-3);
    REQUIRE(path.samples.size() == reference.samples.size());
    double sup = 0.0;
    for (size_t k = 0; k < path.samples.size(); ++k)
      sup = std::max(sup,
                     state_distance(path.samples[k].state, reference.samples[k].state));
    return sup;
  };

  const double d1 = deviation(0.1);
  const double d2 = deviation(0.05);
  const double d3 = deviation(0.025);
  CHECK(d1 > d2);
  CHECK(d2 > d3);
  CHECK(d3 > 0.0);
}

TEST_CASE("rectified movements keep both self-propulsion residuals at zero") {
  const SwimmerConfig& config = shell_config();
  VecX dir(5);
  dir << 0.05, -0.04, 0.03, 0.06, -0.02;
  const auto [linear, angular] = check_constraints(
      config, [&](double t) { return VecX(t * dir); }, 1.0);
  CHECK(linear < 1e-7);
  CHECK(angular < 1e-7);
}

TEST_CASE("a deliberately violating path is flagged and then projected clean") {
  const DensityField rho = DensityField::constant(1.0);
  const Vec3 w(0.0, 0.0, 0.3), c(0.2, 0.0, 0.0);
  const double t_end = 0.5;
  // Rigidly rotating and drifting ellipsoid: plainly not self-propelled.
  const auto path = [&](double t) -> FieldPtr {
    const Mat3 lin = rot_exp(t * w) * kAxes.asDiagonal().toDenseMatrix() - Mat3::Identity();
    return make_affine_field(lin, t * c);
  };
  const auto [lin_before, ang_before] = check_constraints(rho, path, t_end);
  CHECK(lin_before > 0.05);
  CHECK(ang_before > 0.05);

  const ProjectedPath projected = project_self_propelled(rho, path, t_end);
  const auto [lin_after, ang_after] = check_constraints(
      rho, [&](double t) { return projected.field(t); }, t_end);
  CHECK(lin_after < 1e-6);
  CHECK(ang_after < 1e-6);
}

TEST_CASE("projection removes a pure drift exactly and leaves the shape") {
  const DensityField rho = DensityField::constant(1.0);
  const Vec3 c(0.15, -0.1, 0.2);
  const auto path = [&](double t) -> FieldPtr {
    return make_affine_field(Mat3::Zero(), t * c);
  };
  const ProjectedPath projected = project_self_propelled(rho, path, 1.0);
  CHECK((projected.drift(0.37) - 0.37 * c).norm() < 1e-10);
  CHECK((projected.frame(0.37) - Mat3::Identity()).norm() < 1e-9);
  std::mt19937 gen(61);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int k = 0; k < 5; ++k) {
    const Vec3 x(u(gen), u(gen), u(gen));
    CHECK(projected.field(0.37)->value(x).norm() < 1e-9);
  }
}

TEST_CASE("projection cancels a principal-axis spin with the opposite frame") {
  const DensityField rho = DensityField::constant(1.0);
  const Vec3 w(0.0, 0.0, 0.4);
  const double t_end = 0.6;
  const auto path = [&](double t) -> FieldPtr {
    const Mat3 lin = rot_exp(t * w) * kAxes.asDiagonal().toDenseMatrix() - Mat3::Identity();
    return make_affine_field(lin, Vec3::Zero());
  };
  const ProjectedPath projected = project_self_propelled(rho, path, t_end);
  CHECK((projected.frame(t_end) - rot_exp(-t_end * w)).norm() < 1e-6);
  // The corrected field is the rest ellipsoid again.
  const Mat3 rest = kAxes.asDiagonal().toDenseMatrix() - Mat3::Identity();
  std::mt19937 gen(67);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int k = 0; k < 5; ++k) {
    const Vec3 x(u(gen), u(gen), u(gen));
    CHECK((projected.field(t_end)->value(x) - rest * x).norm() < 1e-6);
  }
}

TEST_CASE("a compliant path passes through the projection unchanged") {
  const SwimmerConfig& config = shell_config();
  VecX dir(5);
  dir << 0.04, -0.03, 0.02, 0.05, -0.01;
  const auto path = [&](double t) { return total_field(config, VecX(t * dir)); };
  const ProjectedPath projected = project_self_propelled(config.density, path, 1.0);
  std::mt19937 gen(71);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (const double t : {0.25, 0.75}) {
    CHECK(projected.drift(t).norm() < 1e-7);
    for (int k = 0; k < 4; ++k) {
      const Vec3 x(u(gen), u(gen), u(gen));
      CHECK((projected.field(t)->value(x) - path(t)->value(x)).norm() < 1e-6);
    }
  }
}
