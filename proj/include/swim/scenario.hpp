#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "swim/config.hpp"
#include "swim/mass.hpp"
#include "swim/planner.hpp"
#include "swim/schedule.hpp"
#include "swim/types.hpp"

namespace swim {

// Parsed scenario file (key-value text, versioned by `schema = 1`).  The
// format is documented in README.md; load_scenario throws ConfigError naming
// the offending section.key on any violation.
struct Scenario {
  std::uint64_t seed = 0;

  // [shape] — ellipsoid semi-axes of the rest surface (the unit ball maps
  // through x -> diag(axes) x).
  Vec3 axes = Vec3::Ones();

  // [density]
  enum class DensityKind { Constant, InertiaTargets };
  DensityKind density_kind = DensityKind::Constant;
  double density_value = 1.0;      // Constant
  Vec3 inertia_targets = Vec3::Ones();  // InertiaTargets
  double density_offset = 1.0;     // center value the fit starts from

  // [movements] — rigid-shell generator count (1..6).
  int movement_count = 5;

  // [numerics]
  int refinement = 3;        // surface mesh refinement for panel solves
  int quadrature = 17;       // angular strength of the ball rule
  double step = 1e-3;        // integrator step
  double tolerance = 1e-2;   // planner tracking tolerance
  int depth = 2;             // bracket depth of the rank certificate
  enum class MuSource { Oracle, Bem };
  MuSource mu_source = MuSource::Oracle;

  // [controls]
  enum class ControlKind { None, Zero, Piecewise, Sine, File };
  ControlKind control_kind = ControlKind::None;
  double control_duration = 1.0;                      // Zero, Sine
  std::vector<std::pair<double, VecX>> segments;      // Piecewise: (length, rates)
  std::vector<SineSchedule::Channel> sine_channels;   // Sine
  std::string schedule_path;                          // File
  double mollify_width = 0.0;                         // 0 = no smoothing

  // [target] — rigid waypoints (t, unit quaternion w x y z, position).
  struct Waypoint {
    double t = 0.0;
    Eigen::Vector4d quat = Eigen::Vector4d(1, 0, 0, 0);
    Vec3 pos = Vec3::Zero();
  };
  std::vector<Waypoint> waypoints;
};

// Parses and validates a scenario file.
Scenario load_scenario(const std::string& path);

// Reads a piecewise-constant schedule from CSV (t_start, t_end, rates); the
// inverse of the planner's schedule writer.
std::shared_ptr<PiecewiseConstantSchedule> read_schedule_csv(const std::string& path, int n);

// The swimmer the scenario describes: ellipsoid base deformation, density
// preset, rectified rigid-shell movements.  This is the expensive, fully
// validated construction used by panel-method commands.
SwimmerConfig build_config(const Scenario& scenario);

// Mass model for dynamics and control: the rigid-transport model seeded with
// closed-form ellipsoid added masses (Oracle) or the per-shape panel method
// on the full config (Bem).
std::shared_ptr<MassModel> build_mass_model(const Scenario& scenario);
std::shared_ptr<MassModel> build_mass_model(const Scenario& scenario, const SwimmerConfig& config);

// Control schedule from the [controls] section; throws when none is present.
SchedulePtr build_controls(const Scenario& scenario);

// Tracking problem from the [target] waypoints: slerp between quaternions,
// linear interpolation of positions, horizon = last waypoint time.
TrackingProblem build_target(const Scenario& scenario);

}  // namespace swim
