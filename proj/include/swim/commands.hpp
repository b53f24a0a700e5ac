#pragma once

#include <cstdint>
#include <string>

namespace swim {

// Options shared by every subcommand; the overrides replace the scenario's
// [numerics] values when set.
struct CommandOptions {
  std::string scenario_path;
  std::string out_dir = ".";
  int refinement_override = -1;     // < 0: keep the scenario value
  double step_override = 0.0;       // <= 0: keep the scenario value
  bool seed_overridden = false;
  std::uint64_t seed_override = 0;
  bool verbose = false;
};

// Exit codes: 0 success, 2 malformed scenario, 3 solver failure,
// 4 not controllable, 5 tracking tolerance missed (schedule still written).
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitNotControllable = 4;
inline constexpr int kExitTolerance = 5;

// Added-mass matrix of the rest shape by the panel method, compared with the
// closed-form ellipsoid values: writes addedmass.json and mesh.off.
int cmd_addedmass(const CommandOptions& options);

// Integrates the scenario's controls from the identity pose: writes
// trajectory.csv and simulate.json.
int cmd_simulate(const CommandOptions& options);

// Controllability certificate at the rest shape: writes rank.json.
int cmd_rank(const CommandOptions& options);

// Plans controls tracking the scenario's waypoints: writes schedule.csv and
// plan.json; the schedule is written even when the tolerance is missed.
int cmd_plan(const CommandOptions& options);

}  // namespace swim
