#include "swim/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "swim/brackets.hpp"
#include "swim/dynamics.hpp"
#include "swim/ellipsoid.hpp"
#include "swim/errors.hpp"
#include "swim/fields.hpp"
#include "swim/mass.hpp"
#include "swim/mesh.hpp"
#include "swim/planner.hpp"
#include "swim/report.hpp"
#include "swim/scenario.hpp"

namespace swim {

namespace {

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NotControllable& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotControllable;
  } catch (const ToleranceNotMet& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTolerance;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
}

Scenario load_with_overrides(const CommandOptions& options) {
  Scenario sc = load_scenario(options.scenario_path);
  if (options.refinement_override >= 0) sc.refinement = options.refinement_override;
  if (options.step_override > 0.0) sc.step = options.step_override;
  if (options.seed_overridden) sc.seed = options.seed_override;
  return sc;
}

std::string output_path(const CommandOptions& options, const std::string& name) {
  std::filesystem::create_directories(options.out_dir);
  return (std::filesystem::path(options.out_dir) / name).string();
}

void emit(const CommandOptions& options, const std::string& name, const std::string& content) {
  const std::string path = output_path(options, name);
  write_text_file(path, content);
  std::cout << "wrote " << path << "\n";
}

// View of a schedule restricted to [a, b], shifted to start at zero.  The
// windows are cut at the base breakpoints, so each window is jump-free.
class WindowSchedule final : public ControlSchedule {
 public:
  WindowSchedule(const ControlSchedule& base, double a, double b) : base_(base), a_(a), b_(b) {}
  int n() const override { return base_.n(); }
  double duration() const override { return b_ - a_; }
  VecX value(double t) const override { return base_.value(a_ + t); }
  std::vector<double> breakpoints() const override { return {0.0, b_ - a_}; }

 private:
  const ControlSchedule& base_;
  double a_, b_;
};

// Integrates one control piece at a time so a mid-run failure can report how
// far the trajectory got.  The per-piece arithmetic is identical to a single
// integrate() call, which also splits its steps at the breakpoints.
Trajectory integrate_piecewise(const MassModel& model, const ControlSchedule& controls,
                               const BodyState& initial, double step) {
  std::vector<double> cuts = controls.breakpoints();
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  if (cuts.size() < 2) throw ConfigError("control schedule has no extent");

  Trajectory full;
  full.step = step;
  BodyState state = initial;
  double reached = cuts.front();
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (cuts[k + 1] - cuts[k] < 1e-15) continue;
    const WindowSchedule window(controls, cuts[k], cuts[k + 1]);
    Trajectory part;
    try {
      part = integrate(model, window, state, step);
    } catch (const SwimError& e) {
      throw SwimError(std::string(e.what()) + " (last valid time t = " + format_double(reached) +
                      ")");
    }
    for (std::size_t i = full.samples.empty() ? 0 : 1; i < part.samples.size(); ++i) {
      TrajectorySample sample = part.samples[i];
      sample.t += cuts[k];
      full.samples.push_back(std::move(sample));
    }
    full.max_impulse_residual = std::max(full.max_impulse_residual, part.max_impulse_residual);
    full.max_orthogonality_drift =
        std::max(full.max_orthogonality_drift, part.max_orthogonality_drift);
    state = part.back().state;
    reached = cuts[k + 1];
  }
  return full;
}

JsonValue scenario_header(const char* command, const Scenario& sc) {
  JsonValue out = JsonValue::object();
  out.set("command", JsonValue::text(command));
  out.set("schema", JsonValue::integer(1));
  out.set("seed", JsonValue::integer(static_cast<long long>(sc.seed)));
  return out;
}

}  // namespace

int cmd_addedmass(const CommandOptions& options) {
  return guarded([&] {
    const Scenario sc = load_with_overrides(options);

    // The rest surface needs only the base deformation, not the movements.
    const SwimmerConfig rest{sc.density_kind == Scenario::DensityKind::Constant
                                 ? DensityField::constant(sc.density_value)
                                 : fit_inertia_targets(sc.axes, sc.inertia_targets,
                                                       sc.density_offset),
                             make_ellipsoid_field(sc.axes),
                             {}};
    const SurfaceMesh mesh = surface_mesh(rest, VecX(), sc.refinement);
    if (options.verbose)
      std::cerr << "panels: " << mesh.panel_count() << ", closure residual "
                << format_double(mesh.closure_residual()) << "\n";

    double asymmetry = 0.0;
    const Mat6 bem = added_mass_matrix(mesh, &asymmetry);
    const Mat6 oracle = ellipsoid_added_mass(sc.axes[0], sc.axes[1], sc.axes[2]);

    const double peak = oracle.cwiseAbs().maxCoeff();
    const double error_vs_peak = (bem - oracle).cwiseAbs().maxCoeff() / peak;
    std::vector<JsonValue> diag_rel;
    for (int i = 0; i < 6; ++i) {
      const double denom = std::abs(oracle(i, i));
      diag_rel.push_back(JsonValue::number(denom > 1e-14 * peak
                                               ? std::abs(bem(i, i) - oracle(i, i)) / denom
                                               : std::abs(bem(i, i) - oracle(i, i)) / peak));
    }

    const Eigen::SelfAdjointEigenSolver<Mat6> eig(bem);
    if (eig.info() != Eigen::Success) throw SingularSystem("added-mass eigensolve failed");

    JsonValue report = scenario_header("addedmass", sc);
    report.set("axes", JsonValue::vector(sc.axes));
    report.set("refinement", JsonValue::integer(sc.refinement));
    report.set("panels", JsonValue::integer(mesh.panel_count()));
    JsonValue mesh_info = JsonValue::object();
    mesh_info.set("total_area", JsonValue::number(mesh.total_area()));
    mesh_info.set("enclosed_volume", JsonValue::number(mesh.enclosed_volume()));
    mesh_info.set("closure_residual", JsonValue::number(mesh.closure_residual()));
    mesh_info.set("max_aspect", JsonValue::number(mesh.max_aspect()));
    report.set("mesh", std::move(mesh_info));
    report.set("added_mass_bem", JsonValue::matrix(bem));
    report.set("added_mass_oracle", JsonValue::matrix(oracle));
    report.set("relative_error_vs_peak", JsonValue::number(error_vs_peak));
    report.set("diagonal_relative_errors", JsonValue::array(std::move(diag_rel)));
    report.set("symmetry_defect", JsonValue::number(asymmetry));
    report.set("eigenvalues", JsonValue::vector(eig.eigenvalues()));
    report.set("min_eigenvalue", JsonValue::number(eig.eigenvalues().minCoeff()));

    std::ostringstream off;
    write_off(mesh, off);
    emit(options, "mesh.off", off.str());
    emit(options, "addedmass.json", report.dump());
    return kExitOk;
  });
}

int cmd_simulate(const CommandOptions& options) {
  return guarded([&] {
    const Scenario sc = load_with_overrides(options);
    const SchedulePtr controls = build_controls(sc);
    const std::shared_ptr<MassModel> model = build_mass_model(sc);

    BodyState initial;
    initial.s = VecX::Zero(model->n());
    const Trajectory path = integrate_piecewise(*model, *controls, initial, sc.step);
    if (options.verbose) std::cerr << "samples: " << path.samples.size() << "\n";

    const BodyState& last = path.back().state;
    const double net_rotation = (last.R - Mat3::Identity()).norm();
    const double net_displacement = last.r.norm();
    const double net_shape = last.s.norm();

    JsonValue report = scenario_header("simulate", sc);
    report.set("mu_source", JsonValue::text(sc.mu_source == Scenario::MuSource::Oracle
                                                ? "oracle"
                                                : "bem"));
    report.set("step", JsonValue::number(sc.step));
    report.set("duration", JsonValue::number(controls->duration()));
    report.set("samples", JsonValue::integer(static_cast<long long>(path.samples.size())));
    report.set("max_impulse_residual", JsonValue::number(path.max_impulse_residual));
    report.set("max_orthogonality_drift", JsonValue::number(path.max_orthogonality_drift));
    report.set("net_rotation", JsonValue::number(net_rotation));
    report.set("net_displacement", JsonValue::number(net_displacement));
    report.set("net_shape", JsonValue::number(net_shape));
    report.set("negligible_net_motion",
               JsonValue::boolean(net_rotation + net_displacement < 1e-8));

    // With target waypoints the summary also grades the controls as a
    // tracking schedule, through the same check the planner reports, so a
    // schedule written by plan and read back here reproduces its numbers.
    if (!sc.waypoints.empty()) {
      const TrackingProblem problem = build_target(sc);
      const TrackReport tracked = verify_tracking(*model, *controls, initial, problem);
      report.set("sup_error", JsonValue::number(tracked.sup_error));
      report.set("endpoint_error", JsonValue::number(tracked.endpoint_error));
    }

    emit(options, "trajectory.csv", trajectory_csv(path));
    emit(options, "simulate.json", report.dump());
    return kExitOk;
  });
}

int cmd_rank(const CommandOptions& options) {
  return guarded([&] {
    const Scenario sc = load_with_overrides(options);
    const std::shared_ptr<MassModel> model = build_mass_model(sc);
    const int n = model->n();
    const VecX rest = VecX::Zero(n);

    const MassMatrices mm = model->at(rest);
    const Vec3 inertia = mm.inertia.diagonal();
    const Vec6 mu = mm.Mf.diagonal();
    const ConditionReport condition = controllability_condition(inertia, mm.mass, mu);

    const RankReport rank = lie_rank(*model, rest, sc.depth);
    const bool verdict = rank.rank == 6 + n;
    if (options.verbose)
      std::cerr << "rank " << rank.rank << " of " << 6 + n << " from " << rank.columns
                << " columns\n";

    JsonValue report = scenario_header("rank", sc);
    report.set("n", JsonValue::integer(n));
    report.set("depth", JsonValue::integer(rank.depth));
    report.set("svd_tol", JsonValue::number(rank.svd_tol));
    report.set("factors", JsonValue::vector(condition.factors));
    report.set("mu4_minus_mu6", JsonValue::number(condition.mu4_minus_mu6));
    report.set("mu5_minus_mu4", JsonValue::number(condition.mu5_minus_mu4));
    report.set("condition_satisfied", JsonValue::boolean(condition.controllable));
    report.set("columns", JsonValue::integer(rank.columns));
    report.set("singular_values", JsonValue::vector(rank.singular_values));
    report.set("rank", JsonValue::integer(rank.rank));
    report.set("needed", JsonValue::integer(6 + n));
    report.set("verdict", JsonValue::boolean(verdict));

    emit(options, "rank.json", report.dump());
    return kExitOk;
  });
}

int cmd_plan(const CommandOptions& options) {
  return guarded([&] {
    const Scenario sc = load_with_overrides(options);
    const std::shared_ptr<MassModel> model = build_mass_model(sc);
    const TrackingProblem problem = build_target(sc);

    BodyState initial;
    initial.s = VecX::Zero(model->n());
    const PlanResult plan = plan_tracking(*model, initial, problem);
    if (options.verbose)
      std::cerr << "legs: " << plan.legs << ", sup error " << format_double(plan.sup_error)
                << "\n";

    JsonValue report = scenario_header("plan", sc);
    report.set("n", JsonValue::integer(model->n()));
    report.set("duration", JsonValue::number(problem.duration));
    report.set("tolerance", JsonValue::number(problem.tolerance));
    report.set("legs", JsonValue::integer(plan.legs));
    report.set("segments",
               JsonValue::integer(static_cast<long long>(plan.schedule->segments().size())));
    report.set("sup_error", JsonValue::number(plan.sup_error));
    report.set("endpoint_error", JsonValue::number(plan.endpoint_error));
    report.set("tolerance_met", JsonValue::boolean(plan.tolerance_met));

    emit(options, "schedule.csv", schedule_csv(*plan.schedule));
    emit(options, "plan.json", report.dump());
    if (!plan.tolerance_met)
      throw ToleranceNotMet("planned sup error " + format_double(plan.sup_error) +
                            " exceeds tolerance " + format_double(problem.tolerance));
    return kExitOk;
  });
}

}  // namespace swim
