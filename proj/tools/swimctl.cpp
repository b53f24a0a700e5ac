// swimctl: command-line front end of the shape-changing swimmer toolkit.
//
//   swimctl addedmass --scenario body.cfg --out results/
//   swimctl simulate  --scenario body.cfg --step 1e-3
//   swimctl rank      --scenario body.cfg
//   swimctl plan      --scenario body.cfg --out results/
//
// Exit codes: 0 success, 2 malformed scenario, 3 solver failure, 4 not
// controllable, 5 tracking tolerance missed (schedule still written); the
// argument parser reports its own usage errors with codes >= 100.

#include <string>

#include "CLI11.hpp"
#include "swim/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Potential-flow swimmer toolkit: added masses, simulation, "
               "controllability certificates, and tracking plans"};
  app.require_subcommand(1);

  swim::CommandOptions options;
  int exit_code = 0;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", options.scenario_path, "Scenario configuration file")
        ->required();
    cmd->add_option("--out", options.out_dir, "Output directory (created if missing)");
    cmd->add_option("--refinement", options.refinement_override,
                    "Override the scenario's mesh refinement");
    cmd->add_option("--step", options.step_override, "Override the scenario's integrator step");
    cmd->add_option("--seed", options.seed_override, "Override the scenario's seed")
        ->each([&](const std::string&) { options.seed_overridden = true; });
    cmd->add_flag("--verbose", options.verbose, "Progress details on stderr");
  };

  CLI::App* addedmass = app.add_subcommand(
      "addedmass", "Added-mass matrix of the rest shape, with the closed-form comparison");
  add_common(addedmass);
  addedmass->callback([&] { exit_code = swim::cmd_addedmass(options); });

  CLI::App* simulate =
      app.add_subcommand("simulate", "Integrate the scenario's controls from the identity pose");
  add_common(simulate);
  simulate->callback([&] { exit_code = swim::cmd_simulate(options); });

  CLI::App* rank =
      app.add_subcommand("rank", "Controllability certificate: bracket span and condition factors");
  add_common(rank);
  rank->callback([&] { exit_code = swim::cmd_rank(options); });

  CLI::App* plan =
      app.add_subcommand("plan", "Plan controls tracking the scenario's target waypoints");
  add_common(plan);
  plan->callback([&] { exit_code = swim::cmd_plan(options); });

  CLI11_PARSE(app, argc, argv);
  return exit_code;
}
