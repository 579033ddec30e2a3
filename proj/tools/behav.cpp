// Command-line front end: feasibility checks, certificate replay, reduction,
// slack rollouts, quiver data and cost evaluation for .bsys models.

#include "behav/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

int main(int argc, char** argv) {
  using namespace behav::cli;
  CLI::App app{"Behavioral inequality toolkit"};
  app.require_subcommand(1);

  std::string format = "text";
  app.add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"text", "csv"}));

  // check
  CheckOptions check;
  int window_max = 0;
  std::vector<int> periods;
  unsigned jobs = 1;
  auto* check_cmd = app.add_subcommand("check", "Decide feasibility of a model");
  check_cmd->add_option("model", check.model, "Model file (.bsys)")->required();
  check_cmd->add_option("--window-max", window_max,
                        "Largest certificate window (schedule 1,2,4,...)");
  check_cmd->add_option("--periods", periods, "Witness periods to try")->delimiter(',');
  check_cmd->add_option("--jobs", jobs, "Parallel searches");
  check_cmd->add_flag("!--no-artifacts", check.write_artifacts,
                      "Do not write certificate/witness files");

  // verify
  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Replay a certificate or witness file");
  verify_cmd->add_option("model", verify.model, "Model file (.bsys)")->required();
  verify_cmd->add_option("--certificate", verify.certificate, "Certificate CSV");
  verify_cmd->add_option("--witness", verify.witness, "Witness CSV");

  // reduce
  ReduceOptions reduce_opt;
  std::string model_path;
  std::string target = "dual";
  auto* reduce_cmd = app.add_subcommand("reduce", "Unimodular row reduction");
  reduce_cmd->add_option("model", model_path, "Model file (.bsys)");
  reduce_cmd->add_option("--matrix", reduce_opt.matrix,
                         "Matrix literal, entries separated by '|', rows by ';'");
  reduce_cmd->add_option("--target", target, "Which matrix of the model to reduce")
      ->check(CLI::IsMember({"dual", "ineq", "eq", "mixed", "slack"}));

  // rollout
  RolloutOptions roll;
  auto* rollout_cmd = app.add_subcommand("rollout", "Solve the slack recurrences forward");
  rollout_cmd->add_option("model", roll.model, "Model file (.bsys)")->required();
  rollout_cmd->add_option("--initial", roll.initial, "Initial values, rows variable,k,value");
  rollout_cmd->add_option("--slack", roll.slack, "Slack trajectory CSV (default zero)");
  rollout_cmd->add_option("--horizon", roll.horizon, "Number of steps after start");
  rollout_cmd->add_option("--start", roll.start, "Start time");
  rollout_cmd->add_flag("--footprint", roll.footprint_only,
                        "Print the required initial values and exit");
  rollout_cmd->add_flag("--recurrences", roll.print_recurrences,
                        "Print the recurrence relations first");

  // quiver
  QuiverOptions quiver;
  auto* quiver_cmd = app.add_subcommand("quiver", "Displacement field of a 2-state model");
  quiver_cmd->add_option("model", quiver.model, "Model file (.bsys)")->required();
  quiver_cmd->add_option("--x1", quiver.x1, "Grid axis min:max:count");
  quiver_cmd->add_option("--x2", quiver.x2, "Grid axis min:max:count");
  quiver_cmd->add_option("--steps", quiver.steps, "Streamline length");

  // cost
  CostOptions cost;
  auto* cost_cmd = app.add_subcommand("cost", "Evaluate J = sum_k c(k) u(k)");
  cost_cmd->add_option("model", cost.model, "Model file (.bsys)")->required();
  cost_cmd->add_option("--trajectory", cost.trajectory, "Trajectory CSV")->required();
  cost_cmd->add_option("--costs", cost.costs, "Per-step cost CSV")->required();
  cost_cmd->add_option("--variable", cost.variable, "Variable to price");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  const Format fmt = format == "csv" ? Format::Csv : Format::Text;
  try {
    if (*check_cmd) {
      check.format = fmt;
      if (window_max > 0) check.budget.windows = behav::window_schedule(window_max);
      if (!periods.empty()) check.budget.periods = periods;
      check.budget.jobs = jobs;
      return cmd_check(check, std::cout, std::cerr);
    }
    if (*verify_cmd) return cmd_verify(verify, std::cout, std::cerr);
    if (*reduce_cmd) {
      if (!model_path.empty()) reduce_opt.model = model_path;
      static const std::map<std::string, ReduceTarget> targets{
          {"dual", ReduceTarget::Dual},     {"ineq", ReduceTarget::Inequality},
          {"eq", ReduceTarget::Equality},   {"mixed", ReduceTarget::Mixed},
          {"slack", ReduceTarget::Slack}};
      reduce_opt.target = targets.at(target);
      return cmd_reduce(reduce_opt, std::cout, std::cerr);
    }
    if (*rollout_cmd) return cmd_rollout(roll, std::cout, std::cerr);
    if (*quiver_cmd) return cmd_quiver(quiver, std::cout, std::cerr);
    if (*cost_cmd) return cmd_cost(cost, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
