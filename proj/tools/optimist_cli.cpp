// optimist: simulate and analyze optimistic learning dynamics in zero-sum
// matrix games.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "optimist/commands.hpp"

using namespace optimist;

namespace {

void add_output_flags(CLI::App* cmd, int& digits) {
  cmd->add_option("--digits", digits, "Significant digits in printed values (0 = full)")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimistic FTRL / OMD self-play simulator"};
  app.require_subcommand(1);

  RunConfig run;
  std::string eta;
  std::string adagrad;
  auto* run_cmd = app.add_subcommand("run", "Simulate a run and write its trajectory CSV");
  run_cmd->add_option("--algo", run.algo, "oftrl | oomd")->capture_default_str();
  run_cmd->add_option("--reg", run.reg, "entropy | euclid | logbar | tsallis:<beta>")
      ->capture_default_str();
  auto* eta_opt = run_cmd->add_option("--eta", eta, "Constant stepsize");
  auto* ada_opt = run_cmd->add_option("--adagrad-eps", adagrad, "AdaGrad epsilon");
  eta_opt->excludes(ada_opt);
  run_cmd->add_option("--game", run.game, "hard:<delta> | file:<path> | lift:<delta>:<n>")
      ->required();
  run_cmd->add_option("--iters", run.iters, "Iterations")->required();
  run_cmd->add_option("--precision", run.precision, "Decimal digits of working precision")
      ->capture_default_str();
  run_cmd->add_option("--out", run.out, "Trajectory CSV path")->required();
  run_cmd->add_option("--thin", run.thin, "Store every k-th iterate (plus stage crossings)")
      ->capture_default_str();
  run_cmd->add_flag("--svg", run.svg, "Also write a two-panel SVG next to the CSV");
  run_cmd->add_flag("--log-gap", run.log_gap, "Log-scale gap axis in the SVG");
  run_cmd->add_flag("--full-precision", run.full_precision, "Write CSV values at full precision");
  add_output_flags(run_cmd, run.digits);

  StagesConfig stages;
  auto* stages_cmd = app.add_subcommand("stages", "Stage report for a trajectory CSV");
  stages_cmd->add_option("csv", stages.csv, "Trajectory CSV")->required();
  stages_cmd->add_option("--delta", stages.delta, "Hard-instance delta (authoritative)")
      ->required();
  stages_cmd->add_option("--reg", stages.reg, "Regularizer of the run")->capture_default_str();
  stages_cmd->add_option("--eta", stages.eta, "Constant stepsize of the run")->required();
  stages_cmd->add_option("--precision", stages.precision, "Decimal digits")
      ->capture_default_str();
  add_output_flags(stages_cmd, stages.digits);

  VerifyConfig verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check the regularizer assumptions");
  verify_cmd->add_option("--reg", verify.reg, "Regularizer")->required();
  verify_cmd->add_option("--delta", verify.delta, "delta, or auto for delta'/2")
      ->capture_default_str();
  verify_cmd->add_option("--precision", verify.precision, "Decimal digits")
      ->capture_default_str();
  add_output_flags(verify_cmd, verify.digits);

  LiftConfig lift;
  auto* lift_cmd = app.add_subcommand("lift-check", "Compare 2-d and duplicated runs");
  lift_cmd->add_option("--reg", lift.reg, "Regularizer")->capture_default_str();
  lift_cmd->add_option("--delta", lift.delta, "Hard-instance delta")->capture_default_str();
  lift_cmd->add_option("--n", lift.n, "Duplication factor")->capture_default_str();
  lift_cmd->add_option("--eta", lift.eta, "Constant stepsize")->capture_default_str();
  lift_cmd->add_option("--iters", lift.iters, "Iterations")->capture_default_str();
  lift_cmd->add_option("--precision", lift.precision, "Decimal digits")->capture_default_str();
  add_output_flags(lift_cmd, lift.digits);

  SweepConfig sweep;
  std::string sweep_eta;
  auto* sweep_cmd = app.add_subcommand("sweep", "Flat-region length across deltas");
  sweep_cmd->add_option("--algo", sweep.base.algo, "oftrl | oomd")->capture_default_str();
  sweep_cmd->add_option("--reg", sweep.base.reg, "Regularizer")->capture_default_str();
  sweep_cmd->add_option("--eta", sweep_eta, "Constant stepsize")->required();
  sweep_cmd->add_option("--deltas", sweep.deltas, "Comma-separated deltas")->delimiter(',');
  sweep_cmd->add_option("--iters", sweep.base.iters, "Iterations per run")->required();
  sweep_cmd->add_option("--precision", sweep.base.precision, "Decimal digits")
      ->capture_default_str();
  sweep_cmd->add_option("--out", sweep.out, "CSV path (default: stdout)");
  sweep_cmd->add_flag("--full-precision", sweep.base.full_precision, "Full-precision values");
  add_output_flags(sweep_cmd, sweep.base.digits);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  if (*run_cmd) {
    if (*eta_opt) run.eta = eta;
    if (*ada_opt) run.adagrad_eps = adagrad;
    return cmd_run(run, std::cout, std::cerr);
  }
  if (*stages_cmd) return cmd_stages(stages, std::cout, std::cerr);
  if (*verify_cmd) return cmd_verify(verify, std::cout, std::cerr);
  if (*lift_cmd) return cmd_lift_check(lift, std::cout, std::cerr);
  sweep.base.eta = sweep_eta;
  return cmd_sweep(sweep, std::cout, std::cerr);
}
