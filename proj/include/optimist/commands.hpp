#pragma once

// Command implementations behind the `optimist` executable. Each returns the
// process exit code: 0 success, 1 validation error, 2 check failed.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "optimist/dynamics.hpp"

namespace optimist {

enum ExitCode { kExitOk = 0, kExitInvalid = 1, kExitCheckFailed = 2 };

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string algo = "oftrl";              // oftrl | oomd
  std::string reg = "entropy";
  std::optional<std::string> eta;
  std::optional<std::string> adagrad_eps;
  std::string game;                        // hard:<d> | file:<path> | lift:<d>:<n>
  std::size_t iters = 1;
  int precision = 64;
  std::string out;
  std::size_t thin = 1;
  bool svg = false;
  int digits = 30;
  bool full_precision = false;
  bool log_gap = false;
};

/// A validated configuration bound to its numeric context.
struct PreparedRun {
  Context ctx;
  MatrixGame game;
  AlgorithmSpec spec;
  std::optional<Real> hard_delta;  // set for hard:<d>
};

/// Throws ValidationError on any invalid field.
PreparedRun prepare_run(const RunConfig& config);

/// "<out>.meta": a key=value echo of the configuration.
std::string run_metadata(const RunConfig& config, const PreparedRun& prepared,
                         const Trajectory& traj);

/// Path of the SVG written next to a CSV: "t.csv" -> "t.svg".
std::string svg_path_for(const std::string& csv_path);

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);

struct StagesConfig {
  std::string csv;
  std::string delta;
  std::string reg = "entropy";
  std::string eta;
  int precision = 64;
  int digits = 30;
};
int cmd_stages(const StagesConfig& config, std::ostream& out, std::ostream& err);

struct VerifyConfig {
  std::string reg;
  std::string delta = "auto";  // auto = delta' / 2
  int precision = 64;
  int digits = 30;
};
int cmd_verify(const VerifyConfig& config, std::ostream& out, std::ostream& err);

struct LiftConfig {
  std::string reg = "entropy";
  std::string delta = "0.05";
  long n = 2;
  std::string eta = "0.1";
  std::size_t iters = 200;
  int precision = 64;
  int digits = 30;
};
int cmd_lift_check(const LiftConfig& config, std::ostream& out, std::ostream& err);

struct SweepConfig {
  RunConfig base;  // algo, reg, eta, iters, precision, digits
  std::vector<std::string> deltas;
  std::string out;  // empty: write the CSV to `out`
};
int cmd_sweep(const SweepConfig& config, std::ostream& out, std::ostream& err);

}  // namespace optimist
