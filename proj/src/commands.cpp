#include "optimist/commands.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "optimist/analysis.hpp"
#include "optimist/svg.hpp"

namespace optimist {

namespace {

Context make_ctx(int digits) {
  try {
    return make_context(digits);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
}

Real parse_real(const Context& ctx, const std::string& text, const std::string& what) {
  try {
    return ctx.parse(text);
  } catch (const std::invalid_argument&) {
    throw ValidationError(what + " is not a decimal number: '" + text + "'");
  }
}

RegularizerKind parse_kind(const std::string& name) {
  try {
    return parse_regularizer(name);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
}

Real parse_delta(const Context& ctx, const std::string& text) {
  Real d = parse_real(ctx, text, "delta");
  if (!(d > 0) || !(d * 2 < 1)) {
    throw ValidationError("delta must lie in (0, 1/2), got " + text);
  }
  return d;
}

Real parse_positive(const Context& ctx, const std::string& text, const std::string& what) {
  Real v = parse_real(ctx, text, what);
  if (!(v > 0)) throw ValidationError(what + " must be positive, got " + text);
  return v;
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "oftrl") return Algorithm::OFTRL;
  if (name == "oomd") return Algorithm::OOMD;
  throw ValidationError("unknown algorithm '" + name + "' (expected oftrl | oomd)");
}

long parse_long(const std::string& text, const std::string& what) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size()) {
    throw ValidationError(what + " is not an integer: '" + text + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

// Runs a command body, mapping validation and I/O failures to exit code 1.
template <typename Body>
int guarded(std::ostream& err, Body body) {
  try {
    return body();
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitInvalid;
}

}  // namespace

PreparedRun prepare_run(const RunConfig& config) {
  const Context ctx = make_ctx(config.precision);
  const Algorithm algo = parse_algorithm(config.algo);
  const RegularizerKind kind = parse_kind(config.reg);
  if (config.eta.has_value() == config.adagrad_eps.has_value()) {
    throw ValidationError("set exactly one of --eta and --adagrad-eps");
  }
  const StepsizeSchedule schedule =
      config.eta ? StepsizeSchedule::constant(parse_positive(ctx, *config.eta, "eta"))
                 : StepsizeSchedule::adagrad(
                       parse_positive(ctx, *config.adagrad_eps, "adagrad epsilon"));
  if (config.iters < 1) throw ValidationError("iters must be >= 1");
  if (config.thin < 1) throw ValidationError("thin must be >= 1");
  if (config.digits < 0) throw ValidationError("digits must be >= 0");

  const auto colon = config.game.find(':');
  const std::string source = config.game.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : config.game.substr(colon + 1);
  std::optional<Real> hard_delta;
  std::optional<MatrixGame> game;
  if (source == "hard" && !rest.empty()) {
    hard_delta = parse_delta(ctx, rest);
    game = hard_instance(ctx, HardInstanceParams(*hard_delta));
  } else if (source == "file" && !rest.empty()) {
    try {
      game = read_game_file(rest, ctx);
    } catch (const std::exception& e) {
      throw ValidationError(e.what());
    }
  } else if (source == "lift") {
    const auto parts = split(rest, ':');
    if (parts.size() != 2) {
      throw ValidationError("lift game must be lift:<delta>:<n>, got '" + config.game + "'");
    }
    const long n = parse_long(parts[1], "lift factor");
    if (n < 1) throw ValidationError("lift factor must be >= 1");
    const MatrixGame base = hard_instance(ctx, HardInstanceParams(parse_delta(ctx, parts[0])));
    game = duplicate_lift(base, n, Regularizer(ctx, kind).lift_alpha());
  } else {
    throw ValidationError("game must be hard:<delta> | file:<path> | lift:<delta>:<n>, got '" +
                          config.game + "'");
  }
  return PreparedRun{ctx, std::move(*game), AlgorithmSpec{algo, kind, schedule},
                     std::move(hard_delta)};
}

std::string run_metadata(const RunConfig& config, const PreparedRun& prepared,
                         const Trajectory& traj) {
  std::ostringstream out;
  out << "algo=" << config.algo << '\n'
      << "reg=" << prepared.spec.kind.name() << '\n'
      << "dynamics=" << prepared.spec.display_name() << '\n'
      << "stepsize=" << prepared.spec.schedule.describe() << '\n'
      << "game=" << config.game << '\n'
      << "game_dims=" << prepared.game.rows() << 'x' << prepared.game.cols() << '\n'
      << "iters=" << config.iters << '\n'
      << "precision=" << config.precision << '\n'
      << "thin=" << config.thin << '\n'
      << "output_digits=" << (config.full_precision ? "full" : std::to_string(config.digits))
      << '\n'
      << "records=" << traj.size() << '\n'
      << "clamp_events=" << traj.total_clamps() << '\n';
  return out.str();
}

std::string svg_path_for(const std::string& csv_path) {
  const auto slash = csv_path.find_last_of('/');
  const auto dot = csv_path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return csv_path + ".svg";
  }
  return csv_path.substr(0, dot) + ".svg";
}

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (config.out.empty()) throw ValidationError("--out is required");
    const PreparedRun p = prepare_run(config);
    const bool stages_apply = p.hard_delta && p.spec.schedule.is_constant();

    RunOptions options;
    options.thin = config.thin;
    std::optional<StageTracker> tracker;
    if (p.hard_delta) options.keep = stage_crossing_keeper(*p.hard_delta);
    if (stages_apply) {
      tracker.emplace(*p.hard_delta, p.spec.schedule.parameter(),
                      Regularizer(p.ctx, p.spec.kind).constants());
      options.observer = [&tracker](const Record& r) {
        tracker->observe(r.t, r.x[0], r.y[0], r.gap);
      };
    }
    const Trajectory traj = run(p.game, p.spec, config.iters, options);

    const int digits = config.full_precision ? 0 : config.digits;
    std::ofstream csv(config.out);
    if (!csv) throw ValidationError("cannot write " + config.out);
    write_trajectory_csv(csv, traj, digits);
    std::ofstream meta(config.out + ".meta");
    if (!meta) throw ValidationError("cannot write " + config.out + ".meta");
    meta << run_metadata(config, p, traj);
    out << "wrote " << config.out << " (" << traj.size() << " records of "
        << traj.iterations() << " iterations)\n";

    if (tracker) out << to_key_value(tracker->report(), 12);
    if (config.svg) {
      PlotOptions plot;
      plot.log_gap = config.log_gap;
      plot.title = p.spec.display_name() + " on " + config.game;
      if (tracker) {
        const StageReport r = tracker->report();
        for (const auto& t : {r.t_s, r.t1, r.t2}) {
          if (t) plot.markers.push_back(*t);
        }
      }
      const std::string path = svg_path_for(config.out);
      std::ofstream svg(path);
      if (!svg) throw ValidationError("cannot write " + path);
      svg << render_svg(plot_samples(traj), plot);
      out << "wrote " << path << '\n';
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_stages(const StagesConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Context ctx = make_ctx(config.precision);
    const Real delta = parse_delta(ctx, config.delta);
    const Real eta = parse_positive(ctx, config.eta, "eta");
    const RegularizerKind kind = parse_kind(config.reg);
    std::ifstream in(config.csv);
    if (!in) throw ValidationError("cannot open " + config.csv);
    const auto rows = read_trajectory_csv(in, ctx);
    const StageReport report =
        detect_stages(rows, delta, eta, Regularizer(ctx, kind).constants());
    out << to_key_value(report, config.digits);
    return static_cast<int>(kExitOk);
  });
}

int cmd_verify(const VerifyConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Context ctx = make_ctx(config.precision);
    const RegularizerKind kind = parse_kind(config.reg);
    const Real delta = config.delta == "auto"
                           ? Regularizer(ctx, kind).constants().delta_prime / 2
                           : parse_positive(ctx, config.delta, "delta");
    const AssumptionReport report = verify_assumptions(ctx, kind, delta);
    out << to_key_value(report, config.digits);
    if (!report.in_range) return static_cast<int>(kExitInvalid);
    return static_cast<int>(report.passed() ? kExitOk : kExitCheckFailed);
  });
}

int cmd_lift_check(const LiftConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Context ctx = make_ctx(config.precision);
    const RegularizerKind kind = parse_kind(config.reg);
    const Real delta = parse_delta(ctx, config.delta);
    const Real eta = parse_positive(ctx, config.eta, "eta");
    if (config.n < 1) throw ValidationError("n must be >= 1");
    if (config.iters < 1) throw ValidationError("iters must be >= 1");
    const LiftReport report = lift_equivalence(ctx, kind, delta, config.n, eta, config.iters);
    out << to_key_value(report, config.digits);
    return static_cast<int>(report.passed() ? kExitOk : kExitCheckFailed);
  });
}

int cmd_sweep(const SweepConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig probe = config.base;
    probe.game = "hard:0.25";
    const PreparedRun p = prepare_run(probe);
    if (!p.spec.schedule.is_constant()) {
      throw ValidationError("sweep needs a constant stepsize (--eta)");
    }
    std::vector<Real> deltas;
    for (const std::string& text : config.deltas) {
      Real d = parse_delta(p.ctx, text);
      const bool seen = std::any_of(deltas.begin(), deltas.end(),
                                    [&](const Real& e) { return e == d; });
      if (seen) {
        err << "warning: duplicate delta " << text << " ignored\n";
        continue;
      }
      deltas.push_back(std::move(d));
    }
    const auto entries = flat_region_scaling(p.ctx, deltas, p.spec, config.base.iters);

    std::ofstream file;
    if (!config.out.empty()) {
      file.open(config.out);
      if (!file) throw ValidationError("cannot write " + config.out);
    }
    std::ostream& sink = config.out.empty() ? out : file;
    const int digits = config.base.full_precision ? 0 : config.base.digits;
    sink << stage_csv_header() << '\n';
    for (const FlatRegionEntry& e : entries) {
      sink << to_csv_row(e.report, digits) << '\n';
      if (!e.complete) {
        err << "warning: delta " << e.delta.str(20) << " did not reach T2 within "
            << config.base.iters << " iterations\n";
      }
    }
    if (!config.out.empty()) out << "wrote " << config.out << '\n';
    return static_cast<int>(kExitOk);
  });
}

}  // namespace optimist
