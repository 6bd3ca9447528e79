#include "optimist/dynamics.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace optimist {

StepsizeSchedule StepsizeSchedule::constant(Real eta) {
  if (!(eta > 0)) throw std::invalid_argument("stepsize eta must be positive");
  return StepsizeSchedule(ConstantStep{std::move(eta)});
}

StepsizeSchedule StepsizeSchedule::adagrad(Real epsilon) {
  if (!(epsilon > 0)) throw std::invalid_argument("adagrad epsilon must be positive");
  return StepsizeSchedule(AdaGradStep{std::move(epsilon)});
}

const Real& StepsizeSchedule::parameter() const {
  return std::visit(
      [](const auto& r) -> const Real& {
        if constexpr (std::is_same_v<std::decay_t<decltype(r)>, ConstantStep>) {
          return r.eta;
        } else {
          return r.epsilon;
        }
      },
      rule_);
}

std::string StepsizeSchedule::describe() const {
  if (is_constant()) return "constant(eta=" + parameter().str(20) + ")";
  return "adagrad(epsilon=" + parameter().str(20) + ")";
}

StepsizeState::StepsizeState(const StepsizeSchedule& schedule) : schedule_(schedule) {}

Real StepsizeState::current() const {
  if (schedule_.is_constant()) return schedule_.parameter();
  Real total = schedule_.parameter();
  if (squared_norms_) total += *squared_norms_;
  return 1 / sqrt(total);
}

void StepsizeState::observe(const RealVector& loss) {
  if (schedule_.is_constant()) return;
  const Real sq = dot(loss, loss);
  if (squared_norms_) {
    *squared_norms_ += sq;
  } else {
    squared_norms_ = sq;
  }
}

Real next_stepsize(const StepsizeSchedule& schedule,
                   const std::vector<RealVector>& history) {
  StepsizeState state(schedule);
  for (const RealVector& loss : history) state.observe(loss);
  return state.current();
}

std::string algorithm_name(Algorithm algorithm) {
  return algorithm == Algorithm::OFTRL ? "OFTRL" : "OOMD";
}

std::string AlgorithmSpec::display_name() const {
  // Entropy OFTRL and entropy OOMD coincide; both are OMWU.
  if (kind.family() == RegularizerKind::Family::NegativeEntropy) return "OMWU";
  if (algorithm == Algorithm::OOMD &&
      kind.family() == RegularizerKind::Family::SquaredEuclidean) {
    return "OGDA";
  }
  return algorithm_name(algorithm) + "-" + kind.name();
}

Trajectory::Trajectory(MatrixGame game, AlgorithmSpec spec)
    : game_(std::move(game)), spec_(std::move(spec)) {}

void Trajectory::append(Record record) {
  if (!records_.empty() && record.t <= records_.back().t) {
    throw std::logic_error("trajectory records must be appended in order of t");
  }
  records_.push_back(std::move(record));
}

void Trajectory::note_iteration(std::size_t clamps) {
  ++iterations_;
  total_clamps_ += clamps;
}

namespace {

struct Player {
  StepsizeState step;
  RealVector cumulative;  // L^{t-1}
  RealVector last;        // l^{t-1}, zero before the first round
  std::optional<SimplexPoint> hat;
};

void accumulate(RealVector& into, const RealVector& v) {
  for (std::size_t i = 0; i < into.size(); ++i) into[i] += v[i];
}

SimplexPoint play(const Regularizer& reg, Algorithm algo, const Real& eta,
                  Player& p, std::size_t t, std::size_t dim, std::size_t* clamps) {
  const Context& ctx = reg.context();
  if (algo == Algorithm::OFTRL) {
    RealVector g = p.cumulative;
    accumulate(g, p.last);
    return reg.ftrl_argmin(eta, g, clamps);
  }
  if (t == 1) {
    p.hat = SimplexPoint::uniform(ctx, dim);
    return SimplexPoint::uniform(ctx, dim);
  }
  p.hat = reg.bregman_prox(eta, p.last, *p.hat, clamps);
  return reg.bregman_prox(eta, p.last, *p.hat, clamps);
}

Trajectory simulate(const MatrixGame& game, const AlgorithmSpec& spec,
                    std::size_t iterations, const RunOptions& options) {
  if (iterations == 0) throw std::invalid_argument("iterations must be >= 1");
  if (options.thin == 0) throw std::invalid_argument("thin must be >= 1");
  const Context& ctx = game.context();
  if (spec.schedule.parameter().bits() != ctx.bits()) {
    throw PrecisionMismatch("stepsize precision differs from the game context");
  }
  const Regularizer reg(ctx, spec.kind);
  const std::size_t dx = game.rows();
  const std::size_t dy = game.cols();
  Player px{StepsizeState(spec.schedule), zeros(ctx, dx), zeros(ctx, dx), {}};
  Player py{StepsizeState(spec.schedule), zeros(ctx, dy), zeros(ctx, dy), {}};

  Trajectory traj(game, spec);
  std::optional<Record> prev;
  for (std::size_t t = 1; t <= iterations; ++t) {
    Real eta_x = px.step.current();
    Real eta_y = py.step.current();
    std::size_t clamps = 0;
    SimplexPoint x = play(reg, spec.algorithm, eta_x, px, t, dx, &clamps);
    SimplexPoint y = play(reg, spec.algorithm, eta_y, py, t, dy, &clamps);

    LossVectors losses = loss_vectors(game, x, y);
    Real gap = duality_gap(game, x, y);
    accumulate(px.cumulative, losses.x);
    accumulate(py.cumulative, losses.y);
    px.step.observe(losses.x);
    py.step.observe(losses.y);
    px.last = losses.x;
    py.last = losses.y;

    std::optional<Real> ex;
    std::optional<Real> ey;
    if (dx == 2) ex = px.cumulative[0] - px.cumulative[1];
    if (dy == 2) ey = py.cumulative[0] - py.cumulative[1];

    Record rec{t,           std::move(x),      std::move(y),   px.hat,
               py.hat,      std::move(losses.x), std::move(losses.y),
               std::move(ex), std::move(ey),   std::move(gap), std::move(eta_x),
               std::move(eta_y), clamps};
    if (options.observer) options.observer(rec);
    traj.note_iteration(clamps);

    const bool store = t == 1 || t == iterations || t % options.thin == 0 ||
                       (options.keep && prev && options.keep(*prev, rec));
    if (store) traj.append(rec);
    prev = std::move(rec);
  }
  return traj;
}

}  // namespace

Trajectory run_oftrl(const MatrixGame& game, const AlgorithmSpec& spec,
                     std::size_t iterations, const RunOptions& options) {
  if (spec.algorithm != Algorithm::OFTRL) {
    throw std::invalid_argument("run_oftrl called with an OOMD spec");
  }
  return simulate(game, spec, iterations, options);
}

Trajectory run_oomd(const MatrixGame& game, const AlgorithmSpec& spec,
                    std::size_t iterations, const RunOptions& options) {
  if (spec.algorithm != Algorithm::OOMD) {
    throw std::invalid_argument("run_oomd called with an OFTRL spec");
  }
  return simulate(game, spec, iterations, options);
}

Trajectory run(const MatrixGame& game, const AlgorithmSpec& spec,
               std::size_t iterations, const RunOptions& options) {
  return simulate(game, spec, iterations, options);
}

namespace {

constexpr const char* kCsvHeader = "t,x1,y1,gap,Ex,Ey,eta_t,clamps";

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::size_t parse_count(const std::string& s, std::size_t line_no) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != s.size() || s.empty() || s[0] == '-') {
    throw std::runtime_error("csv line " + std::to_string(line_no) +
                             ": bad integer '" + s + "'");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, int digits) {
  out << kCsvHeader << '\n';
  for (const Record& r : traj.records()) {
    out << r.t << ',' << r.x[0].str(digits) << ',' << r.y[0].str(digits) << ','
        << r.gap.str(digits) << ',';
    if (r.cum_diff_x) out << r.cum_diff_x->str(digits);
    out << ',';
    if (r.cum_diff_y) out << r.cum_diff_y->str(digits);
    out << ',' << r.eta_x.str(digits) << ',' << r.clamps << '\n';
  }
}

std::vector<CsvRow> read_trajectory_csv(std::istream& in, const Context& ctx) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw std::runtime_error("csv: unexpected header '" + line + "'");
  std::vector<CsvRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 8) {
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected 8 fields, got " +
                               std::to_string(cells.size()));
    }
    try {
      CsvRow row{parse_count(cells[0], line_no),
                 ctx.parse(cells[1]),
                 ctx.parse(cells[2]),
                 ctx.parse(cells[3]),
                 cells[4].empty() ? std::nullopt : std::optional<Real>(ctx.parse(cells[4])),
                 cells[5].empty() ? std::nullopt : std::optional<Real>(ctx.parse(cells[5])),
                 ctx.parse(cells[6]),
                 parse_count(cells[7], line_no)};
      rows.push_back(std::move(row));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

}  // namespace optimist
