#pragma once

// Self-play loops for optimistic FTRL and optimistic mirror descent.
//
// Both players update simultaneously: iterate t is computed from the losses
// observed at iterate t-1, with the optimistic prediction l^0 = 0 so that the
// first iterate is the pure regularizer minimizer (uniform play).

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "optimist/games.hpp"
#include "optimist/numerics.hpp"
#include "optimist/regularizers.hpp"

namespace optimist {

struct ConstantStep {
  Real eta;
};

struct AdaGradStep {
  Real epsilon;
};

/// eta_t = eta, or eta_t = 1 / sqrt(epsilon + sum_{k<t} ||l_k||_2^2) per player.
class StepsizeSchedule {
 public:
  /// Throws std::invalid_argument unless the parameter is positive.
  static StepsizeSchedule constant(Real eta);
  static StepsizeSchedule adagrad(Real epsilon);

  bool is_constant() const { return std::holds_alternative<ConstantStep>(rule_); }
  const Real& parameter() const;
  std::string describe() const;

  const std::variant<ConstantStep, AdaGradStep>& rule() const { return rule_; }

 private:
  explicit StepsizeSchedule(std::variant<ConstantStep, AdaGradStep> rule)
      : rule_(std::move(rule)) {}
  std::variant<ConstantStep, AdaGradStep> rule_;
};

/// Incremental form of the stepsize rule for one player.
class StepsizeState {
 public:
  explicit StepsizeState(const StepsizeSchedule& schedule);

  /// Stepsize for the next iterate given every loss observed so far.
  Real current() const;
  void observe(const RealVector& loss);

 private:
  StepsizeSchedule schedule_;
  std::optional<Real> squared_norms_;
};

/// Stepsize after the given loss history (oldest first).
Real next_stepsize(const StepsizeSchedule& schedule,
                   const std::vector<RealVector>& history);

enum class Algorithm { OFTRL, OOMD };

std::string algorithm_name(Algorithm algorithm);

struct AlgorithmSpec {
  Algorithm algorithm;
  RegularizerKind kind;
  StepsizeSchedule schedule;

  /// OMWU / OGDA when the instantiation has a conventional name.
  std::string display_name() const;
};

struct Record {
  std::size_t t;
  SimplexPoint x;
  SimplexPoint y;
  std::optional<SimplexPoint> x_hat;  // OOMD secondary sequence
  std::optional<SimplexPoint> y_hat;
  RealVector loss_x;
  RealVector loss_y;
  std::optional<Real> cum_diff_x;  // E^t_x, two-action players only
  std::optional<Real> cum_diff_y;
  Real gap;
  Real eta_x;
  Real eta_y;
  std::size_t clamps;
};

/// Records are append-only and ordered by t. With thinning, only every
/// `thin`-th iterate, the first and last ones, and iterates flagged by the
/// keep predicate are stored.
class Trajectory {
 public:
  Trajectory(MatrixGame game, AlgorithmSpec spec);

  const MatrixGame& game() const { return game_; }
  const AlgorithmSpec& spec() const { return spec_; }
  const std::vector<Record>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const Record& back() const { return records_.back(); }
  /// Iterations simulated (>= size() when thinned).
  std::size_t iterations() const { return iterations_; }
  std::size_t total_clamps() const { return total_clamps_; }

  void append(Record record);
  void note_iteration(std::size_t clamps);

 private:
  MatrixGame game_;
  AlgorithmSpec spec_;
  std::vector<Record> records_;
  std::size_t iterations_ = 0;
  std::size_t total_clamps_ = 0;
};

struct RunOptions {
  std::size_t thin = 1;
  /// Extra records to keep when thinning; sees (previous, current).
  std::function<bool(const Record&, const Record&)> keep;
  /// Sees every iterate, thinned or not.
  std::function<void(const Record&)> observer;
};

Trajectory run_oftrl(const MatrixGame& game, const AlgorithmSpec& spec,
                     std::size_t iterations, const RunOptions& options = {});
Trajectory run_oomd(const MatrixGame& game, const AlgorithmSpec& spec,
                    std::size_t iterations, const RunOptions& options = {});
/// Dispatches on spec.algorithm.
Trajectory run(const MatrixGame& game, const AlgorithmSpec& spec,
               std::size_t iterations, const RunOptions& options = {});

/// CSV: t,x1,y1,gap,Ex,Ey,eta_t,clamps. `digits` significant digits per
/// value (0 = full precision). eta_t is the x-player's stepsize.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, int digits);

/// One parsed CSV row; Ex/Ey are empty for games that are not 2x2.
struct CsvRow {
  std::size_t t;
  Real x1;
  Real y1;
  Real gap;
  std::optional<Real> ex;
  std::optional<Real> ey;
  Real eta;
  std::size_t clamps;
};

/// Throws std::runtime_error on a malformed header or row.
std::vector<CsvRow> read_trajectory_csv(std::istream& in, const Context& ctx);

}  // namespace optimist
