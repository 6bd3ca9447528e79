#pragma once

// Post-processing of trajectories on the hard 2x2 instance: stage detection,
// flat-region measurement, gap peaks, best/average iterates, empirical
// rates, and a numeric check of the regularizer assumptions.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "optimist/dynamics.hpp"
#include "optimist/games.hpp"
#include "optimist/numerics.hpp"
#include "optimist/regularizers.hpp"

namespace optimist {

struct StageReport {
  Real delta;
  Real eta;
  std::optional<std::size_t> t_s;
  std::optional<std::size_t> t1;
  std::optional<std::size_t> t2;
  std::optional<std::pair<long, long>> t3_window;
  std::optional<long> flat_len;          // t2 - t1
  Real predicted_ts_lb;                  // 1 / (2 eta L)
  Real predicted_threshold;              // c1 / (3 eta L delta)
  long predicted_th;                     // floor(c1 / (2 L eta delta))
  Real c2;
  // Largest gap among observed iterates t >= predicted_threshold.
  std::optional<Real> peak_gap_after_threshold;
  std::optional<std::size_t> peak_iteration;
  // Smallest gap observed inside the T3 window, when the run reaches it.
  std::optional<Real> window_min_gap;
  std::size_t observed = 0;              // iterates seen
};

/// First-passage stage detector fed one iterate at a time, so million-step
/// runs need not be stored.
class StageTracker {
 public:
  /// Throws std::invalid_argument unless eta > 0 and 0 < delta < 1/2.
  StageTracker(const Real& delta, const Real& eta,
               const RegularizerConstants& constants);

  void observe(std::size_t t, const Real& x1, const Real& y1, const Real& gap);
  StageReport report() const;

 private:
  StageReport base_;
  Real c1_;
  Real x_quarter_;   // 3/4
  Real x_target_;    // 1/(1+delta)
  Real y_target_;    // 1/(2(1+delta))
};

/// Throws std::invalid_argument when the trajectory is not a 2x2 run on the
/// hard family or its stepsize is not constant. The supplied delta sets the
/// thresholds even if the game was built with another one.
StageReport detect_stages(const Trajectory& traj, const Real& delta,
                          const RegularizerConstants& constants);
StageReport detect_stages(const std::vector<CsvRow>& rows, const Real& delta,
                          const Real& eta, const RegularizerConstants& constants);

/// Keep predicate for thinned runs: retains iterates where a stage threshold
/// is crossed upward.
std::function<bool(const Record&, const Record&)> stage_crossing_keeper(
    const Real& delta);

struct GapSample {
  std::size_t t;
  Real gap;
};

struct GapPeak {
  std::size_t t;
  Real gap;
};

/// Local maxima of gap^t at or above `floor`; peaks closer than
/// `min_separation` iterations collapse to the larger one.
class PeakDetector {
 public:
  PeakDetector(Real floor, std::size_t min_separation = 10);
  void observe(std::size_t t, const Real& gap);
  /// Flushes the final sample (a last sample can be a peak only if it
  /// rises strictly above its predecessor).
  std::vector<GapPeak> finish();

 private:
  void accept(std::size_t t, const Real& gap);

  Real floor_;
  std::size_t separation_;
  std::vector<GapSample> window_;  // last two samples
  std::vector<GapPeak> peaks_;
};

std::vector<GapPeak> detect_gap_peaks(const std::vector<GapSample>& samples,
                                      const Real& floor,
                                      std::size_t min_separation = 10);
std::vector<GapPeak> detect_gap_peaks(const Trajectory& traj, const Real& floor,
                                      std::size_t min_separation = 10);
std::vector<GapSample> gap_samples(const Trajectory& traj);

struct FlatRegionEntry {
  Real delta;
  std::optional<long> flat_len;
  bool complete;  // false when T2 was not reached within T
  StageReport report;
};

/// One fresh run per delta (in parallel), each streamed through a
/// StageTracker. Throws std::invalid_argument on a non-constant stepsize.
std::vector<FlatRegionEntry> flat_region_scaling(const Context& ctx,
                                                 const std::vector<Real>& deltas,
                                                 const AlgorithmSpec& spec,
                                                 std::size_t iterations);

struct BestAverage {
  Real best_gap;
  std::size_t best_t;
  Real avg_iterate_gap;
};

/// Requires records for every t in 1..T (an unthinned prefix).
BestAverage best_and_average(const Trajectory& traj, std::size_t horizon);

/// max over t in [t_min, t_max] of gap^t * sqrt(t). Throws
/// std::invalid_argument when the window is empty or inverted.
Real fit_inverse_sqrt_rate(const std::vector<GapSample>& samples,
                           std::size_t t_min, std::size_t t_max);
Real fit_inverse_sqrt_rate(const Trajectory& traj, std::size_t t_min,
                           std::size_t t_max);

struct AssumptionCheck {
  std::string name;
  bool ok;
  std::string witness;  // the evaluated quantities, human readable
};

struct AssumptionReport {
  RegularizerKind kind;
  Real delta;
  RegularizerConstants constants;
  bool in_range;  // 0 < delta <= delta'
  bool unbiased_ok;
  bool rational_ok;
  bool lipschitz_ok;
  bool item1_ok;
  bool item2_ok;
  std::vector<AssumptionCheck> checks;
  std::vector<std::string> notes;

  bool passed() const {
    return in_range && unbiased_ok && rational_ok && lipschitz_ok && item1_ok &&
           item2_ok;
  }
};

/// Evaluates every check even when delta is out of range.
AssumptionReport verify_assumptions(const Context& ctx, const RegularizerKind& kind,
                                    const Real& delta);

struct LiftReport {
  long n;
  Real alpha;
  Real max_half_sum_error;  // |half-sum of the lifted iterate - 2-d coordinate|
  Real max_spread;          // max - min within one half
  Real bound;               // 10^-(digits-20)
  bool passed() const { return max_half_sum_error <= bound && max_spread <= bound; }
};

/// Runs OFTRL on A_delta and on its n-fold lift side by side.
LiftReport lift_equivalence(const Context& ctx, const RegularizerKind& kind,
                            const Real& delta, long n, const Real& eta,
                            std::size_t iterations);

std::string to_key_value(const StageReport& r, int digits);
std::string to_key_value(const AssumptionReport& r, int digits);
std::string to_key_value(const LiftReport& r, int digits);

std::string stage_csv_header();
std::string to_csv_row(const StageReport& r, int digits);

}  // namespace optimist
