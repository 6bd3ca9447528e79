#include "optimist/analysis.hpp"

#include <future>
#include <sstream>
#include <stdexcept>

namespace optimist {

namespace {

// Only the shape of A_delta is checked here; delta itself comes from the caller.
bool is_hard_family(const MatrixGame& game) {
  if (game.rows() != 2 || game.cols() != 2) return false;
  const Context& ctx = game.context();
  const Tolerance tol = default_tolerance(ctx);
  const Real half = ctx.ratio(1, 2);
  const Real d = game.at(0, 0) - half;
  return approx_equal(game.at(0, 1), half, tol) &&
         approx_equal(game.at(1, 0), ctx.zero(), tol) &&
         approx_equal(game.at(1, 1), ctx.one(), tol) && d > 0 && d < half;
}

template <class T>
std::string opt_str(const std::optional<T>& v) {
  if (!v) return "none";
  return std::to_string(*v);
}

std::string opt_str(const std::optional<Real>& v, int digits) {
  return v ? v->str(digits) : "none";
}

StageReport initial_report(const Real& delta, const Real& eta,
                           const RegularizerConstants& k) {
  if (!(eta > 0)) throw std::invalid_argument("stage detection needs eta > 0");
  if (!(delta > 0) || !(delta * 2 < 1)) {
    throw std::invalid_argument("stage detection needs 0 < delta < 1/2");
  }
  return StageReport{delta,
                     eta,
                     {},
                     {},
                     {},
                     {},
                     {},
                     1 / (eta * k.L * 2),
                     k.c1 / (eta * k.L * delta * 3),
                     (k.c1 / (k.L * eta * delta * 2)).floor_long(),
                     k.c2,
                     {},
                     {},
                     {},
                     0};
}

}  // namespace

StageTracker::StageTracker(const Real& delta, const Real& eta,
                           const RegularizerConstants& constants)
    : base_(initial_report(delta, eta, constants)),
      c1_(constants.c1),
      x_quarter_(like(delta, 3) / 4),
      x_target_(1 / (delta + 1)),
      y_target_(1 / ((delta + 1) * 2)) {}

void StageTracker::observe(std::size_t t, const Real& x1, const Real& y1,
                           const Real& gap) {
  StageReport& r = base_;
  if (t == 0) throw std::invalid_argument("iteration index must be >= 1");
  ++r.observed;
  if (!r.t_s && t > 1 && x1 >= x_quarter_) r.t_s = t;
  if (r.t_s && !r.t1 && x1 >= x_target_) r.t1 = t;
  if (r.t1 && !r.t2 && y1 >= y_target_) {
    r.t2 = t;
    r.flat_len = static_cast<long>(*r.t2) - static_cast<long>(*r.t1);
    const Real span = c1_ * r.predicted_th;
    const long start = static_cast<long>(t) + (span / 20).ceil_long();
    const long end = static_cast<long>(t) + (span / 10).floor_long() - 2;
    if (end >= start) r.t3_window = std::make_pair(start, end);
  }
  if (r.t3_window && static_cast<long>(t) >= r.t3_window->first &&
      static_cast<long>(t) <= r.t3_window->second) {
    if (!r.window_min_gap || gap < *r.window_min_gap) r.window_min_gap = gap;
  }
  if (r.predicted_threshold <= static_cast<long>(t)) {
    if (!r.peak_gap_after_threshold || gap > *r.peak_gap_after_threshold) {
      r.peak_gap_after_threshold = gap;
      r.peak_iteration = t;
    }
  }
}

StageReport StageTracker::report() const { return base_; }

StageReport detect_stages(const Trajectory& traj, const Real& delta,
                          const RegularizerConstants& constants) {
  if (!is_hard_family(traj.game())) {
    throw std::invalid_argument("stage detection needs a run on the hard 2x2 instance");
  }
  if (!traj.spec().schedule.is_constant()) {
    throw std::invalid_argument("stage detection needs a constant stepsize");
  }
  StageTracker tracker(delta, traj.spec().schedule.parameter(), constants);
  for (const Record& r : traj.records()) tracker.observe(r.t, r.x[0], r.y[0], r.gap);
  return tracker.report();
}

StageReport detect_stages(const std::vector<CsvRow>& rows, const Real& delta,
                          const Real& eta, const RegularizerConstants& constants) {
  StageTracker tracker(delta, eta, constants);
  for (const CsvRow& r : rows) tracker.observe(r.t, r.x1, r.y1, r.gap);
  return tracker.report();
}

std::function<bool(const Record&, const Record&)> stage_crossing_keeper(
    const Real& delta) {
  const Real quarter = like(delta, 3) / 4;
  const Real x_target = 1 / (delta + 1);
  const Real y_target = 1 / ((delta + 1) * 2);
  return [=](const Record& prev, const Record& cur) {
    const auto up = [](const Real& a, const Real& b, const Real& level) {
      return a < level && b >= level;
    };
    return up(prev.x[0], cur.x[0], quarter) || up(prev.x[0], cur.x[0], x_target) ||
           up(prev.y[0], cur.y[0], y_target);
  };
}

PeakDetector::PeakDetector(Real floor, std::size_t min_separation)
    : floor_(std::move(floor)), separation_(min_separation) {}

void PeakDetector::accept(std::size_t t, const Real& gap) {
  if (!peaks_.empty() && t - peaks_.back().t < separation_) {
    if (gap > peaks_.back().gap) peaks_.back() = GapPeak{t, gap};
    return;
  }
  peaks_.push_back(GapPeak{t, gap});
}

void PeakDetector::observe(std::size_t t, const Real& gap) {
  if (window_.size() == 2) {
    const GapSample& before = window_[0];
    const GapSample& mid = window_[1];
    if (mid.gap >= floor_ && mid.gap > before.gap && mid.gap >= gap) {
      accept(mid.t, mid.gap);
    }
    window_.erase(window_.begin());
  }
  window_.push_back(GapSample{t, gap});
}

std::vector<GapPeak> PeakDetector::finish() {
  if (window_.size() == 2 && window_[1].gap >= floor_ &&
      window_[1].gap > window_[0].gap) {
    accept(window_[1].t, window_[1].gap);
  }
  window_.clear();
  return std::exchange(peaks_, {});
}

std::vector<GapPeak> detect_gap_peaks(const std::vector<GapSample>& samples,
                                      const Real& floor, std::size_t min_separation) {
  PeakDetector detector(floor, min_separation);
  for (const GapSample& s : samples) detector.observe(s.t, s.gap);
  return detector.finish();
}

std::vector<GapSample> gap_samples(const Trajectory& traj) {
  std::vector<GapSample> out;
  out.reserve(traj.size());
  for (const Record& r : traj.records()) out.push_back(GapSample{r.t, r.gap});
  return out;
}

std::vector<GapPeak> detect_gap_peaks(const Trajectory& traj, const Real& floor,
                                      std::size_t min_separation) {
  return detect_gap_peaks(gap_samples(traj), floor, min_separation);
}

std::vector<FlatRegionEntry> flat_region_scaling(const Context& ctx,
                                                 const std::vector<Real>& deltas,
                                                 const AlgorithmSpec& spec,
                                                 std::size_t iterations) {
  if (!spec.schedule.is_constant()) {
    throw std::invalid_argument("flat-region scaling needs a constant stepsize");
  }
  for (const Real& d : deltas) HardInstanceParams check(d);
  const RegularizerConstants constants = Regularizer(ctx, spec.kind).constants();

  std::vector<std::future<FlatRegionEntry>> jobs;
  for (const Real& d : deltas) {
    jobs.push_back(std::async(std::launch::async, [&ctx, &spec, &constants, d,
                                                   iterations] {
      StageTracker tracker(d, spec.schedule.parameter(), constants);
      RunOptions options;
      options.thin = iterations;
      options.observer = [&tracker](const Record& r) {
        tracker.observe(r.t, r.x[0], r.y[0], r.gap);
      };
      run(hard_instance(ctx, HardInstanceParams(d)), spec, iterations, options);
      StageReport report = tracker.report();
      return FlatRegionEntry{d, report.flat_len, report.t2.has_value(), std::move(report)};
    }));
  }
  std::vector<FlatRegionEntry> out;
  for (auto& job : jobs) out.push_back(job.get());
  return out;
}

BestAverage best_and_average(const Trajectory& traj, std::size_t horizon) {
  if (horizon == 0 || horizon > traj.size() || traj.records()[horizon - 1].t != horizon) {
    throw std::invalid_argument("best_and_average needs unthinned records for t = 1.." +
                                std::to_string(horizon));
  }
  const Context& ctx = traj.game().context();
  const auto& recs = traj.records();
  RealVector xs = zeros(ctx, recs[0].x.dim());
  RealVector ys = zeros(ctx, recs[0].y.dim());
  Real best = recs[0].gap;
  std::size_t best_t = recs[0].t;
  for (std::size_t k = 0; k < horizon; ++k) {
    const Record& r = recs[k];
    if (r.gap < best) {
      best = r.gap;
      best_t = r.t;
    }
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] += r.x[i];
    for (std::size_t j = 0; j < ys.size(); ++j) ys[j] += r.y[j];
  }
  const long n = static_cast<long>(horizon);
  for (Real& v : xs) v = v / n;
  for (Real& v : ys) v = v / n;
  Real avg = duality_gap(traj.game(), SimplexPoint(std::move(xs), ctx),
                         SimplexPoint(std::move(ys), ctx));
  return BestAverage{std::move(best), best_t, std::move(avg)};
}

Real fit_inverse_sqrt_rate(const std::vector<GapSample>& samples, std::size_t t_min,
                           std::size_t t_max) {
  if (t_min >= t_max) throw std::invalid_argument("rate fit needs t_min < t_max");
  std::optional<Real> best;
  for (const GapSample& s : samples) {
    if (s.t < t_min || s.t > t_max) continue;
    Real c = s.gap * sqrt(like(s.gap, static_cast<long>(s.t)));
    if (!best || c > *best) best = std::move(c);
  }
  if (!best) throw std::invalid_argument("rate fit window contains no iterates");
  return *best;
}

Real fit_inverse_sqrt_rate(const Trajectory& traj, std::size_t t_min, std::size_t t_max) {
  return fit_inverse_sqrt_rate(gap_samples(traj), t_min, t_max);
}

AssumptionReport verify_assumptions(const Context& ctx, const RegularizerKind& kind,
                                    const Real& delta) {
  const Regularizer reg(ctx, kind);
  const RegularizerConstants k = reg.constants();
  const Tolerance tol = default_tolerance(ctx);
  const Real half = ctx.ratio(1, 2);
  const int w = 25;
  AssumptionReport rep{kind, delta, k, delta > 0 && delta <= k.delta_prime,
                       false, false, false, false, false, {}, {}};

  const Real f0 = reg.f_one(ctx.zero());
  rep.unbiased_ok = approx_equal(f0, half, tol);
  rep.checks.push_back({"unbiased", rep.unbiased_ok, "F(0)=" + f0.str(w)});

  // Limit probes: the far probe must be within 1e-3 of the limit and closer
  // to it than the near probe.
  const Real far = ctx.pow10(6);
  const Real near = ctx.pow10(3);
  const Real probe_tol = ctx.pow10(-3);
  const Real f_neg_far = reg.f_one(-far);
  const Real f_pos_far = reg.f_one(far);
  rep.rational_ok = 1 - f_neg_far <= probe_tol && f_pos_far <= probe_tol &&
                    f_neg_far >= reg.f_one(-near) && f_pos_far <= reg.f_one(near);
  rep.checks.push_back({"rational", rep.rational_ok,
                        "F(-1e6)=" + f_neg_far.str(w) + " F(1e6)=" + f_pos_far.str(w)});

  // Difference quotients on E in [-10, 10], step 1/200.
  Real worst = ctx.zero();
  Real prev_e = ctx.integer(-10);
  Real prev_f = reg.f_one(prev_e);
  for (long i = 1; i <= 4000; ++i) {
    Real e = ctx.integer(-10) + ctx.ratio(i, 200);
    Real f = reg.f_one(e);
    worst = max(worst, abs(f - prev_f) / (e - prev_e));
    prev_e = std::move(e);
    prev_f = std::move(f);
  }
  rep.lipschitz_ok = worst <= k.L + tol.abs;
  rep.checks.push_back({"lipschitz", rep.lipschitz_ok,
                        "max_quotient=" + worst.str(w) + " L=" + k.L.str(w)});

  // Both items are checked at the largest qualifying E; F is non-increasing,
  // so smaller E can only increase the left-hand sides.
  const Real c1sq = k.c1 * k.c1;
  const Real e0 = reg.f_inverse(1 / (delta + 1));
  const Real lhs1 = reg.f_one(-c1sq / (k.L * delta * 30) + e0);
  const Real rhs1 = (k.c3 + 1) / (k.c3 + 1 + delta);
  rep.item1_ok = lhs1 >= rhs1;
  rep.checks.push_back({"item1", rep.item1_ok,
                        "E0=" + e0.str(w) + " lhs=" + lhs1.str(w) + " rhs=" + rhs1.str(w)});

  const Real e1 = reg.f_inverse(1 / ((delta + 1) * 2));
  const Real lhs2 = reg.f_one(-(k.c3 * c1sq) / (k.L * 120) + delta / (k.L * 4) + e1);
  const Real rhs2 = half + k.c2;
  rep.item2_ok = lhs2 >= rhs2;
  rep.checks.push_back({"item2", rep.item2_ok,
                        "E1=" + e1.str(w) + " lhs=" + lhs2.str(w) + " rhs=" + rhs2.str(w)});

  switch (kind.family()) {
    case RegularizerKind::Family::NegativeEntropy:
      rep.notes.push_back(
          "entropy_delta_prime_discrepancy: the stated delta' = c1^2/(480L) is twice the "
          "value c1^2/(960L) that the certificate derivation supports; the smaller value "
          "is reported");
      break;
    case RegularizerKind::Family::LogBarrier:
      rep.notes.push_back(
          "logbar_c2: evaluated as F(-c3 c1^2/(240L)) - 1/2; the algebraic form "
          "sqrt(1/4 + a^2) - a with a = c3 c1^2/(240L) is close to 1/2 and is not used");
      break;
    default:
      break;
  }
  if (!rep.in_range) {
    rep.notes.push_back("out_of_range: delta must lie in (0, delta']");
  }
  return rep;
}

LiftReport lift_equivalence(const Context& ctx, const RegularizerKind& kind,
                            const Real& delta, long n, const Real& eta,
                            std::size_t iterations) {
  if (n < 1) throw std::invalid_argument("lift factor n must be >= 1");
  const Real alpha = Regularizer(ctx, kind).lift_alpha();
  const MatrixGame base = hard_instance(ctx, HardInstanceParams(delta));
  const MatrixGame lifted = duplicate_lift(base, n, alpha);
  const AlgorithmSpec spec{Algorithm::OFTRL, kind, StepsizeSchedule::constant(eta)};

  auto small_job = std::async(std::launch::async,
                              [&] { return run_oftrl(base, spec, iterations); });
  const Trajectory big = run_oftrl(lifted, spec, iterations);
  const Trajectory small = small_job.get();

  Real err = ctx.zero();
  Real spread = ctx.zero();
  const std::size_t half = static_cast<std::size_t>(n);
  const auto measure = [&](const SimplexPoint& two, const SimplexPoint& wide) {
    for (std::size_t b = 0; b < 2; ++b) {
      Real total = ctx.zero();
      Real lo = wide[b * half];
      Real hi = wide[b * half];
      for (std::size_t i = b * half; i < (b + 1) * half; ++i) {
        total += wide[i];
        lo = min(lo, wide[i]);
        hi = max(hi, wide[i]);
      }
      err = max(err, abs(total - two[b]));
      spread = max(spread, hi - lo);
    }
  };
  for (std::size_t k = 0; k < small.size(); ++k) {
    measure(small.records()[k].x, big.records()[k].x);
    measure(small.records()[k].y, big.records()[k].y);
  }
  return LiftReport{n, alpha, std::move(err), std::move(spread), ctx.pow10(-(ctx.digits() - 20))};
}

std::string to_key_value(const StageReport& r, int digits) {
  std::ostringstream out;
  out << "delta=" << r.delta.str(digits) << '\n'
      << "eta=" << r.eta.str(digits) << '\n'
      << "observed=" << r.observed << '\n'
      << "T_s=" << opt_str(r.t_s) << '\n'
      << "T1=" << opt_str(r.t1) << '\n'
      << "T2=" << opt_str(r.t2) << '\n'
      << "T3_window="
      << (r.t3_window ? std::to_string(r.t3_window->first) + ":" +
                            std::to_string(r.t3_window->second)
                      : "none")
      << '\n'
      << "flat_len=" << opt_str(r.flat_len) << '\n'
      << "predicted_Ts_lb=" << r.predicted_ts_lb.str(digits) << '\n'
      << "predicted_threshold=" << r.predicted_threshold.str(digits) << '\n'
      << "predicted_Th=" << r.predicted_th << '\n'
      << "c2=" << r.c2.str(digits) << '\n'
      << "peak_gap_after_threshold=" << opt_str(r.peak_gap_after_threshold, digits) << '\n'
      << "peak_iteration=" << opt_str(r.peak_iteration) << '\n'
      << "window_min_gap=" << opt_str(r.window_min_gap, digits) << '\n';
  return out.str();
}

std::string to_key_value(const AssumptionReport& r, int digits) {
  std::ostringstream out;
  out << "kind=" << r.kind.name() << '\n'
      << "delta=" << r.delta.str(digits) << '\n'
      << "L=" << r.constants.L.str(digits) << '\n'
      << "c1=" << r.constants.c1.str(digits) << '\n'
      << "c2=" << r.constants.c2.str(digits) << '\n'
      << "c3=" << r.constants.c3.str(digits) << '\n'
      << "delta_prime=" << r.constants.delta_prime.str(digits) << '\n'
      << "in_range=" << (r.in_range ? "true" : "false") << '\n';
  for (const AssumptionCheck& c : r.checks) {
    out << c.name << "_ok=" << (c.ok ? "true" : "false") << '\n'
        << c.name << "_witness=" << c.witness << '\n';
  }
  for (const std::string& note : r.notes) out << "note=" << note << '\n';
  out << "status="
      << (!r.in_range ? "out-of-range" : (r.passed() ? "pass" : "fail")) << '\n';
  return out.str();
}

std::string to_key_value(const LiftReport& r, int digits) {
  std::ostringstream out;
  out << "n=" << r.n << '\n'
      << "alpha=" << r.alpha.str(digits) << '\n'
      << "max_half_sum_error=" << r.max_half_sum_error.str(digits) << '\n'
      << "max_within_half_spread=" << r.max_spread.str(digits) << '\n'
      << "bound=" << r.bound.str(digits) << '\n'
      << "status=" << (r.passed() ? "pass" : "fail") << '\n';
  return out.str();
}

std::string stage_csv_header() {
  return "delta,T_s,T1,T2,flat_len,T3_start,T3_end,predicted_threshold,peak_gap,peak_iteration,complete";
}

std::string to_csv_row(const StageReport& r, int digits) {
  std::ostringstream out;
  const auto cell = [](const auto& v) { return v ? std::to_string(*v) : std::string(); };
  out << r.delta.str(digits) << ',' << cell(r.t_s) << ',' << cell(r.t1) << ','
      << cell(r.t2) << ',' << cell(r.flat_len) << ','
      << (r.t3_window ? std::to_string(r.t3_window->first) : "") << ','
      << (r.t3_window ? std::to_string(r.t3_window->second) : "") << ','
      << r.predicted_threshold.str(digits) << ','
      << (r.peak_gap_after_threshold ? r.peak_gap_after_threshold->str(digits) : "") << ','
      << cell(r.peak_iteration) << ',' << (r.t2 ? "true" : "false");
  return out.str();
}

}  // namespace optimist
