#include <gtest/gtest.h>

#include <sstream>

#include "optimist/dynamics.hpp"

using namespace optimist;

namespace {

AlgorithmSpec spec_for(Algorithm algo, const char* reg, const Real& eta) {
  return AlgorithmSpec{algo, parse_regularizer(reg), StepsizeSchedule::constant(eta)};
}

MatrixGame hard(const Context& ctx, const char* delta) {
  return hard_instance(ctx, HardInstanceParams(ctx.parse(delta)));
}

std::string dump(const Trajectory& traj) {
  std::ostringstream out;
  write_trajectory_csv(out, traj, 0);
  return out.str();
}

const char* const kKinds[] = {"entropy", "euclid", "logbar", "tsallis:0.5"};

}  // namespace

TEST(Stepsize, ScheduleValidationAndDescription) {
  const Context ctx(30);
  EXPECT_THROW(StepsizeSchedule::constant(ctx.zero()), std::invalid_argument);
  EXPECT_THROW(StepsizeSchedule::adagrad(ctx.integer(-1)), std::invalid_argument);
  EXPECT_EQ(StepsizeSchedule::constant(ctx.parse("0.1")).describe(), "constant(eta=0.1)");
  EXPECT_EQ(StepsizeSchedule::adagrad(ctx.parse("0.1")).describe(), "adagrad(epsilon=0.1)");
}

TEST(Stepsize, NextStepsizeExamples) {
  const Context ctx(40);
  const Tolerance tol = default_tolerance(ctx);
  const Real eps = ctx.parse("0.1");
  const RealVector loss{ctx.parse("0.51"), ctx.parse("0.5")};
  EXPECT_EQ(next_stepsize(StepsizeSchedule::constant(eps), {loss, loss}), eps);
  EXPECT_TRUE(approx_equal(next_stepsize(StepsizeSchedule::adagrad(eps), {}),
                           1 / sqrt(eps), tol));
  EXPECT_TRUE(approx_equal(next_stepsize(StepsizeSchedule::adagrad(eps), {loss}),
                           1 / sqrt(eps + ctx.parse("0.51") * ctx.parse("0.51") +
                                    ctx.parse("0.25")),
                           tol));
}

TEST(AlgorithmSpec, DisplayNames) {
  const Context ctx(30);
  const Real eta = ctx.parse("0.1");
  EXPECT_EQ(spec_for(Algorithm::OFTRL, "entropy", eta).display_name(), "OMWU");
  EXPECT_EQ(spec_for(Algorithm::OOMD, "entropy", eta).display_name(), "OMWU");
  EXPECT_EQ(spec_for(Algorithm::OOMD, "euclid", eta).display_name(), "OGDA");
  EXPECT_EQ(spec_for(Algorithm::OFTRL, "logbar", eta).display_name(), "OFTRL-logbar");
}

TEST(Run, FirstIterateIsUniform) {
  const Context ctx(30);
  const Real eta = ctx.parse("0.1");
  const MatrixGame g3(ctx, 3, 2,
                      {ctx.one(), ctx.zero(), ctx.ratio(1, 3), ctx.one(), ctx.zero(), ctx.ratio(1, 2)},
                      ctx.one());
  for (const char* reg : kKinds) {
    for (Algorithm a : {Algorithm::OFTRL, Algorithm::OOMD}) {
      const Trajectory t = run(g3, spec_for(a, reg, eta), 1);
      ASSERT_EQ(t.size(), 1u);
      for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_TRUE(approx_equal(t.back().x[i], ctx.ratio(1, 3), default_tolerance(ctx)));
      }
      EXPECT_EQ(t.back().y[0], ctx.ratio(1, 2));
      const Trajectory h = run(hard(ctx, "0.01"), spec_for(a, reg, eta), 1);
      EXPECT_EQ(h.back().x[0], ctx.ratio(1, 2));
    }
  }
}

TEST(Run, SecondIterateByHand) {
  const Context ctx(50);
  const Real eta = ctx.parse("0.1");
  const Trajectory t = run_oftrl(hard(ctx, "0.01"), spec_for(Algorithm::OFTRL, "entropy", eta), 2);
  // e^1_x = -1/2 + (1 + 0.01) / 2 = 0.005; the optimistic step doubles it.
  const Real e1 = ctx.parse("0.005");
  EXPECT_TRUE(approx_equal(*t.records()[0].cum_diff_x, e1, default_tolerance(ctx)));
  const Regularizer r(ctx, RegularizerKind::entropy());
  EXPECT_TRUE(approx_equal(t.records()[1].x[0], r.f_eta(eta, e1 * 2), default_tolerance(ctx)));
}

TEST(Run, WrongAlgorithmOrIterationsRejected) {
  const Context ctx(30);
  const Real eta = ctx.parse("0.1");
  const MatrixGame g = hard(ctx, "0.1");
  EXPECT_THROW(run_oftrl(g, spec_for(Algorithm::OOMD, "euclid", eta), 5), std::invalid_argument);
  EXPECT_THROW(run_oomd(g, spec_for(Algorithm::OFTRL, "euclid", eta), 5), std::invalid_argument);
  EXPECT_THROW(run(g, spec_for(Algorithm::OFTRL, "euclid", eta), 0), std::invalid_argument);
  const Context other(40);
  EXPECT_THROW(run(g, spec_for(Algorithm::OFTRL, "euclid", other.parse("0.1")), 3),
               PrecisionMismatch);
}

TEST(Run, EntropyOftrlEqualsEntropyOomd) {
  const Context ctx(60);
  const Tolerance tol = default_tolerance(ctx);
  const Real eta = ctx.parse("0.1");
  const MatrixGame g = hard(ctx, "0.01");
  const Trajectory a = run_oftrl(g, spec_for(Algorithm::OFTRL, "entropy", eta), 500);
  const Trajectory b = run_oomd(g, spec_for(Algorithm::OOMD, "entropy", eta), 500);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    ASSERT_TRUE(approx_equal(a.records()[k].x[0], b.records()[k].x[0], tol)) << k;
    ASSERT_TRUE(approx_equal(a.records()[k].y[0], b.records()[k].y[0], tol)) << k;
  }
  EXPECT_TRUE(b.back().x_hat.has_value());
  EXPECT_FALSE(a.back().x_hat.has_value());
}

TEST(Run, TwoActionSelfConsistency) {
  const Context ctx(50);
  const Tolerance tol = default_tolerance(ctx);
  const Real eta = ctx.parse("0.1");
  for (const char* reg : kKinds) {
    const Regularizer r(ctx, parse_regularizer(reg));
    const Trajectory t = run_oftrl(hard(ctx, "0.05"), spec_for(Algorithm::OFTRL, reg, eta), 150);
    for (std::size_t k = 1; k < t.size(); ++k) {
      const Record& prev = t.records()[k - 1];
      const Real e_prev = prev.loss_x[0] - prev.loss_x[1];
      ASSERT_TRUE(approx_equal(t.records()[k].x[0], r.f_eta(eta, *prev.cum_diff_x + e_prev), tol))
          << reg << " t=" << k + 1;
    }
  }
}

TEST(Run, RecordedGapAndLossRanges) {
  const Context ctx(40);
  const Tolerance tol = default_tolerance(ctx);
  const Real delta = ctx.parse("0.05");
  const MatrixGame g = hard_instance(ctx, HardInstanceParams(delta));
  for (const char* reg : kKinds) {
    const Trajectory t = run(g, spec_for(Algorithm::OOMD, reg, ctx.parse("0.2")), 200);
    for (const Record& r : t.records()) {
      ASSERT_TRUE(approx_equal(r.gap, duality_gap(g, r.x, r.y), tol));
      const Real ex = r.loss_x[0] - r.loss_x[1];
      const Real ey = r.loss_y[0] - r.loss_y[1];
      ASSERT_GE(ex, -ctx.ratio(1, 2));
      ASSERT_LE(ex, ctx.ratio(1, 2) + delta);
      ASSERT_GE(ey + tol.abs, -delta);
      ASSERT_LE(ey, 1);
    }
  }
}

TEST(Run, Deterministic) {
  const Context ctx(40);
  const auto spec = spec_for(Algorithm::OFTRL, "tsallis:0.5", ctx.parse("0.1"));
  EXPECT_EQ(dump(run(hard(ctx, "0.05"), spec, 100)), dump(run(hard(ctx, "0.05"), spec, 100)));
}

TEST(Run, PrecisionRefinementStable) {
  const int p = 40;
  const Context lo(p);
  const Context hi(2 * p);
  for (const char* reg : {"entropy", "logbar"}) {
    const Trajectory a =
        run(hard(lo, "0.05"), spec_for(Algorithm::OFTRL, reg, lo.parse("0.1")), 400);
    const Trajectory b =
        run(hard(hi, "0.05"), spec_for(Algorithm::OFTRL, reg, hi.parse("0.1")), 400);
    const Real bound = hi.pow10(-(p - 20));
    for (std::size_t k = 0; k < a.size(); ++k) {
      // Compare through the canonical strings, which are exact at each precision.
      const Real xa = hi.parse(a.records()[k].x[0].str());
      const Real ga = hi.parse(a.records()[k].gap.str());
      ASSERT_LE(abs(xa - b.records()[k].x[0]), bound) << reg << " t=" << k + 1;
      ASSERT_LE(abs(ga - b.records()[k].gap), bound) << reg << " t=" << k + 1;
    }
  }
}

TEST(Run, AdaGradStepsizesFollowOwnLosses) {
  const Context ctx(40);
  const Tolerance tol = default_tolerance(ctx);
  const Real eps = ctx.parse("0.1");
  const AlgorithmSpec spec{Algorithm::OFTRL, RegularizerKind::entropy(),
                           StepsizeSchedule::adagrad(eps)};
  const Trajectory t = run(hard(ctx, "0.01"), spec, 20);
  std::vector<RealVector> hx;
  std::vector<RealVector> hy;
  for (const Record& r : t.records()) {
    ASSERT_TRUE(approx_equal(r.eta_x, next_stepsize(spec.schedule, hx), tol));
    ASSERT_TRUE(approx_equal(r.eta_y, next_stepsize(spec.schedule, hy), tol));
    hx.push_back(r.loss_x);
    hy.push_back(r.loss_y);
  }
  EXPECT_NE(t.back().eta_x, t.back().eta_y);
}

TEST(Run, ThinningKeepsMarkedRecordsAndObserverSeesAll) {
  const Context ctx(30);
  const auto spec = spec_for(Algorithm::OFTRL, "entropy", ctx.parse("0.1"));
  std::size_t seen = 0;
  RunOptions options;
  options.thin = 50;
  options.observer = [&seen](const Record&) { ++seen; };
  options.keep = [](const Record&, const Record& cur) { return cur.t == 77; };
  const Trajectory t = run(hard(ctx, "0.05"), spec, 230, options);
  EXPECT_EQ(seen, 230u);
  EXPECT_EQ(t.iterations(), 230u);
  std::vector<std::size_t> ts;
  for (const Record& r : t.records()) ts.push_back(r.t);
  EXPECT_EQ(ts, (std::vector<std::size_t>{1, 50, 77, 100, 150, 200, 230}));
  EXPECT_THROW(run(hard(ctx, "0.05"), spec, 10, RunOptions{0, {}, {}}), std::invalid_argument);
}

TEST(Trajectory, AppendOnlyInOrder) {
  const Context ctx(30);
  const auto spec = spec_for(Algorithm::OFTRL, "entropy", ctx.parse("0.1"));
  Trajectory t = run(hard(ctx, "0.05"), spec, 3);
  Record early = t.records()[0];
  EXPECT_THROW(t.append(early), std::logic_error);
}

TEST(Csv, RoundTripAtFullPrecision) {
  const Context ctx(40);
  const auto spec = spec_for(Algorithm::OFTRL, "logbar", ctx.parse("0.1"));
  const Trajectory t = run(hard(ctx, "0.05"), spec, 60);
  std::stringstream buf;
  write_trajectory_csv(buf, t, 0);
  const auto rows = read_trajectory_csv(buf, ctx);
  ASSERT_EQ(rows.size(), t.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Record& r = t.records()[k];
    EXPECT_EQ(rows[k].t, r.t);
    EXPECT_EQ(rows[k].x1, r.x[0]);
    EXPECT_EQ(rows[k].y1, r.y[0]);
    EXPECT_EQ(rows[k].gap, r.gap);
    EXPECT_EQ(*rows[k].ex, *r.cum_diff_x);
    EXPECT_EQ(rows[k].eta, r.eta_x);
  }
}

TEST(Csv, TruncatedDigitsAndBlankColumnsForLargerGames) {
  const Context ctx(40);
  const MatrixGame g(ctx, 3, 3,
                     {ctx.one(), ctx.zero(), ctx.zero(), ctx.zero(), ctx.one(), ctx.zero(),
                      ctx.zero(), ctx.zero(), ctx.one()},
                     ctx.one());
  const Trajectory t = run(g, spec_for(Algorithm::OOMD, "euclid", ctx.parse("0.1")), 3);
  std::stringstream buf;
  write_trajectory_csv(buf, t, 5);
  std::string header;
  std::string first;
  std::getline(buf, header);
  std::getline(buf, first);
  EXPECT_EQ(header, "t,x1,y1,gap,Ex,Ey,eta_t,clamps");
  EXPECT_EQ(first, "1,0.33333,0.33333,0.0,,,0.1,0");
  buf.clear();
  buf.seekg(0);
  const auto rows = read_trajectory_csv(buf, ctx);
  EXPECT_FALSE(rows[0].ex.has_value());
}

TEST(Csv, MalformedInputRejected) {
  const Context ctx(30);
  std::istringstream bad_header("t,x,y\n");
  EXPECT_THROW(read_trajectory_csv(bad_header, ctx), std::runtime_error);
  std::istringstream short_row("t,x1,y1,gap,Ex,Ey,eta_t,clamps\n1,0.5,0.5\n");
  EXPECT_THROW(read_trajectory_csv(short_row, ctx), std::runtime_error);
  std::istringstream bad_value("t,x1,y1,gap,Ex,Ey,eta_t,clamps\n1,0.5,zz,0.1,,,0.1,0\n");
  EXPECT_THROW(read_trajectory_csv(bad_value, ctx), std::runtime_error);
  std::istringstream empty("");
  EXPECT_THROW(read_trajectory_csv(empty, ctx), std::runtime_error);
}

TEST(Run, OgdaGapShrinks) {
  const Context ctx(30);
  const auto spec = spec_for(Algorithm::OOMD, "euclid", ctx.parse("0.1"));
  const Trajectory t = run(hard(ctx, "0.01"), spec, 4000);
  EXPECT_LT(t.back().gap, t.records()[99].gap / 10);
}
