#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "optimist/analysis.hpp"
#include "optimist/commands.hpp"
#include "optimist/svg.hpp"

using namespace optimist;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("optimist_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  // Runs the real executable and returns its exit status.
  int shell(const std::string& args) const {
    const std::string cmd = std::string(OPTIMIST_CLI_PATH) + " " + args + " > " +
                            path("stdout.txt") + " 2> " + path("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path dir_;
};

RunConfig config(const std::string& out, const std::string& game, std::size_t iters) {
  RunConfig c;
  c.eta = "0.1";
  c.game = game;
  c.iters = iters;
  c.out = out;
  return c;
}

// Tag-balance check: every opened element closes in order.
bool well_formed_xml(const std::string& doc) {
  std::vector<std::string> stack;
  const std::regex tag(R"(<(/?)([A-Za-z_][\w:.-]*)[^>]*?(/?)>)");
  for (auto it = std::sregex_iterator(doc.begin(), doc.end(), tag); it != std::sregex_iterator();
       ++it) {
    const auto& m = *it;
    if (m[3] == "/") continue;
    if (m[1] == "/") {
      if (stack.empty() || stack.back() != m[2]) return false;
      stack.pop_back();
    } else {
      stack.push_back(m[2]);
    }
  }
  return stack.empty() && doc.find("<svg") != std::string::npos;
}

}  // namespace

TEST_F(Cli, SingleIterationWritesOneUniformRow) {
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run(config(path("t.csv"), "hard:0.01", 1), out, err), kExitOk) << err.str();
  EXPECT_EQ(slurp(path("t.csv")), "t,x1,y1,gap,Ex,Ey,eta_t,clamps\n1,0.5,0.5,0.25,0.005,0.495,0.1,0\n");
  const std::string meta = slurp(path("t.csv.meta"));
  EXPECT_NE(meta.find("dynamics=OMWU"), std::string::npos);
  EXPECT_NE(meta.find("iters=1"), std::string::npos);
}

TEST_F(Cli, RunIsDeterministicIncludingMetadata) {
  std::ostringstream out, err;
  RunConfig c = config(path("a.csv"), "hard:0.05", 200);
  c.svg = true;
  ASSERT_EQ(cmd_run(c, out, err), kExitOk);
  c.out = path("b.csv");
  ASSERT_EQ(cmd_run(c, out, err), kExitOk);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_EQ(slurp(path("a.svg")), slurp(path("b.svg")));
  std::string ma = slurp(path("a.csv.meta"));
  std::string mb = slurp(path("b.csv.meta"));
  EXPECT_EQ(ma, mb);
}

TEST_F(Cli, StagesFromCsvReproduceInMemoryReport) {
  std::ostringstream out, err;
  RunConfig c = config(path("t.csv"), "hard:0.05", 1200);
  c.full_precision = true;
  ASSERT_EQ(cmd_run(c, out, err), kExitOk);

  const PreparedRun p = prepare_run(c);
  const Trajectory traj = run(p.game, p.spec, c.iters);
  const StageReport mem =
      detect_stages(traj, *p.hard_delta, Regularizer(p.ctx, p.spec.kind).constants());

  StagesConfig s;
  s.csv = path("t.csv");
  s.delta = "0.05";
  s.eta = "0.1";
  s.digits = 0;
  std::ostringstream report;
  ASSERT_EQ(cmd_stages(s, report, err), kExitOk) << err.str();
  EXPECT_EQ(report.str(), to_key_value(mem, 0));
  EXPECT_NE(report.str().find("T2=560"), std::string::npos);
}

TEST_F(Cli, ShortRunReportsAbsentStages) {
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run(config(path("t.csv"), "hard:0.01", 10), out, err), kExitOk);
  StagesConfig s{path("t.csv"), "0.01", "entropy", "0.1", 64, 10};
  std::ostringstream report;
  ASSERT_EQ(cmd_stages(s, report, err), kExitOk);
  EXPECT_NE(report.str().find("T_s=none"), std::string::npos);
  EXPECT_NE(report.str().find("T2=none"), std::string::npos);
}

TEST_F(Cli, StagesRejectsMalformedCsv) {
  std::ofstream(path("bad.csv")) << "t,x1\n1,0.5\n";
  std::ostringstream out, err;
  StagesConfig s{path("bad.csv"), "0.01", "entropy", "0.1", 64, 10};
  EXPECT_EQ(cmd_stages(s, out, err), kExitInvalid);
  EXPECT_NE(err.str().find("error:"), std::string::npos);
}

TEST_F(Cli, ValidationErrors) {
  std::ostringstream out, err;
  RunConfig c = config(path("t.csv"), "hard:0.01", 5);
  c.reg = "tsallis:1.5";
  EXPECT_EQ(cmd_run(c, out, err), kExitInvalid);
  c.reg = "tsallis:0.5";
  EXPECT_EQ(cmd_run(c, out, err), kExitOk);
  c.precision = 8;
  EXPECT_EQ(cmd_run(c, out, err), kExitInvalid);
  c.precision = 64;
  c.game = "file:" + path("missing.txt");
  EXPECT_EQ(cmd_run(c, out, err), kExitInvalid);
  c.game = "hard:0.7";
  EXPECT_EQ(cmd_run(c, out, err), kExitInvalid);
  c.game = "square";
  EXPECT_EQ(cmd_run(c, out, err), kExitInvalid);
  c.game = "hard:0.01";
  c.adagrad_eps = "0.1";
  EXPECT_EQ(cmd_run(c, out, err), kExitInvalid);  // both stepsize fields set
}

TEST_F(Cli, FileAndLiftGames) {
  std::ofstream(path("g.txt")) << "3 3 1\n1 0 0\n0 1 0\n0 0.5 1\n";
  std::ostringstream out, err;
  RunConfig c = config(path("f.csv"), "file:" + path("g.txt"), 50);
  c.algo = "oomd";
  c.reg = "euclid";
  ASSERT_EQ(cmd_run(c, out, err), kExitOk) << err.str();
  c = config(path("l.csv"), "lift:0.05:3", 20);
  ASSERT_EQ(cmd_run(c, out, err), kExitOk) << err.str();
  EXPECT_NE(slurp(path("l.csv.meta")).find("game_dims=6x6"), std::string::npos);
}

TEST_F(Cli, SvgHasBothPanelsAndIsWellFormed) {
  std::ostringstream out, err;
  RunConfig c = config(path("t.csv"), "hard:0.05", 600);
  c.svg = true;
  c.log_gap = true;
  ASSERT_EQ(cmd_run(c, out, err), kExitOk);
  const std::string svg = slurp(path("t.svg"));
  EXPECT_TRUE(well_formed_xml(svg));
  EXPECT_EQ(std::count(svg.begin(), svg.end(), '\n') > 5, true);
  std::size_t polylines = 0;
  for (std::size_t at = svg.find("<polyline"); at != std::string::npos;
       at = svg.find("<polyline", at + 1)) {
    ++polylines;
  }
  EXPECT_EQ(polylines, 2u);
  EXPECT_NE(svg.find("gap (log scale)"), std::string::npos);
  EXPECT_NE(svg.find("stroke-dasharray"), std::string::npos);  // stage markers
}

TEST(Svg, SingleSampleAndEscaping) {
  PlotOptions o;
  o.title = "a < b & c";
  const std::string svg = render_svg({PlotSample{1, 0.5, 0.5, 0.25, -0.6}}, o);
  EXPECT_TRUE(well_formed_xml(svg));
  EXPECT_NE(svg.find("a &lt; b &amp; c"), std::string::npos);
  EXPECT_TRUE(well_formed_xml(render_svg({}, o)));
  EXPECT_EQ(svg_path_for("out/t.csv"), "out/t.svg");
  EXPECT_EQ(svg_path_for("out.d/t"), "out.d/t.svg");
}

TEST_F(Cli, VerifyExitCodes) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_verify(VerifyConfig{"euclid", "auto", 40, 10}, out, err), kExitOk);
  EXPECT_NE(out.str().find("status=pass"), std::string::npos);
  std::ostringstream ent;
  EXPECT_EQ(cmd_verify(VerifyConfig{"entropy", "auto", 40, 10}, ent, err), kExitOk);
  EXPECT_NE(ent.str().find("entropy_delta_prime_discrepancy"), std::string::npos);
  std::ostringstream far;
  EXPECT_EQ(cmd_verify(VerifyConfig{"logbar", "0.4", 40, 10}, far, err), kExitInvalid);
  EXPECT_NE(far.str().find("status=out-of-range"), std::string::npos);
  EXPECT_EQ(cmd_verify(VerifyConfig{"nope", "auto", 40, 10}, far, err), kExitInvalid);
}

TEST_F(Cli, LiftCheck) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_lift_check(LiftConfig{"entropy", "0.05", 1, "0.1", 50, 40, 10}, out, err), kExitOk);
  EXPECT_NE(out.str().find("max_half_sum_error=0.0"), std::string::npos);
  std::ostringstream five;
  EXPECT_EQ(cmd_lift_check(LiftConfig{"euclid", "0.05", 5, "0.1", 200, 40, 10}, five, err),
            kExitOk);
  EXPECT_EQ(cmd_lift_check(LiftConfig{"euclid", "0.05", 0, "0.1", 200, 40, 10}, five, err),
            kExitInvalid);
}

TEST_F(Cli, SweepEmptyAndDuplicates) {
  SweepConfig s;
  s.base.eta = "0.1";
  s.base.iters = 800;
  std::ostringstream out, err;
  ASSERT_EQ(cmd_sweep(s, out, err), kExitOk);
  EXPECT_EQ(out.str(), stage_csv_header() + "\n");
  s.deltas = {"0.05", "0.050", "0.1"};
  std::ostringstream rows, warn;
  ASSERT_EQ(cmd_sweep(s, rows, warn), kExitOk);
  EXPECT_NE(warn.str().find("duplicate delta 0.050"), std::string::npos);
  const std::string csv = rows.str();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  s.base.eta.reset();
  s.base.adagrad_eps = "0.1";
  EXPECT_EQ(cmd_sweep(s, rows, warn), kExitInvalid);
}

TEST_F(Cli, ExecutableExitCodes) {
  EXPECT_EQ(shell("run --algo oftrl --reg entropy --eta 0.1 --game hard:0.01 --iters 1 --out " +
                  path("t.csv")),
            0);
  EXPECT_EQ(slurp(path("t.csv")).substr(0, 30), "t,x1,y1,gap,Ex,Ey,eta_t,clamps");
  EXPECT_EQ(shell("run --reg tsallis:1.5 --eta 0.1 --game hard:0.01 --iters 1 --out " +
                  path("u.csv")),
            1);
  EXPECT_EQ(shell("run --eta 0.1 --game hard:0.01 --iters 1 --precision 8 --out " + path("u.csv")),
            1);
  EXPECT_EQ(shell("verify --reg logbar --delta 0.4"), 1);
  EXPECT_EQ(shell("verify --reg euclid --delta auto"), 0);
  EXPECT_EQ(shell("lift-check --reg euclid --n 5 --iters 50"), 0);
  EXPECT_EQ(shell("frobnicate"), 1);
  EXPECT_EQ(shell("sweep --eta 0.1 --iters 700 --deltas 0.05,0.1 --out " + path("s.csv")), 0);
  EXPECT_EQ(std::count(std::istreambuf_iterator<char>(*std::make_unique<std::ifstream>(path("s.csv"))),
                       std::istreambuf_iterator<char>(), '\n'),
            3);
}
