#include <algorithm>
#include <cmath>
#include <sys/wait.h>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <regex>
#include <sstream>

#include <gtest/gtest.h>

#include "commands.hpp"
#include "impmatch/config.hpp"
#include "impmatch/io.hpp"
#include "impmatch/presets.hpp"

namespace impmatch::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("impmatch_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& content) const {
    io::write_file(path(name), content);
    return path(name);
  }

  int run_cli(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run(args, out_, err_);
  }

  static std::string slurp(const std::string& p) { return io::read_file(p); }

  BodeMagnitude read_bode(const std::string& p) const {
    std::istringstream in(slurp(p));
    return io::read_bode(in);
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

constexpr const char* kShortSweep = R"({"excitation": {"chirp": {"duration": 2}}})";

TEST_F(CliTest, SweepWritesOneRowPerLogSample) {
  const auto cfg = write("c.json", kShortSweep);
  ASSERT_EQ(run_cli({"sweep", "--config", cfg, "--out", path("ts.csv")}), kExitOk) << err_.str();
  std::istringstream in(slurp(path("ts.csv")));
  const auto ts = io::read_time_series(in);
  EXPECT_EQ(ts.size(), 2001u);
}

TEST_F(CliTest, ZeroAmplitudeSweepIsAllZero) {
  const auto cfg = write("c.json", R"({"excitation": {"chirp": {"duration": 2, "amplitude": 0}}})");
  ASSERT_EQ(run_cli({"sweep", "--config", cfg, "--out", path("ts.csv")}), kExitOk);
  std::istringstream in(slurp(path("ts.csv")));
  for (double y : io::read_time_series(in).measured) ASSERT_EQ(y, 0.0);
}

TEST_F(CliTest, DivergentSweepExitsWithNumericError) {
  const auto cfg = write("c.json", R"({
    "actuator_sim": {"params": {"link_inertia": 1e-6, "rotor_inertia": 0},
                     "gains": {"kp": 27, "kd": 0},
                     "sim": {"inner_loop_rate": 1000, "log_rate": 1000}},
    "excitation": {"chirp": {"duration": 10}}})");
  EXPECT_EQ(run_cli({"sweep", "--config", cfg, "--out", path("ts.csv")}), kExitNumeric);
  EXPECT_NE(err_.str().find("diverged"), std::string::npos);
}

TEST_F(CliTest, ExitCodeContract) {
  EXPECT_EQ(run_cli({"sweep", "--config", path("missing.json"), "--out", path("x.csv")}), kExitIo);
  const auto bad = write("bad.json", R"({"actuator_sim": {"gains": {"kP": 1}}})");
  EXPECT_EQ(run_cli({"sweep", "--config", bad, "--out", path("x.csv")}), kExitValidation);
  EXPECT_NE(err_.str().find("kP"), std::string::npos);
  EXPECT_EQ(run_cli({"frobnicate"}), kExitValidation);
  EXPECT_EQ(run_cli({"bode"}), kExitValidation);
  const auto cfg = write("c.json", kShortSweep);
  EXPECT_EQ(run_cli({"bode", "--config", cfg, "--out", path("no/such/dir/b.csv")}), kExitIo);
}

std::string gain_series_csv(double gain) {
  std::ostringstream os;
  os << "t,theta_des,theta_meas\n";
  for (int k = 0; k < 4000; ++k) {
    const double u = std::sin(0.001 * k * k);
    os << io::format_double(k / 1000.0) << ',' << io::format_double(u) << ','
       << io::format_double(gain * u) << '\n';
  }
  return os.str();
}

TEST_F(CliTest, EstimateIdentityAndGain) {
  const auto id = write("id.csv", gain_series_csv(1.0));
  ASSERT_EQ(run_cli({"estimate", "--in", id, "--window", "0.5", "--out", path("id_bode.csv")}),
            kExitOk) << err_.str();
  for (double db : read_bode(path("id_bode.csv")).magnitude_db) ASSERT_NEAR(db, 0.0, 1e-9);

  const auto half = write("half.csv", gain_series_csv(0.5));
  ASSERT_EQ(run_cli({"estimate", "--in", half, "--window", "0.5", "--overlap", "0.25", "--out",
                     path("half_bode.csv")}),
            kExitOk);
  for (double db : read_bode(path("half_bode.csv")).magnitude_db) ASSERT_NEAR(db, -6.0206, 1e-4);
}

TEST_F(CliTest, EstimatedSweepMatchesBodeCommand) {
  ASSERT_EQ(run_cli({"sweep", "--out", path("ts.csv")}), kExitOk);
  ASSERT_EQ(run_cli({"estimate", "--in", path("ts.csv"), "--out", path("est.csv")}), kExitOk);
  const auto cfg = write("c.json", R"({"freq_analysis": {"bode_grid": {"f_min": 0.5, "f_max": 15, "points": 400}}})");
  ASSERT_EQ(run_cli({"bode", "--config", cfg, "--out", path("bode.csv")}), kExitOk);
  const auto est = read_bode(path("est.csv"));
  const auto closed = read_bode(path("bode.csv"));
  for (std::size_t i = 0; i < est.size(); ++i) {
    const double f = est.frequencies[i];
    if (f < 0.5 || f > 15.0) continue;
    ASSERT_NEAR(est.magnitude_db[i], interpolate_db(closed, f), 0.5) << f << " Hz";
  }
}

TEST_F(CliTest, BodeShape) {
  ASSERT_EQ(run_cli({"bode", "--out", path("b.csv")}), kExitOk);
  const auto b = read_bode(path("b.csv"));
  EXPECT_EQ(b.size(), 200u);
  EXPECT_EQ(b.frequencies.front(), 0.05);
  EXPECT_EQ(b.frequencies.back(), 50.0);
  EXPECT_NEAR(b.magnitude_db.front(), 0.0, 0.01);

  // Training knee gains on a plant whose inertia is the reflected rotor alone.
  const auto knee = write("knee.json", R"({"actuator_sim": {
      "params": {"link_inertia": 0.0063, "rotor_inertia": 0},
      "gains": {"kp": 21.5, "kd": 0.55}},
    "freq_analysis": {"bode_grid": {"points": 2000}}})");
  ASSERT_EQ(run_cli({"bode", "--config", knee, "--out", path("knee.csv")}), kExitOk);
  // Undamped natural frequency sits at 9.3 Hz; the feedforward zero and damping pull
  // the magnitude peak down to about 7.2 Hz.
  EXPECT_NEAR(std::sqrt(21.5 / 0.0063) / (2.0 * std::numbers::pi), 9.3, 0.05);
  const auto peak_f = peak_magnitude(read_bode(path("knee.csv"))).first;
  EXPECT_NEAR(peak_f, 7.20, 0.02);

  const auto undamped = write("u.json", R"({"actuator_sim": {"gains": {"kp": 17, "kd": 0}},
    "freq_analysis": {"bode_grid": {"f_min": 0.05, "f_max": 1000, "points": 200}}})");
  ASSERT_EQ(run_cli({"bode", "--config", undamped, "--out", path("u.csv")}), kExitOk);
  const auto u = read_bode(path("u.csv"));
  EXPECT_NEAR(u.magnitude_db.back() - interpolate_db(u, 100.0), -40.0, 0.5);
}

std::string best_cell_attr(const std::string& svg, const std::string& attr) {
  const std::regex re("id=\"best-cell\"[^>]*" + attr + "=\"([^\"]+)\"");
  std::smatch m;
  if (!std::regex_search(svg, m, re)) return {};
  return m[1];
}

TEST_F(CliTest, MatchSelfReferenceAndArtifacts) {
  // Reference generated on a grid point of a small grid.
  const auto cfg = write("c.json", R"({
    "actuator_sim": {"gains": {"kp": 17, "kd": 0.4}},
    "matcher": {"grid": {"kp_range": [13, 21], "kd_range": [0.2, 0.6], "kp_count": 9, "kd_count": 5}}})");
  ASSERT_EQ(run_cli({"bode", "--config", cfg, "--out", path("ref.csv")}), kExitOk);
  ASSERT_EQ(run_cli({"match", "--config", cfg, "--reference", path("ref.csv"), "--out", path("m")}),
            kExitOk) << err_.str();
  for (auto f : {"surface.csv", "summary.json", "heatmap.svg", "bode_overlay.svg"}) {
    EXPECT_TRUE(fs::exists(dir_ / "m" / f)) << f;
  }
  const auto summary = slurp(path("m/summary.json"));
  EXPECT_EQ(best_gains_from_summary(summary), (PDGains{17.0, 0.4}));
  EXPECT_NE(summary.find("\"best_error\": 0.0"), std::string::npos) << summary;

  const auto svg = slurp(path("m/heatmap.svg"));
  EXPECT_EQ(std::stod(best_cell_attr(svg, "data-kp")), 17.0);
  EXPECT_EQ(std::stod(best_cell_attr(svg, "data-kd")), 0.4);

  const auto surface = slurp(path("m/surface.csv"));
  EXPECT_EQ(surface.rfind("kp,kd,mse_db2\n13,0.2,", 0), 0u);
  EXPECT_EQ(std::count(surface.begin(), surface.end(), '\n'), 46);
}

TEST_F(CliTest, MatchIsDeterministicAcrossRunsAndWorkers) {
  ASSERT_EQ(run_cli({"sweep", "--seed", "3", "--out", path("ts.csv")}), kExitOk);
  ASSERT_EQ(run_cli({"estimate", "--in", path("ts.csv"), "--out", path("ref.csv")}), kExitOk);
  ASSERT_EQ(run_cli({"match", "--reference", path("ref.csv"), "--out", path("a"), "--workers", "1"}),
            kExitOk);
  ASSERT_EQ(run_cli({"match", "--reference", path("ref.csv"), "--out", path("b"), "--workers", "4"}),
            kExitOk);
  for (auto f : {"surface.csv", "summary.json", "heatmap.svg", "bode_overlay.svg"}) {
    EXPECT_EQ(slurp(path(std::string("a/") + f)), slurp(path(std::string("b/") + f))) << f;
  }
  const auto summary = best_gains_from_summary(slurp(path("a/summary.json")));
  EXPECT_NEAR(summary.kp, 17.0, 14.0 / 49.0);
  EXPECT_NEAR(summary.kd, 0.4, 0.6 / 49.0);
  const auto svg = slurp(path("a/heatmap.svg"));
  EXPECT_EQ(std::stod(best_cell_attr(svg, "data-kp")), summary.kp);
  EXPECT_EQ(std::stod(best_cell_attr(svg, "data-kd")), summary.kd);
}

TEST_F(CliTest, MatchZeroArmatureReportsLargeError) {
  ASSERT_EQ(run_cli({"sweep", "--out", path("ts.csv")}), kExitOk);
  ASSERT_EQ(run_cli({"estimate", "--in", path("ts.csv"), "--out", path("ref.csv")}), kExitOk);
  const auto bare = write("bare.json", R"({"actuator_sim": {"params": {"rotor_inertia": 0}}})");
  ASSERT_EQ(run_cli({"match", "--config", bare, "--reference", path("ref.csv"), "--out", path("m")}),
            kExitOk);
  const auto summary = slurp(path("m/summary.json"));
  std::smatch m;
  ASSERT_TRUE(std::regex_search(summary, m, std::regex("\"best_error\": ([0-9.eE+-]+)")));
  EXPECT_GT(std::stod(m[1]), 1.0);
}

std::string summary_for(double kp, double kd) {
  std::ostringstream os;
  os << R"({"best_gains": {"kp": )" << io::format_double(kp) << R"(, "kd": )"
     << io::format_double(kd) << "}}";
  return os.str();
}

TEST_F(CliTest, RangesFromKneeSummaries) {
  const auto knee = presets::matched_gains(presets::Joint::kKnee);
  std::vector<std::string> args{"ranges"};
  for (std::size_t i = 0; i < 4; ++i) {
    args.push_back(write("k" + std::to_string(i) + ".json", summary_for(knee.kp[i], knee.kd[i])));
  }
  args.insert(args.end(), {"--margin", "1.0", "--out", path("r.json")});
  ASSERT_EQ(run_cli(args), kExitOk) << err_.str();
  const auto json = slurp(path("r.json"));
  EXPECT_NE(json.find("\"nominal\": 22.0"), std::string::npos) << json;
  EXPECT_NE(json.find("\"half_range\": 0.5"), std::string::npos) << json;
  EXPECT_NE(json.find("\"all_covered\": true"), std::string::npos);
}

TEST_F(CliTest, RangesHipPitchMarginAndIdenticalInputs) {
  const auto hp = presets::matched_gains(presets::Joint::kHipPitch);
  std::vector<std::string> args{"ranges"};
  for (std::size_t i = 0; i < 4; ++i) {
    args.push_back(write("h" + std::to_string(i) + ".json", summary_for(hp.kp[i], hp.kd[i])));
  }
  args.insert(args.end(), {"--margin", "1.5", "--out", path("r.json")});
  ASSERT_EQ(run_cli(args), kExitOk);
  EXPECT_NE(slurp(path("r.json")).find("\"half_range\": 2.5"), std::string::npos);

  const auto a = write("a.json", summary_for(17.0, 0.4));
  const auto b = write("b.json", summary_for(17.0, 0.4));
  ASSERT_EQ(run_cli({"ranges", a, b, "--out", path("same.json")}), kExitOk);
  const auto same = slurp(path("same.json"));
  EXPECT_NE(same.find("\"half_range\": 0.5"), std::string::npos) << same;
  EXPECT_NE(same.find("\"half_range\": 0.05"), std::string::npos) << same;

  EXPECT_EQ(run_cli({"ranges", a, "--out", path("one.json")}), kExitValidation);
}

TEST_F(CliTest, RangesReportsUncoveredHipRollDamping) {
  const auto hr = presets::matched_gains(presets::Joint::kHipRoll);
  std::vector<std::string> args{"ranges"};
  for (std::size_t i = 0; i < 4; ++i) {
    args.push_back(write("r" + std::to_string(i) + ".json", summary_for(hr.kp[i], hr.kd[i])));
  }
  args.insert(args.end(), {"--kd-nominal", "0.45", "--kd-half-range", "0.05", "--out", path("r.json")});
  ASSERT_EQ(run_cli(args), kExitOk);
  const auto json = slurp(path("r.json"));
  EXPECT_NE(json.find("\"all_covered\": false"), std::string::npos) << json;
  EXPECT_NE(json.find("0.516"), std::string::npos);
  EXPECT_NE(err_.str().find("kd = 0.516"), std::string::npos) << err_.str();
}

TEST_F(CliTest, WidenGrowsShapeAndPreserves) {
  const MlpFirstLayer layer(3, 4, {0.1, 0.2, 0.3, 0.4, -1, -2, -3, -4, 5e-3, 6e-3, 7e-3, 8e-3},
                            {0.5, 0.25, -0.125});
  std::ostringstream os;
  io::write_layer(os, layer);
  const auto in = write("w.txt", os.str());
  ASSERT_EQ(run_cli({"widen", "--in", in, "--out", path("w2.txt"), "--self-test"}), kExitOk)
      << err_.str();
  std::istringstream back(slurp(path("w2.txt")));
  const auto widened = io::read_layer(back);
  EXPECT_EQ(widened.hidden(), 3u);
  EXPECT_EQ(widened.inputs(), 5u);
  EXPECT_EQ(widened, widen_input_layer(layer));

  // Canonical text survives a read/write cycle byte for byte.
  std::ostringstream canon;
  io::write_layer(canon, widened);
  EXPECT_EQ(canon.str(), slurp(path("w2.txt")));
}

TEST_F(CliTest, RepeatedRunsAreByteIdentical) {
  const auto cfg = write("c.json", R"({"excitation": {"chirp": {"duration": 5}},
    "actuator_sim": {"sim": {"measurement_noise_std": 0.002}}})");
  ASSERT_EQ(run_cli({"sweep", "--config", cfg, "--seed", "7", "--out", path("a.csv")}), kExitOk);
  ASSERT_EQ(run_cli({"sweep", "--config", cfg, "--seed", "7", "--out", path("b.csv")}), kExitOk);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  ASSERT_EQ(run_cli({"sweep", "--config", cfg, "--seed", "8", "--out", path("c.csv")}), kExitOk);
  EXPECT_NE(slurp(path("a.csv")), slurp(path("c.csv")));
}

TEST(CliBinaryTest, ProcessExitCodes) {
  const std::string exe = IMPMATCH_CLI_PATH;
  const auto out = (fs::temp_directory_path() / "impmatch_bin_bode.csv").string();
  EXPECT_EQ(std::system((exe + " bode --out " + out + " > /dev/null 2>&1").c_str()), 0);
  EXPECT_TRUE(fs::exists(out));
  fs::remove(out);
  const int status = std::system((exe + " bode --config /nonexistent.json --out " + out +
                                  " > /dev/null 2>&1").c_str());
  EXPECT_EQ(WEXITSTATUS(status), kExitIo);
}

}  // namespace
}  // namespace impmatch::cli
