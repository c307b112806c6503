#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "beamtrack/config.hpp"
#include "beamtrack/metrics.hpp"
#include "beamtrack/output.hpp"

using namespace beamtrack;

namespace {

ExperimentSpec small_static() {
  ExperimentSpec s = default_config(ExperimentKind::StaticConvergence).spec;
  s.n_trials = 37;
  s.n_slots = 300;
  s.seed = 17;
  s.algorithms = {AlgorithmKind::Recursive, AlgorithmKind::LeastSquares,
                  AlgorithmKind::CompressedSensing, AlgorithmKind::Wlan, AlgorithmKind::Kalman};
  s.record_slots = {1, 50, 300};
  return s;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Harness, OutputsAreIdenticalForAnyWorkerCount) {
  ExperimentSpec s = small_static();
  s.workers = 1;
  const auto a = run_experiment(s);
  s.workers = 3;
  const auto b = run_experiment(s);
  ASSERT_EQ(a.series.size(), b.series.size());
  for (std::size_t i = 0; i < a.series.size(); ++i) {
    EXPECT_EQ(a.series[i].mean, b.series[i].mean) << a.series[i].algorithm << a.series[i].metric;
    EXPECT_EQ(a.series[i].stderr_, b.series[i].stderr_);
  }

  const auto dir = std::filesystem::temp_directory_path() / "beamtrack_det";
  std::filesystem::remove_all(dir);
  RunConfig cfg;
  cfg.spec = s;
  write_outputs(a, cfg, (dir / "a").string());
  write_outputs(b, cfg, (dir / "b").string());
  for (const auto& e : std::filesystem::directory_iterator(dir / "a"))
    EXPECT_EQ(slurp(e.path()), slurp(dir / "b" / e.path().filename())) << e.path();
  std::filesystem::remove_all(dir);
}

TEST(Harness, SameSeedReplaysDifferentSeedDiffers) {
  ExperimentSpec s = small_static();
  s.algorithms = {AlgorithmKind::Recursive};
  const auto a = run_experiment(s);
  const auto b = run_experiment(s);
  s.seed = 18;
  const auto c = run_experiment(s);
  EXPECT_EQ(a.find("recursive", "mse_x")->mean, b.find("recursive", "mse_x")->mean);
  EXPECT_NE(a.find("recursive", "mse_x")->mean, c.find("recursive", "mse_x")->mean);
}

TEST(Harness, SeriesAreNonNegativeAndBelowCapacity) {
  const auto res = run_experiment(small_static());
  const double cap = capacity(ArrayConfig::make(16), 10.0);
  for (const auto& s : res.series) {
    for (double v : s.mean) {
      if (s.metric.rfind("mse", 0) == 0 || s.metric.rfind("n_mse", 0) == 0) EXPECT_GE(v, 0.0);
      if (s.metric == "rate") EXPECT_LE(v, cap + 1e-12);
    }
  }
}

TEST(Harness, DynamicRatesNeverExceedCapacityInAnySlot) {
  ExperimentSpec s = default_config(ExperimentKind::DynamicTrajectory).spec;
  s.n_trials = 4;
  s.n_slots = 400;
  s.algorithms = {AlgorithmKind::Recursive, AlgorithmKind::Angular, AlgorithmKind::LeastSquares,
                  AlgorithmKind::CompressedSensing, AlgorithmKind::Wlan, AlgorithmKind::Kalman};
  const auto res = run_experiment(s);
  const double cap = capacity(ArrayConfig::make(16), 10.0);
  for (const auto& per_alg : res.outcomes)
    for (const auto& o : per_alg) EXPECT_LE(o.mean_rate, cap + 1e-12);
  for (const auto& ser : res.series)
    if (ser.metric == "rate")
      for (double v : ser.mean) EXPECT_LE(v, cap + 1e-12);
}

TEST(Harness, ZeroVelocityMatchesTheStaticDirection) {
  ExperimentSpec s = default_config(ExperimentKind::DynamicTrajectory).spec;
  s.n_trials = 3;
  s.n_slots = 200;
  s.trajectory = FixedVelocity{0.0, kPi / 3, 0.25};
  const auto moving = run_experiment(s);
  s.trajectory = StaticDirection{std::sin(0.25)};
  const auto fixed = run_experiment(s);
  EXPECT_EQ(moving.find("recursive", "mse_x")->mean, fixed.find("recursive", "mse_x")->mean);
}

TEST(Harness, ValidationNamesTheField) {
  ExperimentSpec s = small_static();
  s.n_trials = 0;
  try {
    validate(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Config);
    EXPECT_EQ(e.field(), "trials");
  }
  s = small_static();
  s.data_antennas = 8;
  try {
    validate(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.field(), "array.data_antennas");
  }
}

TEST(Config, UnknownKeysAreRejectedWithTheirPath) {
  try {
    parse_config(ExperimentKind::StaticConvergence, R"({"array": {"antenas": 8}})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Config);
    EXPECT_EQ(e.field(), "array.antenas");
  }
  EXPECT_THROW(parse_config(ExperimentKind::StaticConvergence, "{not json"), Error);
  EXPECT_THROW(parse_config(ExperimentKind::StaticConvergence, R"({"snr_db": "ten"})"), Error);
}

TEST(Config, ResolvedEchoRoundTrips) {
  const RunConfig c = parse_config(ExperimentKind::VelocitySweep,
                                   R"({"seed": 5, "array": {"antennas": 8, "data_antennas": 16},
                                       "omegas": [0.0, 0.05], "algorithms": ["recursive", "kf"]})");
  EXPECT_EQ(c.spec.antennas, 8);
  EXPECT_FALSE(c.seed_was_random);
  const RunConfig again = parse_config(ExperimentKind::VelocitySweep, to_json(c));
  EXPECT_EQ(to_json(again), to_json(c));
  EXPECT_EQ(again.spec.omegas, c.spec.omegas);
  EXPECT_EQ(again.spec.algorithms, c.spec.algorithms);
}

TEST(Config, MissingSeedIsDrawnAndRecorded) {
  const RunConfig c = parse_config(ExperimentKind::StaticConvergence, "{}");
  EXPECT_TRUE(c.seed_was_random);
  const RunConfig again = parse_config(ExperimentKind::StaticConvergence, to_json(c));
  EXPECT_EQ(again.spec.seed, c.spec.seed);
}

TEST(Output, DoublesUseSeventeenSignificantDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
  EXPECT_EQ(format_double(std::nan("")), "nan");
  EXPECT_EQ(format_double(-INFINITY), "-inf");
}

TEST(Output, CsvHeaders) {
  ExperimentSpec s = small_static();
  s.algorithms = {AlgorithmKind::Recursive};
  s.n_trials = 2;
  const auto res = run_experiment(s);
  RunConfig cfg;
  cfg.spec = s;
  const auto dir = std::filesystem::temp_directory_path() / "beamtrack_csv";
  std::filesystem::remove_all(dir);
  write_outputs(res, cfg, dir.string());
  const std::string series = slurp(dir / "recursive_mse_h.csv");
  EXPECT_EQ(series.substr(0, series.find('\n')), "slot,metric,mean,stderr,n_trials");
  const std::string table = slurp(dir / "static_summary.csv");
  EXPECT_EQ(table.substr(0, table.find('\n')), "param,algorithm,value");
  EXPECT_TRUE(std::filesystem::exists(dir / "config.resolved.json"));
  for (const auto& e : std::filesystem::directory_iterator(dir))
    EXPECT_NE(e.path().filename().string().front(), '.');
  std::filesystem::remove_all(dir);
}
