#include <gtest/gtest.h>

#include <cmath>

#include "beamtrack/algorithm.hpp"
#include "beamtrack/analysis.hpp"
#include "beamtrack/trackers.hpp"

using namespace beamtrack;

TEST(Schedule, StepSizes) {
  const auto d = StepSizeSchedule::diminishing(0.5, 3.0);
  EXPECT_DOUBLE_EQ(d.step(1), 0.5 / 4.0);
  EXPECT_DOUBLE_EQ(d.step(7), 0.05);
  EXPECT_FALSE(d.is_fixed());
  const auto f = StepSizeSchedule::fixed(0.2);
  EXPECT_DOUBLE_EQ(f.step(1), 0.2);
  EXPECT_DOUBLE_EQ(f.step(1000000), 0.2);
  EXPECT_THROW(d.step(0), Error);
  EXPECT_THROW(StepSizeSchedule::fixed(0.0), Error);
  EXPECT_THROW(StepSizeSchedule::diminishing(1.0, -1.0), Error);
}

TEST(Trackers, AlphaStarForEightAntennas) {
  EXPECT_NEAR(alpha_star(ArrayConfig::make(8)), 2.0 / (7.0 * kPi * std::sqrt(8.0)), 1e-16);
  EXPECT_NEAR(alpha_star(ArrayConfig::make(8)), 0.03216, 1e-5);
  EXPECT_NEAR(alpha_star(ArrayConfig::make(8)) * lipschitz_constant(ArrayConfig::make(8)), 1.0,
              1e-14);
}

TEST(Trackers, SweepCodebookIsUnitary) {
  for (int M : {4, 8, 16}) {
    const auto cfg = ArrayConfig::make(M);
    const auto book = coarse_sweep_codebook(cfg);
    ASSERT_EQ(book.size(), static_cast<std::size_t>(M));
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M; ++j) {
        cplx g{0.0, 0.0};
        for (int m = 0; m < M; ++m) g += std::conj(book[i].weights()[m]) * book[j].weights()[m];
        EXPECT_NEAR(std::abs(g - cplx(i == j ? 1.0 : 0.0)), 0.0, 1e-12);
      }
    const auto dirs = sweep_directions(cfg);
    EXPECT_NEAR(dirs.front(), (1.0 - M) / M, 1e-15);
    EXPECT_NEAR(dirs.back(), (M - 1.0) / M, 1e-15);
  }
}

TEST(Trackers, NoiselessInitialEstimateIsNearestAtom) {
  const auto cfg = ArrayConfig::make(8);
  const auto book = coarse_sweep_codebook(cfg);
  const int m0 = 16;
  for (double x = -0.97; x < 0.97; x += 0.0131) {
    std::vector<Observation> obs;
    for (const auto& w : book) obs.push_back({array_response(w, cfg, x)});
    const double est = initial_estimate(cfg, obs, m0);
    double best = 10.0, best_atom = 0.0;
    for (int k = 1; k <= m0; ++k) {
      const double atom = (2.0 * k - 1.0 - m0) / m0;
      if (std::abs(atom - x) < best - 1e-12) {
        best = std::abs(atom - x);
        best_atom = atom;
      }
    }
    EXPECT_NEAR(est, best_atom, 1e-12) << "x=" << x;
  }
}

TEST(Trackers, InitialEstimateTiesPickSmallestAtom) {
  const auto cfg = ArrayConfig::make(4);
  std::vector<Observation> zeros(4, Observation{{0.0, 0.0}});
  EXPECT_DOUBLE_EQ(initial_estimate(cfg, zeros, 8), -7.0 / 8.0);
  EXPECT_THROW(initial_estimate(cfg, std::span<const Observation>(zeros).first(3), 8), Error);
}

TEST(Trackers, RecursiveStepFollowsTheUpdateRule) {
  TrackerState s{SpatialFrequency(0.2), 0, StepSizeSchedule::diminishing(0.1, 1.0)};
  s = rbt_step(s, {{5.0, 0.4}});
  EXPECT_NEAR(s.estimate, 0.2 - 0.05 * 0.4, 1e-15);
  EXPECT_EQ(s.slot, 1);
  s = rbt_step(s, {{0.0, -100.0}});
  EXPECT_DOUBLE_EQ(s.estimate, 1.0);
  s = rbt_step(s, {{0.0, 1000.0}});
  EXPECT_DOUBLE_EQ(s.estimate, -1.0);
}

TEST(Trackers, AngularStepAndDegenerateGuard) {
  AngularTrackerState s{0.3, 0, StepSizeSchedule::fixed(0.01), false};
  s = angular_rbt_step(s, {{0.0, 0.5}});
  EXPECT_NEAR(s.theta, 0.3 - 0.01 * 0.5 / std::cos(0.3), 1e-15);
  EXPECT_FALSE(s.degenerate);

  AngularTrackerState edge{kPi / 2, 0, StepSizeSchedule::fixed(0.01), false};
  const auto after = angular_rbt_step(edge, {{0.0, 0.5}});
  EXPECT_TRUE(after.degenerate);
  EXPECT_DOUBLE_EQ(after.theta, kPi / 2);
  EXPECT_EQ(after.slot, 1);
}

TEST(Trackers, NoiselessTrackerConvergesFromInsideTheMainlobe) {
  const auto cfg = ArrayConfig::make(16);
  const double x = 0.4;
  Rng rng(1);
  TrackOptions opts;
  opts.initial_estimate = x + 0.9 * mainlobe_half_width(cfg);
  const auto run = run_tracker(cfg, SnrConfig::noiseless(), StaticDirection{x},
                               StepSizeSchedule::fixed(alpha_star(cfg)), 300, rng, opts);
  ASSERT_EQ(run.x_hat.size(), 301u);
  EXPECT_NEAR(run.x_hat.back(), x, 1e-9);
}

TEST(Trackers, NoiselessTrackerSettlesOnAnotherStablePointOutsideTheMainlobe) {
  const auto cfg = ArrayConfig::make(8);
  const double x = 0.5;
  Rng rng(1);
  TrackOptions opts;
  opts.initial_estimate = -0.6;
  const auto run = run_tracker(cfg, SnrConfig::noiseless(), StaticDirection{x},
                               StepSizeSchedule::fixed(alpha_star(cfg) / 2.0), 3000, rng, opts);
  const auto sp = stable_points(cfg, x);
  double nearest = 10.0;
  for (double p : sp.points) nearest = std::min(nearest, std::abs(run.x_hat.back() - p));
  EXPECT_LT(nearest, 1e-6);
  EXPECT_GT(std::abs(run.x_hat.back() - x), 0.2);
}

TEST(Trackers, TrackerRunsAreReproducible) {
  const auto cfg = ArrayConfig::make(8);
  Rng a(99), b(99);
  const auto snr = SnrConfig::from_db(10.0);
  const auto ra = run_tracker(cfg, snr, SinusoidJitter{}, StepSizeSchedule::fixed(0.03), 500, a);
  const auto rb = run_tracker(cfg, snr, SinusoidJitter{}, StepSizeSchedule::fixed(0.03), 500, b);
  EXPECT_EQ(ra.x_hat, rb.x_hat);
  EXPECT_EQ(ra.x_true, rb.x_true);
}

TEST(Algorithms, RecursiveAdapterMatchesFreeFunction) {
  const auto cfg = ArrayConfig::make(8);
  RecursiveAlgorithm alg(cfg, StepSizeSchedule::fixed(0.02));
  alg.initialize_at(0.1);
  Rng probe(0);
  const cplx r = alg.pilot_response(0.15, probe);
  EXPECT_NEAR(std::abs(r - matched_response(cfg, 0.1, 0.15)), 0.0, 1e-13);
  alg.update({r});
  TrackerState s{SpatialFrequency(0.1), 0, StepSizeSchedule::fixed(0.02)};
  EXPECT_NEAR(alg.estimate_x(), rbt_step(s, {r}).estimate, 1e-15);
}
