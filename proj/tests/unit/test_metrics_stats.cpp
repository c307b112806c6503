#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "beamtrack/array.hpp"
#include "beamtrack/metrics.hpp"
#include "beamtrack/stats.hpp"

using namespace beamtrack;

TEST(Metrics, ChannelErrorAgreesWithDirectNorm) {
  const auto cfg = ArrayConfig::make(16);
  const cplx beta{0.70710678118654752440, 0.70710678118654752440};
  const auto ch = ChannelState::make(SpatialFrequency(0.3), beta);
  for (double xh : {0.3, 0.31, -0.5, 1.0}) {
    const CVec a = steering_vector(cfg, xh);
    EXPECT_NEAR(mse_h(cfg, xh, ch), mse_h_direct(cfg, a, ch), 1e-10);
  }
  EXPECT_NEAR(mse_h(cfg, 0.3, ch), 0.0, 1e-12);
}

TEST(Metrics, SmallErrorExpansionOfChannelError) {
  const auto cfg = ArrayConfig::make(16);
  const auto ch = ChannelState::make(SpatialFrequency(-0.2), {0.0, 1.0});
  const double M = 16, phi = kPi;
  const double k = phi * phi * M * (M - 1) * (2 * M - 1) / 6.0;
  for (double e : {1e-3, 1e-4, 1e-5})
    EXPECT_NEAR(mse_h(cfg, -0.2 + e, ch) / (k * e * e), 1.0, 50.0 * e);
}

TEST(Metrics, RateAndCapacity) {
  EXPECT_NEAR(capacity(ArrayConfig::make(16), 10.0), 7.33, 5e-3);
  const auto cfg = ArrayConfig::make(16);
  const auto w = conjugate_beamformer(cfg, SpatialFrequency(0.4));
  EXPECT_NEAR(rate(w, cfg, 0.4, 10.0), capacity(cfg, 10.0), 1e-12);
  for (double x = -1.0; x <= 1.0; x += 0.01) EXPECT_LE(rate(w, cfg, x, 10.0), capacity(cfg, 10.0) + 1e-12);
  EXPECT_NEAR(aoa_error_deg(0.5, 0.0), 30.0, 1e-12);
}

TEST(Stats, CompensatedSumRecoversCancellation) {
  CompensatedSum s;
  s.add(1e16);
  for (int i = 0; i < 1000; ++i) s.add(1.0);
  s.add(-1e16);
  EXPECT_DOUBLE_EQ(s.value(), 1000.0);
}

TEST(Stats, AccumulatorMatchesTwoPassFormulas) {
  std::vector<double> v;
  Rng r(4);
  MeanAccumulator a, b;
  for (int i = 0; i < 1000; ++i) {
    v.push_back(3.0 + r.normal());
    (i < 400 ? a : b).add(v.back());
  }
  a.merge(b);
  EXPECT_EQ(a.count(), 1000);
  EXPECT_NEAR(a.mean(), sample_mean(v), 1e-12);
  EXPECT_NEAR(a.variance(), sample_variance(v), 1e-9);
  EXPECT_NEAR(a.stderr_of_mean(), std::sqrt(sample_variance(v) / 1000.0), 1e-9);
}

TEST(Stats, AndersonDarlingSeparatesNormalFromSkewed) {
  Rng r(8);
  int rejected_normal = 0;
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> v(1000);
    for (double& e : v) e = r.normal();
    if (anderson_darling_normal(v) > kAndersonDarling5pct) ++rejected_normal;
  }
  EXPECT_LE(rejected_normal, 12);
  std::vector<double> skew(1000);
  for (double& e : skew) e = -std::log(r.uniform(0.0, 1.0));
  EXPECT_GT(anderson_darling_normal(skew), 5.0);
}
