#include <gtest/gtest.h>

#include <cmath>

#include "beamtrack/array.hpp"
#include "beamtrack/trackers.hpp"

using namespace beamtrack;

namespace {

cplx naive_response(const ArrayConfig& cfg, double v, double x) {
  // a(v)^H a(x) / sqrt(M), evaluated entry by entry.
  cplx acc{0.0, 0.0};
  for (int m = 0; m < cfg.num_antennas; ++m) {
    const double ph = 2.0 * kPi * cfg.spacing_ratio * m;
    acc += std::conj(std::exp(cplx{0.0, -ph * v})) * std::exp(cplx{0.0, -ph * x});
  }
  return acc / std::sqrt(static_cast<double>(cfg.num_antennas));
}

}  // namespace

TEST(Array, SteeringVectorHasUnitModulusEntries) {
  const auto cfg = ArrayConfig::make(16);
  const CVec a = steering_vector(cfg, 0.3);
  ASSERT_EQ(a.size(), 16u);
  double norm2 = 0.0;
  for (const cplx& e : a) {
    EXPECT_NEAR(std::abs(e), 1.0, 1e-15);
    norm2 += std::norm(e);
  }
  EXPECT_NEAR(norm2, 16.0, 1e-12);
  EXPECT_NEAR(std::arg(a[1]), -kPi * 0.3, 1e-15);
}

TEST(Array, DerivativeMatchesCentralDifference) {
  const auto cfg = ArrayConfig::make(8, 0.5);
  const double x = -0.41, h = 1e-6;
  const CVec da = steering_derivative(cfg, x);
  const CVec ap = steering_vector(cfg, x + h);
  const CVec am = steering_vector(cfg, x - h);
  for (std::size_t m = 0; m < da.size(); ++m)
    EXPECT_NEAR(std::abs(da[m] - (ap[m] - am[m]) / (2.0 * h)), 0.0, 1e-6);
}

TEST(Array, ConjugateBeamformerGivesCoherentGain) {
  const auto cfg = ArrayConfig::make(16);
  for (double v : {-1.0, -0.2, 0.0, 0.77, 1.0}) {
    const auto w = conjugate_beamformer(cfg, SpatialFrequency(v));
    for (const cplx& e : w.weights()) EXPECT_NEAR(std::abs(e), 0.25, 1e-15);
    EXPECT_NEAR(std::abs(array_response(w, cfg, v)), 4.0, 1e-12);
  }
}

TEST(Array, MatchedResponseAgreesWithDirectProducts) {
  const auto cfg = ArrayConfig::make(16, 0.5);
  for (double v = -1.0; v <= 1.0; v += 0.173)
    for (double x = -1.0; x <= 1.0; x += 0.211) {
      const cplx ref = naive_response(cfg, v, x);
      EXPECT_NEAR(std::abs(matched_response(cfg, v, x) - ref), 0.0, 1e-12);
      const auto w = conjugate_beamformer(cfg, SpatialFrequency(v));
      EXPECT_NEAR(std::abs(array_response(w, cfg, x) - ref), 0.0, 1e-12);
    }
}

TEST(Array, FieldSumAndClosedFormAgreeOnDenseGrid) {
  for (int M : {2, 8, 16, 33}) {
    const auto cfg = ArrayConfig::make(M, 0.5);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const double v = -1.0 + 2.0 * i / 9999.0;
      const double x = 0.5 - 0.37 * std::sin(i);
      worst = std::max(worst, std::abs(f_gain(cfg, v, x) - f_gain_closed(cfg, v, x)));
    }
    EXPECT_LE(worst, 1e-10) << "M=" << M;
  }
}

TEST(Array, FieldIsMinusImaginaryPartOfMatchedResponse) {
  const auto cfg = ArrayConfig::make(8);
  for (double v : {-0.9, 0.1, 0.55})
    EXPECT_NEAR(f_gain(cfg, v, 0.3), -naive_response(cfg, v, 0.3).imag(), 1e-13);
  EXPECT_EQ(f_gain_closed(cfg, 0.3, 0.3), 0.0);
  EXPECT_NEAR(f_gain_closed(cfg, 1.0, -1.0), 0.0, 1e-12);
}

TEST(Array, ScoreMatchesFiniteDifferenceOfLogLikelihood) {
  const auto cfg = ArrayConfig::make(16);
  const double rho = 10.0;
  Rng rng(7);
  for (int k = 0; k < 20; ++k) {
    const double v = rng.uniform(-0.9, 0.9);
    const double x = v + rng.uniform(-0.05, 0.05);
    const auto w = conjugate_beamformer(cfg, SpatialFrequency(v));
    const Observation y{array_response(w, cfg, x) + rng.complex_normal() / std::sqrt(rho)};
    const double h = 1e-7;
    const double fd = (log_likelihood(y, cfg, x + h, w, rho) - log_likelihood(y, cfg, x - h, w, rho)) /
                      (2.0 * h);
    EXPECT_NEAR(score(y, cfg, x, w, rho), fd, 1e-5 * std::max(1.0, std::abs(fd)));
  }
}

TEST(Array, MatchedScoreClosedFormWithinOneMicroRelative) {
  const auto cfg = ArrayConfig::make(16);
  const double rho = 10.0;
  Rng rng(11);
  for (int k = 0; k < 50; ++k) {
    const double x = rng.uniform(-0.95, 0.95);
    const auto w = conjugate_beamformer(cfg, SpatialFrequency(x));
    const Observation y{array_response(w, cfg, x + rng.uniform(-0.01, 0.01)) +
                        rng.complex_normal() / std::sqrt(rho)};
    const double h = 1e-6;
    const double fd = (log_likelihood(y, cfg, x + h, w, rho) - log_likelihood(y, cfg, x - h, w, rho)) /
                      (2.0 * h);
    const double closed = matched_score(y, cfg, rho);
    EXPECT_LE(std::abs(fd - closed), 1e-6 * std::abs(closed)) << "x=" << x;
  }
}

TEST(Array, NoiselessObservationIsTheResponse) {
  const auto cfg = ArrayConfig::make(8);
  const auto w = conjugate_beamformer(cfg, SpatialFrequency(0.2));
  Rng rng(1);
  const auto ch = ChannelState::make(SpatialFrequency(0.25), {0.0, 1.0});
  const Observation y = observe(w, cfg, ch, SnrConfig::noiseless(), rng);
  EXPECT_NEAR(std::abs(y.y - array_response(w, cfg, 0.25)), 0.0, 1e-15);
}

TEST(Array, NormalizedReceivedSignalHasVarianceOneOverRho) {
  const auto cfg = ArrayConfig::make(8);
  const auto w = conjugate_beamformer(cfg, SpatialFrequency(0.0));
  const cplx p{0.70710678118654752440, -0.70710678118654752440};
  const cplx beta{0.70710678118654752440, 0.70710678118654752440};
  const auto snr = SnrConfig::make(10.0, p);
  const auto ch = ChannelState::make(SpatialFrequency(0.0), beta);
  Rng rng(3);
  double s2 = 0.0;
  cplx s{0.0, 0.0};
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const cplx e = normalize(received_signal(w, cfg, ch, snr, rng), p, beta).y -
                   array_response(w, cfg, 0.0);
    s += e;
    s2 += std::norm(e);
  }
  EXPECT_NEAR(std::abs(s / double(n)), 0.0, 3e-3);
  EXPECT_NEAR(s2 / n, 0.1, 2e-3);
  EXPECT_THROW(normalize({1.0, 0.0}, {0.0, 0.0}, beta), Error);
}

TEST(Array, MismatchedBeamformerLengthThrows) {
  const auto w = conjugate_beamformer(ArrayConfig::make(8), SpatialFrequency(0.0));
  EXPECT_THROW(array_response(w, ArrayConfig::make(16), 0.0), Error);
}
