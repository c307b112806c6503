#include "beamtrack/types.hpp"

#include <algorithm>
#include <cmath>

namespace beamtrack {

ArrayConfig ArrayConfig::make(int num_antennas, double spacing_ratio) {
  if (num_antennas < 2)
    fail_invalid("array needs at least 2 antennas, got " +
                 std::to_string(num_antennas));
  if (!(spacing_ratio > 0.0) || !std::isfinite(spacing_ratio))
    fail_invalid("spacing ratio d/lambda must be positive");
  return ArrayConfig{num_antennas, spacing_ratio};
}

double ArrayConfig::sqrt_m() const noexcept {
  return std::sqrt(static_cast<double>(num_antennas));
}

SpatialFrequency::SpatialFrequency(double x) : x_(x) {
  if (!(x >= -1.0 && x <= 1.0))
    fail_invalid("spatial frequency must lie in [-1, 1], got " +
                 std::to_string(x));
}

SpatialFrequency SpatialFrequency::clamped(double x) noexcept {
  SpatialFrequency s;
  s.x_ = std::clamp(x, -1.0, 1.0);
  return s;
}

ChannelState ChannelState::make(SpatialFrequency x, cplx beta) {
  if (beta == cplx{0.0, 0.0}) fail_invalid("channel gain beta must be nonzero");
  return ChannelState{x, beta};
}

double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }

SnrConfig SnrConfig::make(double rho, cplx pilot) {
  if (!(rho > 0.0) || !std::isfinite(rho)) fail_invalid("SNR must be positive");
  if (pilot == cplx{0.0, 0.0}) fail_invalid("pilot symbol must be nonzero");
  return SnrConfig{pilot, rho, false};
}

SnrConfig SnrConfig::from_db(double snr_db, cplx pilot) {
  return make(db_to_linear(snr_db), pilot);
}

SnrConfig SnrConfig::noiseless(cplx pilot) {
  if (pilot == cplx{0.0, 0.0}) fail_invalid("pilot symbol must be nonzero");
  return SnrConfig{pilot, 1.0, true};
}

double SnrConfig::noise_power(cplx beta) const noexcept {
  if (noise_free) return 0.0;
  return std::norm(pilot * beta) / rho;
}

BeamformingVector::BeamformingVector(CVec w) : w_(std::move(w)) {
  const double expected = 1.0 / std::sqrt(static_cast<double>(w_.size()));
  for (const auto& v : w_) {
    if (std::abs(std::abs(v) - expected) > 1e-12)
      throw Error(ErrorCode::Runtime, "beamformer entry violates |w_m| = 1/sqrt(M)");
  }
}

BeamformingVector BeamformingVector::from_phases(std::span<const double> phases) {
  if (phases.size() < 2) fail_invalid("beamformer needs at least 2 weights");
  const double scale = 1.0 / std::sqrt(static_cast<double>(phases.size()));
  CVec w(phases.size());
  for (std::size_t m = 0; m < phases.size(); ++m)
    w[m] = std::polar(scale, -phases[m]);
  return BeamformingVector(std::move(w));
}

BeamformingVector BeamformingVector::co_phased(std::span<const cplx> h) {
  std::vector<double> phases(h.size());
  for (std::size_t m = 0; m < h.size(); ++m) phases[m] = -std::arg(h[m]);
  return from_phases(phases);
}

std::vector<double> BeamformingVector::phases() const {
  std::vector<double> out(w_.size());
  for (std::size_t m = 0; m < w_.size(); ++m) out[m] = -std::arg(w_[m]);
  return out;
}

}  // namespace beamtrack
