#include "beamtrack/array.hpp"

#include <cmath>

namespace beamtrack {

namespace {

void check_length(const BeamformingVector& w, const ArrayConfig& cfg) {
  if (w.size() != static_cast<std::size_t>(cfg.num_antennas))
    fail_invalid("beamformer length " + std::to_string(w.size()) +
                 " does not match array size " + std::to_string(cfg.num_antennas));
}

cplx noise_sample(const SnrConfig& snr, Rng& rng) {
  if (snr.noise_free) return {0.0, 0.0};
  return rng.complex_normal() / std::sqrt(snr.rho);
}

}  // namespace

CVec steering_vector(const ArrayConfig& cfg, double x) {
  const double phi = cfg.phase_step();
  CVec a(static_cast<std::size_t>(cfg.num_antennas));
  for (int m = 0; m < cfg.num_antennas; ++m) a[m] = std::polar(1.0, -phi * m * x);
  return a;
}

CVec steering_derivative(const ArrayConfig& cfg, double x) {
  const double phi = cfg.phase_step();
  CVec da(static_cast<std::size_t>(cfg.num_antennas));
  for (int m = 0; m < cfg.num_antennas; ++m)
    da[m] = cplx{0.0, -phi * m} * std::polar(1.0, -phi * m * x);
  return da;
}

BeamformingVector conjugate_beamformer(const ArrayConfig& cfg, SpatialFrequency v) {
  const double phi = cfg.phase_step();
  std::vector<double> phases(static_cast<std::size_t>(cfg.num_antennas));
  for (int m = 0; m < cfg.num_antennas; ++m)
    phases[m] = std::remainder(phi * m * v.value(), 2.0 * kPi);
  return BeamformingVector::from_phases(phases);
}

cplx array_response(const BeamformingVector& w, const ArrayConfig& cfg, double x) {
  check_length(w, cfg);
  const CVec a = steering_vector(cfg, x);
  cplx acc{0.0, 0.0};
  for (std::size_t m = 0; m < a.size(); ++m) acc += std::conj(w.weights()[m]) * a[m];
  return acc;
}

cplx array_factor(const ArrayConfig& cfg, double e) {
  const cplx step = std::polar(1.0, cfg.phase_step() * e);
  cplx term{1.0, 0.0};
  cplx acc{0.0, 0.0};
  for (int m = 0; m < cfg.num_antennas; ++m) {
    acc += term;
    term *= step;
  }
  return acc;
}

cplx matched_response(const ArrayConfig& cfg, double v, double x) {
  return array_factor(cfg, v - x) / cfg.sqrt_m();
}

Observation observe(const BeamformingVector& w, const ArrayConfig& cfg,
                    const ChannelState& channel, const SnrConfig& snr, Rng& rng) {
  return {array_response(w, cfg, channel.x) + noise_sample(snr, rng)};
}

cplx received_signal(const BeamformingVector& w, const ArrayConfig& cfg,
                     const ChannelState& channel, const SnrConfig& snr, Rng& rng) {
  const cplx gain = snr.pilot * channel.beta;
  const double sigma = std::sqrt(snr.noise_power(channel.beta));
  const cplx z = snr.noise_free ? cplx{0.0, 0.0} : rng.complex_normal();
  return gain * array_response(w, cfg, channel.x) + sigma * z;
}

Observation normalize(cplx r, cplx pilot, cplx beta) {
  const cplx gain = pilot * beta;
  if (gain == cplx{0.0, 0.0}) fail_invalid("cannot normalize by a zero pilot or channel gain");
  return {r / gain};
}

double log_likelihood(Observation y, const ArrayConfig& cfg, double x,
                      const BeamformingVector& w, double rho) {
  if (!(rho > 0.0)) fail_invalid("SNR must be positive");
  return std::log(rho / kPi) - rho * std::norm(y.y - array_response(w, cfg, x));
}

double score(Observation y, const ArrayConfig& cfg, double x,
             const BeamformingVector& w, double rho) {
  check_length(w, cfg);
  const CVec da = steering_derivative(cfg, x);
  cplx dresp{0.0, 0.0};
  for (std::size_t m = 0; m < da.size(); ++m) dresp += std::conj(w.weights()[m]) * da[m];
  const cplx resid = y.y - array_response(w, cfg, x);
  return 2.0 * rho * std::real(std::conj(resid) * dresp);
}

double matched_score(Observation y, const ArrayConfig& cfg, double rho) {
  const int M = cfg.num_antennas;
  return -2.0 * cfg.sqrt_m() * (M - 1) * kPi * cfg.spacing_ratio * rho * y.y.imag();
}

double f_gain(const ArrayConfig& cfg, double v, double x) {
  const double phi = cfg.phase_step();
  double acc = 0.0;
  for (int m = 0; m < cfg.num_antennas; ++m) acc += std::sin(phi * m * (v - x));
  return -acc / cfg.sqrt_m();
}

double f_gain_closed(const ArrayConfig& cfg, double v, double x) {
  const double e = v - x;
  const double period = 1.0 / cfg.spacing_ratio;
  if (std::abs(std::remainder(e, period)) < 1e-8) return f_gain(cfg, v, x);
  const int M = cfg.num_antennas;
  const double u = kPi * cfg.spacing_ratio * e;
  return -std::sin((M - 1) * u) * std::sin(M * u) / (cfg.sqrt_m() * std::sin(u));
}

}  // namespace beamtrack
