#include "beamtrack/crlb.hpp"

#include <cmath>

#include "beamtrack/array.hpp"

namespace beamtrack {

FisherInfo fisher_information(const ArrayConfig& cfg, double rho, double x,
                              const BeamformingVector& w) {
  if (!(rho > 0.0)) fail_invalid("SNR must be positive");
  if (w.size() != static_cast<std::size_t>(cfg.num_antennas))
    fail_invalid("beamformer length does not match array size");
  const CVec da = steering_derivative(cfg, x);
  cplx acc{0.0, 0.0};
  for (std::size_t m = 0; m < da.size(); ++m) acc += std::conj(w.weights()[m]) * da[m];
  return {2.0 * rho * std::norm(acc)};
}

FisherInfo max_fisher_information(const ArrayConfig& cfg, double rho) {
  if (!(rho > 0.0)) fail_invalid("SNR must be positive");
  const double M = cfg.num_antennas;
  const double d = cfg.spacing_ratio;
  return {2.0 * M * (M - 1) * (M - 1) * kPi * kPi * d * d * rho};
}

double min_crlb_x(const ArrayConfig& cfg, double rho, long long n) {
  if (n < 1) fail_invalid("slot count must be at least 1");
  return 1.0 / (static_cast<double>(n) * max_fisher_information(cfg, rho).value);
}

double asymptotic_channel_crlb(const ArrayConfig& cfg, double sigma2, double pilot_power) {
  if (!(pilot_power > 0.0)) fail_invalid("pilot power must be positive");
  if (!(sigma2 >= 0.0)) fail_invalid("noise power must be non-negative");
  const double M = cfg.num_antennas;
  return (2.0 * M - 1.0) * sigma2 / (3.0 * (M - 1.0) * pilot_power);
}

}  // namespace beamtrack
