#include "beamtrack/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "beamtrack/array.hpp"

namespace beamtrack {

double mse_h(const ArrayConfig& cfg, double x_hat, const ChannelState& channel) {
  const double overlap = array_factor(cfg, x_hat - channel.x.value()).real();
  return std::norm(channel.beta) * std::max(0.0, 2.0 * (cfg.num_antennas - overlap));
}

double mse_h_direct(const ArrayConfig& cfg, const CVec& h_hat_over_beta,
                    const ChannelState& channel) {
  if (h_hat_over_beta.size() != static_cast<std::size_t>(cfg.num_antennas))
    fail_invalid("channel estimate length does not match array size");
  const CVec a = steering_vector(cfg, channel.x);
  double acc = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) acc += std::norm(h_hat_over_beta[m] - a[m]);
  return std::norm(channel.beta) * acc;
}

double rate(const BeamformingVector& w, const ArrayConfig& cfg, double x, double rho) {
  return rate_from_response(array_response(w, cfg, x), rho);
}

double rate_from_response(cplx response, double rho) {
  return std::log2(1.0 + rho * std::norm(response));
}

double capacity(const ArrayConfig& cfg, double rho) {
  return std::log2(1.0 + rho * cfg.num_antennas);
}

double aoa_error_deg(double x_hat, double x) {
  const double a = std::asin(std::clamp(x_hat, -1.0, 1.0));
  const double b = std::asin(std::clamp(x, -1.0, 1.0));
  return std::abs(a - b) * 180.0 / kPi;
}

}  // namespace beamtrack
