#pragma once

// Fisher information about x carried by one pilot, and the bounds it implies.

#include "beamtrack/types.hpp"

namespace beamtrack {

/// Information per pilot, in units of 1/x^2.
struct FisherInfo {
  double value = 0.0;
};

/// 2 rho |w^H a'(x)|^2.
FisherInfo fisher_information(const ArrayConfig& cfg, double rho, double x,
                              const BeamformingVector& w);

/// 2 M (M-1)^2 pi^2 (d/lambda)^2 rho, attained by the matched beamformer.
FisherInfo max_fisher_information(const ArrayConfig& cfg, double rho);

/// 1 / (n I_max).
double min_crlb_x(const ArrayConfig& cfg, double rho, long long n);

/// Limit of n E|h_hat - h|^2: (2M-1) sigma^2 / (3 (M-1) |p|^2).
double asymptotic_channel_crlb(const ArrayConfig& cfg, double sigma2, double pilot_power);

}  // namespace beamtrack
