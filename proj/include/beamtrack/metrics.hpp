#pragma once

// Per-slot performance metrics.

#include "beamtrack/types.hpp"

namespace beamtrack {

/// |beta|^2 |a(x_hat) - a(x)|^2, the channel error when h_hat = beta a(x_hat).
double mse_h(const ArrayConfig& cfg, double x_hat, const ChannelState& channel);

/// |h_hat - beta a(x)|^2 for a direct channel estimate `h_hat_over_beta` of a(x).
double mse_h_direct(const ArrayConfig& cfg, const CVec& h_hat_over_beta,
                    const ChannelState& channel);

/// log2(1 + rho |w^H a(x)|^2).
double rate(const BeamformingVector& w, const ArrayConfig& cfg, double x, double rho);

/// log2(1 + rho |r|^2) for a known combiner response r.
double rate_from_response(cplx response, double rho);

/// log2(1 + rho M).
double capacity(const ArrayConfig& cfg, double rho);

/// |asin(x_hat) - asin(x)| in degrees.
double aoa_error_deg(double x_hat, double x);

}  // namespace beamtrack
