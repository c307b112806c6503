#pragma once

// Complex-valued signal model of a single-RF-chain phased array.

#include "beamtrack/rng.hpp"
#include "beamtrack/types.hpp"

namespace beamtrack {

/// a(x): entry m (0-based) is e^{-j 2 pi (d/lambda) m x}. |a(x)|^2 = M.
CVec steering_vector(const ArrayConfig& cfg, double x);

/// da/dx, entry m is -j 2 pi (d/lambda) m e^{-j 2 pi (d/lambda) m x}.
CVec steering_derivative(const ArrayConfig& cfg, double x);

/// a(v)/sqrt(M): the beamformer that maximizes the Fisher information at v.
BeamformingVector conjugate_beamformer(const ArrayConfig& cfg, SpatialFrequency v);

/// w^H a(x).
cplx array_response(const BeamformingVector& w, const ArrayConfig& cfg, double x);

/// a(v)^H a(x) / sqrt(M), i.e. array_response(conjugate_beamformer(v), x),
/// evaluated with one complex exponential and a phasor recurrence.
cplx matched_response(const ArrayConfig& cfg, double v, double x);

/// Sum over m of e^{j 2 pi (d/lambda) m e}; the unnormalized array factor.
cplx array_factor(const ArrayConfig& cfg, double e);

/// Normalized pilot observation y = w^H a(x) + z/sqrt(rho), z ~ CN(0, 1).
Observation observe(const BeamformingVector& w, const ArrayConfig& cfg,
                    const ChannelState& channel, const SnrConfig& snr, Rng& rng);

/// Raw combiner output r = p beta w^H a(x) + sigma z.
cplx received_signal(const BeamformingVector& w, const ArrayConfig& cfg,
                     const ChannelState& channel, const SnrConfig& snr, Rng& rng);

/// r / (p beta). Throws on a zero pilot or gain.
Observation normalize(cplx r, cplx pilot, cplx beta);

/// log p(y | x, w) = log(rho/pi) - rho |y - w^H a(x)|^2.
double log_likelihood(Observation y, const ArrayConfig& cfg, double x,
                      const BeamformingVector& w, double rho);

/// d/dx log p(y | x, w) = 2 rho Re{ (y - w^H a(x))^* w^H a'(x) }.
double score(Observation y, const ArrayConfig& cfg, double x,
             const BeamformingVector& w, double rho);

/// The score at a beamformer matched to the evaluation point collapses to
/// -2 sqrt(M) (M-1) pi (d/lambda) rho Im{y}.
double matched_score(Observation y, const ArrayConfig& cfg, double rho);

/// Mean update field f(v, x) = -Im{a(v)^H a(x)}/sqrt(M), summed term by term.
double f_gain(const ArrayConfig& cfg, double v, double x);

/// Same field through its Dirichlet-kernel closed form. Within 1e-8 of a
/// zero of the denominator the sum form is used instead.
double f_gain_closed(const ArrayConfig& cfg, double v, double x);

}  // namespace beamtrack
