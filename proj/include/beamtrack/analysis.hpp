#pragma once

// Deterministic theory diagnostics for the recursive tracker: equilibria of
// the mean field, the mainlobe, the limiting ODE and the exponential
// convergence bound for diminishing step sizes.

#include <optional>
#include <string>
#include <vector>

#include "beamtrack/types.hpp"

namespace beamtrack {

struct StablePointSet {
  std::vector<double> points;  // ascending, within (-1, 1]
  double spacing = 0.0;
  /// f(1, x) >= 0: the projection holds the recursion at +1.
  bool upper_boundary_stable = false;
  /// f(-1, x) <= 0: the projection holds the recursion at -1.
  bool lower_boundary_stable = false;
};

/// {x + k lambda/((M-1) d)} intersected with (-1, 1].
StablePointSet stable_points(const ArrayConfig& cfg, double x);

/// (x - lambda/(M d), x + lambda/(M d)) intersected with [-1, 1]. An end
/// clipped to +-1 is closed.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = false;
  bool hi_closed = false;

  bool contains(double v) const noexcept;
};

Interval mainlobe(const ArrayConfig& cfg, double x);

double mainlobe_half_width(const ArrayConfig& cfg);

/// sqrt(M) (M-1) pi d / lambda.
double lipschitz_constant(const ArrayConfig& cfg);

struct OdePath {
  std::vector<double> t;
  std::vector<double> v;
};

/// Fixed-step RK4 integration of dv/dt = f(v, x), projected onto [-1, 1]
/// after every step. Requires dt L < 0.1.
OdePath ode_trajectory(const ArrayConfig& cfg, double x, double x0_hat, double t_end,
                       double dt);

/// delta / min{|f(x0, x)|, |f(|x0 - x| - delta + x, x)|}. Throws when x0 is
/// outside the mainlobe or delta is not strictly inside the distance to its
/// boundary.
double escape_time_T(const ArrayConfig& cfg, double x, double x0_hat, double delta);

/// lambda / (2 sqrt(M) (M-1) pi d).
double stability_threshold(const ArrayConfig& cfg);

/// alpha^2 / (2 rho (2 alpha/alpha* - 1)); empty when alpha is at or below
/// the stability threshold.
std::optional<double> asymptotic_variance(const ArrayConfig& cfg, double rho, double alpha);

/// sum_{i >= 1} 1/(i + n0)^2, summed to 10^6 terms plus a tail estimate.
double inverse_square_tail(double n0);

struct ConvergenceBound {
  bool applicable = false;
  std::string reason;  // which condition failed, when not applicable
  double bound = 0.0;  // max(0, 1 - 2 exp(-C0 rho / alpha^2))
  double T = 0.0;
  double L = 0.0;
  double C_e = 0.0;
  double b0 = 0.0;
  double alpha_max = 0.0;
  double C0 = 0.0;
  /// Largest left side of the window condition over the checked windows.
  double window_lhs = 0.0;
};

/// Lower bound on P(x_n stays in the invariant set, hence converges) for
/// a_n = alpha/(n + n0). Never silently returns 0: a violated condition
/// yields applicable = false with a reason.
ConvergenceBound convergence_bound(const ArrayConfig& cfg, double rho, double alpha, double n0,
                                   double x, double x0_hat, double delta);

}  // namespace beamtrack
