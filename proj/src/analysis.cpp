#include "beamtrack/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "beamtrack/array.hpp"
#include "beamtrack/trackers.hpp"

namespace beamtrack {

StablePointSet stable_points(const ArrayConfig& cfg, double x) {
  StablePointSet s;
  s.spacing = 1.0 / ((cfg.num_antennas - 1) * cfg.spacing_ratio);
  const long long k_lo = static_cast<long long>(std::floor((-1.0 - x) / s.spacing)) - 1;
  const long long k_hi = static_cast<long long>(std::ceil((1.0 - x) / s.spacing)) + 1;
  for (long long k = k_lo; k <= k_hi; ++k) {
    const double v = x + k * s.spacing;
    if (v > -1.0 && v <= 1.0) s.points.push_back(v);
  }
  s.upper_boundary_stable = f_gain(cfg, 1.0, x) >= 0.0;
  s.lower_boundary_stable = f_gain(cfg, -1.0, x) <= 0.0;
  return s;
}

bool Interval::contains(double v) const noexcept {
  const bool above = lo_closed ? v >= lo : v > lo;
  const bool below = hi_closed ? v <= hi : v < hi;
  return above && below;
}

double mainlobe_half_width(const ArrayConfig& cfg) {
  return 1.0 / (cfg.num_antennas * cfg.spacing_ratio);
}

Interval mainlobe(const ArrayConfig& cfg, double x) {
  const double w = mainlobe_half_width(cfg);
  Interval iv{x - w, x + w, false, false};
  if (iv.lo <= -1.0) iv = {-1.0, iv.hi, true, iv.hi_closed};
  if (iv.hi >= 1.0) iv = {iv.lo, 1.0, iv.lo_closed, true};
  return iv;
}

double lipschitz_constant(const ArrayConfig& cfg) {
  return cfg.sqrt_m() * (cfg.num_antennas - 1) * kPi * cfg.spacing_ratio;
}

OdePath ode_trajectory(const ArrayConfig& cfg, double x, double x0_hat, double t_end,
                       double dt) {
  const double L = lipschitz_constant(cfg);
  if (!(dt > 0.0) || !(dt * L < 0.1)) fail_invalid("ODE step must satisfy 0 < dt L < 0.1");
  if (!(t_end >= 0.0)) fail_invalid("ODE horizon must be non-negative");
  auto f = [&](double v) { return f_gain(cfg, std::clamp(v, -1.0, 1.0), x); };
  const auto steps = static_cast<long long>(std::ceil(t_end / dt));
  OdePath path;
  path.t.reserve(static_cast<std::size_t>(steps) + 1);
  path.v.reserve(static_cast<std::size_t>(steps) + 1);
  double v = std::clamp(x0_hat, -1.0, 1.0);
  path.t.push_back(0.0);
  path.v.push_back(v);
  for (long long i = 1; i <= steps; ++i) {
    const double k1 = f(v);
    const double k2 = f(v + 0.5 * dt * k1);
    const double k3 = f(v + 0.5 * dt * k2);
    const double k4 = f(v + dt * k3);
    v = std::clamp(v + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0, -1.0, 1.0);
    path.t.push_back(i * dt);
    path.v.push_back(v);
  }
  return path;
}

namespace {

double boundary_distance(const ArrayConfig& cfg, double x, double x0_hat) {
  const Interval b = mainlobe(cfg, x);
  return std::min(std::abs(x0_hat - b.lo), std::abs(b.hi - x0_hat));
}

}  // namespace

double escape_time_T(const ArrayConfig& cfg, double x, double x0_hat, double delta) {
  if (!mainlobe(cfg, x).contains(x0_hat)) fail_invalid("initial estimate is outside the mainlobe");
  if (!(delta > 0.0) || !(delta < boundary_distance(cfg, x, x0_hat)))
    fail_invalid("delta must be positive and below the distance to the mainlobe boundary");
  const double g = std::min(std::abs(f_gain(cfg, x0_hat, x)),
                            std::abs(f_gain(cfg, std::abs(x0_hat - x) - delta + x, x)));
  if (g == 0.0) return std::numeric_limits<double>::infinity();
  return delta / g;
}

double stability_threshold(const ArrayConfig& cfg) { return 0.5 * alpha_star(cfg); }

std::optional<double> asymptotic_variance(const ArrayConfig& cfg, double rho, double alpha) {
  if (!(rho > 0.0)) fail_invalid("SNR must be positive");
  const double denom = 2.0 * alpha / alpha_star(cfg) - 1.0;
  if (!(denom > 0.0)) return std::nullopt;
  return alpha * alpha / (2.0 * rho * denom);
}

double inverse_square_tail(double n0) {
  constexpr long long kTerms = 1'000'000;
  double sum = 0.0;
  double comp = 0.0;
  // Smallest terms first keeps the rounding error well below 1e-12.
  for (long long i = kTerms; i >= 1; --i) {
    const double term = 1.0 / ((i + n0) * (i + n0));
    const double t = sum + term;
    comp += (sum - t) + term;
    sum = t;
  }
  // sum_{i > K} 1/(i + n0)^2 = 1/(K + n0 + 1/2) + O((K + n0)^-3).
  return sum + comp + 1.0 / (kTerms + n0 + 0.5);
}

ConvergenceBound convergence_bound(const ArrayConfig& cfg, double rho, double alpha, double n0,
                                   double x, double x0_hat, double delta) {
  if (!(rho > 0.0)) fail_invalid("SNR must be positive");
  const auto schedule = StepSizeSchedule::diminishing(alpha, n0);
  ConvergenceBound r;
  r.L = lipschitz_constant(cfg);

  if (!mainlobe(cfg, x).contains(x0_hat)) {
    r.reason = "initial estimate outside the mainlobe";
    return r;
  }
  if (!(delta > 0.0) || !(delta < boundary_distance(cfg, x, x0_hat))) {
    r.reason = "delta not strictly between 0 and the distance to the mainlobe boundary";
    return r;
  }
  const double f0 = std::abs(f_gain(cfg, x0_hat, x));
  if (f0 == 0.0) {
    r.reason = "initial estimate already at the equilibrium; escape time is unbounded";
    return r;
  }
  r.T = escape_time_T(cfg, x, x0_hat, delta);
  const double a1 = schedule.step(1);
  r.C_e = std::exp(r.L * (r.T + a1));
  const double tail = inverse_square_tail(n0);
  r.b0 = alpha * alpha * tail;
  r.alpha_max = (n0 + 1.0) * (std::abs(x - x0_hat) + mainlobe_half_width(cfg)) / f0;

  // Window condition over consecutive ODE-time windows of length >= T.
  const double root_m = cfg.sqrt_m();
  constexpr long long kMaxIndex = 10'000'000;
  constexpr int kMaxWindows = 200;
  long long start = 0;
  for (int m = 0; m < kMaxWindows && start < kMaxIndex; ++m) {
    double elapsed = 0.0;
    double sq = 0.0;
    long long n = start;
    while (elapsed < r.T && n < kMaxIndex) {
      const double a = schedule.step(++n);
      elapsed += a;
      sq += a * a;
    }
    const double lhs = r.C_e * root_m * r.L / 2.0 * sq + root_m * schedule.step(start + 1) / 2.0;
    r.window_lhs = std::max(r.window_lhs, lhs);
    start = n;
  }
  if (!(r.window_lhs < delta / 2.0)) {
    r.reason = "step sizes too large for the window condition";
    return r;
  }
  if (!(r.b0 <= rho * delta * delta / (4.0 * r.C_e * r.C_e))) {
    r.reason = "sum of squared step sizes exceeds rho delta^2 / (4 C_e^2)";
    return r;
  }
  if (!(alpha <= r.alpha_max)) {
    r.reason = "alpha exceeds alpha_max; the first step can leave the mainlobe";
    return r;
  }
  r.C0 = delta * delta /
         (4.0 * std::exp(2.0 * r.L * (r.T + r.alpha_max / (n0 + 1.0))) * tail);
  r.bound = std::max(0.0, 1.0 - 2.0 * std::exp(-r.C0 * rho / (alpha * alpha)));
  r.applicable = true;
  return r;
}

}  // namespace beamtrack
