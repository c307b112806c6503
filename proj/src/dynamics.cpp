#include "beamtrack/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace beamtrack {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

TrajectorySample from_theta(double theta) {
  return {theta, std::clamp(std::sin(theta), -1.0, 1.0)};
}

}  // namespace

void validate(const TrajectoryModel& model) {
  std::visit(overloaded{
                 [](const StaticDirection& s) {
                   if (!(s.x >= -1.0 && s.x <= 1.0))
                     fail_invalid("static direction must lie in [-1, 1]");
                 },
                 [](const SinusoidJitter& s) {
                   if (!(s.period > 0.0)) fail_invalid("sinusoid period must be positive");
                   if (!(std::abs(s.amplitude) <= kPi / 2.0))
                     fail_invalid("sinusoid amplitude must not exceed pi/2");
                   if (!(s.jitter_std >= 0.0)) fail_invalid("jitter std must be non-negative");
                 },
                 [](const FixedVelocity& f) {
                   if (!(f.omega >= 0.0) || !std::isfinite(f.omega))
                     fail_invalid("angular velocity must be non-negative");
                   if (!(f.bound > 0.0 && f.bound <= kPi / 2.0))
                     fail_invalid("velocity bound must lie in (0, pi/2]");
                   if (!(std::abs(f.theta0) <= f.bound))
                     fail_invalid("initial angle must lie within the bound");
                 },
             },
             model);
}

Trajectory::Trajectory(TrajectoryModel model) : model_(std::move(model)) { validate(model_); }

TrajectorySample Trajectory::at_current(Rng& rng) {
  return std::visit(
      overloaded{
          [&](const StaticDirection& s) { return TrajectorySample{std::asin(s.x), s.x}; },
          [&](const SinusoidJitter& s) {
            const double jitter = s.jitter_std > 0.0 ? s.jitter_std * rng.normal() : 0.0;
            return from_theta(s.amplitude * std::sin(2.0 * kPi * n_ / s.period) + jitter);
          },
          [&](const FixedVelocity&) { return from_theta(theta_); },
      },
      model_);
}

TrajectorySample Trajectory::start(Rng& rng) {
  n_ = 0;
  delta_ = 1;
  if (const auto* f = std::get_if<FixedVelocity>(&model_)) theta_ = f->theta0;
  return at_current(rng);
}

TrajectorySample Trajectory::advance(Rng& rng) {
  ++n_;
  if (const auto* f = std::get_if<FixedVelocity>(&model_)) {
    if (std::abs(theta_ + delta_ * f->omega) > f->bound) delta_ = -delta_;
    theta_ += delta_ * f->omega;
  }
  return at_current(rng);
}

std::vector<TrajectorySample> sample_path(const TrajectoryModel& model, long long n_slots,
                                          Rng& rng) {
  if (n_slots < 0) fail_invalid("slot count must be non-negative");
  Trajectory t(model);
  std::vector<TrajectorySample> out;
  out.reserve(static_cast<std::size_t>(n_slots) + 1);
  out.push_back(t.start(rng));
  for (long long n = 0; n < n_slots; ++n) out.push_back(t.advance(rng));
  return out;
}

}  // namespace beamtrack
