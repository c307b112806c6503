#include "beamtrack/trackers.hpp"

#include <algorithm>
#include <cmath>

namespace beamtrack {

StepSizeSchedule StepSizeSchedule::diminishing(double alpha, double n0) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) fail_invalid("step-size alpha must be positive");
  if (!(n0 >= 0.0) || !std::isfinite(n0)) fail_invalid("step-size offset N0 must be non-negative");
  return StepSizeSchedule(Diminishing{alpha, n0});
}

StepSizeSchedule StepSizeSchedule::fixed(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) fail_invalid("step-size alpha must be positive");
  return StepSizeSchedule(Fixed{alpha});
}

double StepSizeSchedule::step(long long n) const {
  if (n < 1) fail_invalid("step index starts at 1");
  if (const auto* d = std::get_if<Diminishing>(&v_)) return d->alpha / (n + d->n0);
  return std::get<Fixed>(v_).alpha;
}

double StepSizeSchedule::alpha() const noexcept {
  return std::visit([](const auto& s) { return s.alpha; }, v_);
}

double StepSizeSchedule::n0() const noexcept {
  if (const auto* d = std::get_if<Diminishing>(&v_)) return d->n0;
  return 0.0;
}

double alpha_star(const ArrayConfig& cfg) {
  return 1.0 / (cfg.sqrt_m() * (cfg.num_antennas - 1) * kPi * cfg.spacing_ratio);
}

std::vector<double> sweep_directions(const ArrayConfig& cfg) {
  const int M = cfg.num_antennas;
  std::vector<double> dirs(static_cast<std::size_t>(M));
  for (int m = 1; m <= M; ++m) dirs[m - 1] = (2.0 * m - (M + 1)) / M;
  return dirs;
}

std::vector<BeamformingVector> coarse_sweep_codebook(const ArrayConfig& cfg) {
  std::vector<BeamformingVector> book;
  for (double v : sweep_directions(cfg))
    book.push_back(conjugate_beamformer(cfg, SpatialFrequency(v)));
  return book;
}

SpatialFrequency initial_estimate(const ArrayConfig& cfg, std::span<const Observation> sweep,
                                  int m0) {
  const int M = cfg.num_antennas;
  if (sweep.size() != static_cast<std::size_t>(M))
    fail_invalid("coarse sweep needs exactly M observations");
  if (m0 < M) fail_invalid("dictionary size must be at least M");

  // W^H-weighted combination: sum_m w_m y_m, then correlate with a(x) per atom.
  const auto book = coarse_sweep_codebook(cfg);
  CVec combined(static_cast<std::size_t>(M), cplx{0.0, 0.0});
  for (int k = 0; k < M; ++k)
    for (int m = 0; m < M; ++m) combined[m] += book[k].weights()[m] * sweep[k].y;

  double best = -1.0;
  double best_x = 0.0;
  for (int k = 1; k <= m0; ++k) {
    const double x = static_cast<double>(2 * k - 1 - m0) / m0;
    const CVec a = steering_vector(cfg, x);
    cplx c{0.0, 0.0};
    for (int m = 0; m < M; ++m) c += std::conj(a[m]) * combined[m];
    const double mag = std::abs(c);
    if (mag > best) {
      best = mag;
      best_x = x;
    }
  }
  return SpatialFrequency(best_x);
}

TrackerState rbt_step(const TrackerState& state, Observation y) {
  TrackerState next = state;
  next.slot = state.slot + 1;
  const double a = state.schedule.step(next.slot);
  next.estimate = SpatialFrequency::clamped(state.estimate.value() - a * y.y.imag());
  return next;
}

AngularTrackerState angular_rbt_step(const AngularTrackerState& state, Observation y) {
  AngularTrackerState next = state;
  next.slot = state.slot + 1;
  const double c = std::cos(state.theta);
  if (std::abs(c) < kDegenerateCos) {
    next.degenerate = true;
    return next;
  }
  next.degenerate = false;
  const double a = state.schedule.step(next.slot);
  next.theta = std::clamp(state.theta - a * y.y.imag() / c, -kPi / 2.0, kPi / 2.0);
  return next;
}

namespace {

cplx noisy(cplx clean, const SnrConfig& snr, Rng& rng) {
  if (snr.noise_free) return clean;
  return clean + rng.complex_normal() / std::sqrt(snr.rho);
}

double sweep_start(const ArrayConfig& cfg, const SnrConfig& snr, double x0, Rng& rng,
                   const TrackOptions& opts) {
  if (opts.initial_estimate) return SpatialFrequency(*opts.initial_estimate).value();
  const SnrConfig& s1 = opts.sweep_snr ? *opts.sweep_snr : snr;
  std::vector<Observation> sweep;
  for (double v : sweep_directions(cfg)) sweep.push_back({noisy(matched_response(cfg, v, x0), s1, rng)});
  const int m0 = opts.m0 > 0 ? opts.m0 : 2 * cfg.num_antennas;
  return initial_estimate(cfg, sweep, m0).value();
}

}  // namespace

TrackRun run_tracker(const ArrayConfig& cfg, const SnrConfig& snr,
                     const TrajectoryModel& trajectory, const StepSizeSchedule& schedule,
                     long long n_slots, Rng& rng, const TrackOptions& opts) {
  if (n_slots < 0) fail_invalid("slot count must be non-negative");
  Trajectory traj(trajectory);
  TrackRun run;
  run.x_true.reserve(static_cast<std::size_t>(n_slots) + 1);
  run.x_hat.reserve(static_cast<std::size_t>(n_slots) + 1);

  const double x0 = traj.start(rng).x;
  TrackerState st{SpatialFrequency(sweep_start(cfg, snr, x0, rng, opts)), 0, schedule};
  run.x_true.push_back(x0);
  run.x_hat.push_back(st.estimate);
  for (long long n = 1; n <= n_slots; ++n) {
    const double x = traj.advance(rng).x;
    const Observation y{noisy(matched_response(cfg, st.estimate, x), snr, rng)};
    st = rbt_step(st, y);
    run.x_true.push_back(x);
    run.x_hat.push_back(st.estimate);
  }
  return run;
}

TrackRun run_angular_tracker(const ArrayConfig& cfg, const SnrConfig& snr,
                             const TrajectoryModel& trajectory,
                             const StepSizeSchedule& schedule, long long n_slots, Rng& rng,
                             const TrackOptions& opts) {
  if (n_slots < 0) fail_invalid("slot count must be non-negative");
  Trajectory traj(trajectory);
  TrackRun run;
  const double x0 = traj.start(rng).x;
  AngularTrackerState st{std::asin(sweep_start(cfg, snr, x0, rng, opts)), 0, schedule, false};
  run.x_true.push_back(x0);
  run.theta_hat.push_back(st.theta);
  run.x_hat.push_back(std::sin(st.theta));
  run.degenerate.push_back(0);
  for (long long n = 1; n <= n_slots; ++n) {
    const double x = traj.advance(rng).x;
    const Observation y{noisy(matched_response(cfg, std::sin(st.theta), x), snr, rng)};
    st = angular_rbt_step(st, y);
    run.x_true.push_back(x);
    run.theta_hat.push_back(st.theta);
    run.x_hat.push_back(std::sin(st.theta));
    run.degenerate.push_back(st.degenerate ? 1 : 0);
  }
  return run;
}

}  // namespace beamtrack
