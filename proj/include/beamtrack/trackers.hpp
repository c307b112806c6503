#pragma once

// Coarse beam sweeping and recursive beam tracking in x and in theta.

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "beamtrack/array.hpp"
#include "beamtrack/dynamics.hpp"

namespace beamtrack {

struct Diminishing {
  double alpha = 0.0;
  double n0 = 0.0;
};

struct Fixed {
  double alpha = 0.0;
};

/// a_n = alpha/(n + N0) or a_n = alpha.
class StepSizeSchedule {
 public:
  static StepSizeSchedule diminishing(double alpha, double n0 = 0.0);
  static StepSizeSchedule fixed(double alpha);

  double step(long long n) const;
  double alpha() const noexcept;
  bool is_fixed() const noexcept { return std::holds_alternative<Fixed>(v_); }
  double n0() const noexcept;

 private:
  using Variant = std::variant<Diminishing, Fixed>;
  explicit StepSizeSchedule(Variant v) : v_(v) {}
  Variant v_;
};

/// lambda / (sqrt(M) (M-1) pi d).
double alpha_star(const ArrayConfig& cfg);

/// 2m/M - (M+1)/M for m = 1..M.
std::vector<double> sweep_directions(const ArrayConfig& cfg);

/// Rows of the unitary sweep matrix: a(direction_m)/sqrt(M).
std::vector<BeamformingVector> coarse_sweep_codebook(const ArrayConfig& cfg);

/// Argmax over the dictionary {(2k-1-M0)/M0} of |a(x)^H W y|, smallest
/// atom on ties. `sweep` holds one observation per codebook row, in order.
SpatialFrequency initial_estimate(const ArrayConfig& cfg, std::span<const Observation> sweep,
                                  int m0);

struct TrackerState {
  SpatialFrequency estimate;
  long long slot = 0;
  StepSizeSchedule schedule = StepSizeSchedule::fixed(1.0);
};

/// x_n = clamp(x_{n-1} - a_n Im{y}, -1, 1). `y` must come from the
/// beamformer matched to state.estimate.
TrackerState rbt_step(const TrackerState& state, Observation y);

struct AngularTrackerState {
  double theta = 0.0;
  long long slot = 0;
  StepSizeSchedule schedule = StepSizeSchedule::fixed(1.0);
  /// Set when |cos theta| fell below the guard; the update was skipped.
  bool degenerate = false;
};

inline constexpr double kDegenerateCos = 1e-6;

/// theta_n = clamp(theta_{n-1} - a_n Im{y}/cos(theta_{n-1}), -pi/2, pi/2).
AngularTrackerState angular_rbt_step(const AngularTrackerState& state, Observation y);

struct TrackOptions {
  /// Skip the sweep and start from this estimate when set.
  std::optional<double> initial_estimate;
  int m0 = 0;  // 0 selects 2M
  /// SNR of the sweep stage; defaults to the tracking SNR.
  std::optional<SnrConfig> sweep_snr;
};

/// Per-slot record of one tracking run. Index 0 is the post-sweep state.
struct TrackRun {
  std::vector<double> x_true;
  std::vector<double> x_hat;
  std::vector<double> theta_hat;  // Algorithm 2 only
  std::vector<char> degenerate;   // Algorithm 2 only
};

/// Sweep, then n_slots recursive updates with the matched beamformer.
TrackRun run_tracker(const ArrayConfig& cfg, const SnrConfig& snr,
                     const TrajectoryModel& trajectory, const StepSizeSchedule& schedule,
                     long long n_slots, Rng& rng, const TrackOptions& opts = {});

/// Same loop with the angular-domain update.
TrackRun run_angular_tracker(const ArrayConfig& cfg, const SnrConfig& snr,
                             const TrajectoryModel& trajectory,
                             const StepSizeSchedule& schedule, long long n_slots, Rng& rng,
                             const TrackOptions& opts = {});

}  // namespace beamtrack
