#pragma once

// Beam-direction trajectories.

#include <variant>
#include <vector>

#include "beamtrack/rng.hpp"

namespace beamtrack {

struct StaticDirection {
  double x = 0.0;
};

/// theta_n = amplitude sin(2 pi n / period) + jitter_std N(0, 1).
struct SinusoidJitter {
  double amplitude = kPi / 3.0;
  double period = 1000.0;
  double jitter_std = 0.005;
};

/// theta_n = theta_{n-1} + delta omega, delta in {-1, +1} reversing at +-bound.
struct FixedVelocity {
  double omega = 0.0;
  double bound = kPi / 3.0;
  double theta0 = 0.0;
};

using TrajectoryModel = std::variant<StaticDirection, SinusoidJitter, FixedVelocity>;

/// Validates parameters; throws InvalidArgument.
void validate(const TrajectoryModel& model);

struct TrajectorySample {
  double theta = 0.0;
  double x = 0.0;
};

/// Stateful walker over a trajectory. Slot 0 is the sample before tracking
/// starts (used by the coarse sweep); each advance() moves one slot forward.
class Trajectory {
 public:
  explicit Trajectory(TrajectoryModel model);

  TrajectorySample start(Rng& rng);
  TrajectorySample advance(Rng& rng);
  long long slot() const noexcept { return n_; }
  const TrajectoryModel& model() const noexcept { return model_; }

 private:
  TrajectorySample at_current(Rng& rng);

  TrajectoryModel model_;
  long long n_ = 0;
  double theta_ = 0.0;
  int delta_ = 1;
};

/// Samples for slots 0..n_slots inclusive.
std::vector<TrajectorySample> sample_path(const TrajectoryModel& model, long long n_slots,
                                          Rng& rng);

}  // namespace beamtrack
