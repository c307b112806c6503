#pragma once

// Common slot-by-slot interface shared by the recursive trackers and the
// baselines so the harness can drive all of them with one loop.

#include <memory>
#include <span>
#include <string>

#include "beamtrack/trackers.hpp"

namespace beamtrack {

class TrackingAlgorithm {
 public:
  virtual ~TrackingAlgorithm() = default;

  virtual std::string name() const = 0;

  /// Consume the coarse-sweep observations, one per codebook row.
  virtual void initialize(std::span<const Observation> sweep) = 0;

  /// Start from a known direction instead of a sweep. Algorithms that
  /// cannot be seeded this way throw InvalidArgument.
  virtual void initialize_at(double x);

  /// Noiseless response w^H a(x) of the pilot beamformer for the next slot.
  /// Randomized probes draw from `probe_rng`.
  virtual cplx pilot_response(double x, Rng& probe_rng) = 0;

  /// Absorb the normalized observation of the pilot chosen above.
  virtual void update(Observation y) = 0;

  /// Current direction estimate in x. May be computed lazily.
  virtual double estimate_x() = 0;

  /// Direct channel estimate of h / beta, when the algorithm forms one.
  virtual const CVec* channel_estimate() { return nullptr; }

  virtual bool diverged() const { return false; }
};

class RecursiveAlgorithm final : public TrackingAlgorithm {
 public:
  RecursiveAlgorithm(ArrayConfig cfg, StepSizeSchedule schedule, int m0 = 0);

  std::string name() const override { return "recursive"; }
  void initialize(std::span<const Observation> sweep) override;
  void initialize_at(double x) override;
  cplx pilot_response(double x, Rng&) override;
  void update(Observation y) override;
  double estimate_x() override { return state_.estimate; }

 private:
  ArrayConfig cfg_;
  int m0_;
  TrackerState state_;
};

class AngularAlgorithm final : public TrackingAlgorithm {
 public:
  AngularAlgorithm(ArrayConfig cfg, StepSizeSchedule schedule, int m0 = 0);

  std::string name() const override { return "angular"; }
  void initialize(std::span<const Observation> sweep) override;
  void initialize_at(double x) override;
  cplx pilot_response(double x, Rng&) override;
  void update(Observation y) override;
  double estimate_x() override;
  bool diverged() const override { return state_.degenerate; }
  double theta() const noexcept { return state_.theta; }

 private:
  ArrayConfig cfg_;
  int m0_;
  AngularTrackerState state_;
};

}  // namespace beamtrack
