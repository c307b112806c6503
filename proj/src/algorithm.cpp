#include "beamtrack/algorithm.hpp"

#include <cmath>

namespace beamtrack {

void TrackingAlgorithm::initialize_at(double) {
  fail_invalid(name() + " cannot start from a given direction");
}

RecursiveAlgorithm::RecursiveAlgorithm(ArrayConfig cfg, StepSizeSchedule schedule, int m0)
    : cfg_(cfg), m0_(m0 > 0 ? m0 : 2 * cfg.num_antennas), state_{{}, 0, schedule} {}

void RecursiveAlgorithm::initialize(std::span<const Observation> sweep) {
  state_.estimate = initial_estimate(cfg_, sweep, m0_);
  state_.slot = 0;
}

void RecursiveAlgorithm::initialize_at(double x) {
  state_.estimate = SpatialFrequency(x);
  state_.slot = 0;
}

cplx RecursiveAlgorithm::pilot_response(double x, Rng&) {
  return matched_response(cfg_, state_.estimate, x);
}

void RecursiveAlgorithm::update(Observation y) { state_ = rbt_step(state_, y); }

AngularAlgorithm::AngularAlgorithm(ArrayConfig cfg, StepSizeSchedule schedule, int m0)
    : cfg_(cfg), m0_(m0 > 0 ? m0 : 2 * cfg.num_antennas), state_{0.0, 0, schedule, false} {}

void AngularAlgorithm::initialize(std::span<const Observation> sweep) {
  state_.theta = std::asin(initial_estimate(cfg_, sweep, m0_).value());
  state_.slot = 0;
  state_.degenerate = false;
}

void AngularAlgorithm::initialize_at(double x) {
  state_.theta = std::asin(SpatialFrequency(x).value());
  state_.slot = 0;
  state_.degenerate = false;
}

cplx AngularAlgorithm::pilot_response(double x, Rng&) {
  return matched_response(cfg_, std::sin(state_.theta), x);
}

void AngularAlgorithm::update(Observation y) { state_ = angular_rbt_step(state_, y); }

double AngularAlgorithm::estimate_x() { return std::sin(state_.theta); }

}  // namespace beamtrack
