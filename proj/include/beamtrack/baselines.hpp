#pragma once

// Comparison trackers: least squares over the sweep codebook, single-atom
// compressed sensing with random quadrature probes, sector sweep with
// neighbour refinement, and an extended Kalman filter on theta.

#include <optional>
#include <vector>

#include "beamtrack/algorithm.hpp"

namespace beamtrack {

/// Whether pilots from all past slots are pooled (static scenario) or only a
/// recent window is kept (dynamic scenario).
enum class BaselineMode { Static, Dynamic };

class LeastSquares final : public TrackingAlgorithm {
 public:
  LeastSquares(ArrayConfig cfg, BaselineMode mode, int m0 = 0);

  std::string name() const override { return "ls"; }
  void initialize(std::span<const Observation> sweep) override;
  cplx pilot_response(double x, Rng&) override;
  void update(Observation y) override;
  double estimate_x() override;
  const CVec* channel_estimate() override;

  /// Codebook row probed next, 0-based.
  int next_codeword() const noexcept { return next_; }

 private:
  void refresh();

  ArrayConfig cfg_;
  BaselineMode mode_;
  int m0_;
  std::vector<BeamformingVector> book_;
  std::vector<double> dirs_;
  CVec sums_;
  std::vector<long long> counts_;
  int next_ = 0;
  double x_hat_ = 0.0;
  CVec h_hat_;
  bool stale_ = true;
};

class CompressedSensing final : public TrackingAlgorithm {
 public:
  static constexpr int kDictionarySize = 1024;

  CompressedSensing(ArrayConfig cfg, BaselineMode mode, int m0 = 0);

  std::string name() const override { return "cs"; }
  void initialize(std::span<const Observation> sweep) override;
  void initialize_at(double x) override;
  cplx pilot_response(double x, Rng& probe_rng) override;
  void update(Observation y) override;
  double estimate_x() override;

  int window() const noexcept { return window_; }
  std::size_t buffered() const noexcept { return probes_.size(); }

 private:
  ArrayConfig cfg_;
  BaselineMode mode_;
  int m0_;
  int window_;
  CVec probe_;  // weights of the pending probe
  std::vector<CVec> probes_;
  std::vector<cplx> obs_;
  // Static mode pools all slots through sufficient statistics:
  // b = sum w_n y_n and the diagonal sums of sum w_n w_n^H.
  CVec b_;
  CVec diag_;
  long long pooled_ = 0;
  double x_hat_ = 0.0;
  bool stale_ = true;
};

class SectorSweep final : public TrackingAlgorithm {
 public:
  SectorSweep(ArrayConfig cfg, int period = 3);

  std::string name() const override { return "wlan"; }
  void initialize(std::span<const Observation> sweep) override;
  cplx pilot_response(double x, Rng&) override;
  void update(Observation y) override;
  double estimate_x() override { return dirs_[best_]; }

  /// 0-based index of the current best codebook entry.
  int best_index() const noexcept { return best_; }
  const std::vector<int>& candidates() const noexcept { return cand_; }

 private:
  void begin_refinement();

  ArrayConfig cfg_;
  int period_;
  std::vector<double> dirs_;
  int best_ = 0;
  std::vector<int> cand_;
  std::vector<double> energy_;
  std::vector<int> hits_;
  int phase_ = 0;
};

struct KalmanParams {
  double offset_deg = 3.5;
  /// Random-walk variance per slot in rad^2.
  double process_noise = 0.0;
  /// Initial error variance in rad^2; 0 selects (lambda/(M d))^2.
  double initial_variance = 0.0;
};

class KalmanTracker final : public TrackingAlgorithm {
 public:
  KalmanTracker(ArrayConfig cfg, double rho, KalmanParams params, int m0 = 0);

  std::string name() const override { return "kf"; }
  void initialize(std::span<const Observation> sweep) override;
  void initialize_at(double x) override;
  cplx pilot_response(double x, Rng&) override;
  void update(Observation y) override;
  double estimate_x() override { return std::sin(theta_); }
  bool diverged() const override { return diverged_; }

  double theta() const noexcept { return theta_; }
  double variance() const noexcept { return p_; }

 private:
  double probe_angle() const;

  ArrayConfig cfg_;
  double rho_;
  KalmanParams params_;
  int m0_;
  double theta_ = 0.0;
  double p_ = 0.0;
  long long slot_ = 0;
  bool diverged_ = false;
};

}  // namespace beamtrack
