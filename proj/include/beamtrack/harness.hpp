#pragma once

// Monte-Carlo experiment runner.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "beamtrack/baselines.hpp"
#include "beamtrack/dynamics.hpp"

namespace beamtrack {

enum class ExperimentKind {
  StaticConvergence,
  DynamicTrajectory,
  VelocitySweep,
  MaxVelocityTable,
  InitSuccessRate,
  TheoryDiagnostics,
  CrlbReport,  // closed-form bounds only, no Monte-Carlo
};

enum class AlgorithmKind { Recursive, Angular, LeastSquares, CompressedSensing, Wlan, Kalman };

std::string to_string(ExperimentKind k);
std::string to_string(AlgorithmKind k);
std::optional<AlgorithmKind> parse_algorithm(const std::string& s);

struct StepSpec {
  bool fixed = false;
  std::optional<double> alpha;  // empty selects alpha*
  double n0 = 0.0;
};

struct KalmanSpec {
  /// Empty selects a grid search over candidate values on separate trials.
  std::optional<double> process_noise = 0.0;
  double offset_deg = 3.5;
  double initial_variance = 0.0;
  int tuning_trials = 8;
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::StaticConvergence;

  int antennas = 16;       // tracking array
  int data_antennas = 0;   // 0 selects `antennas`
  double spacing_ratio = 0.5;
  double snr_db = 10.0;
  std::optional<double> sweep_snr_db;  // coarse-sweep stage; defaults to snr_db
  cplx pilot{0.70710678118654752440, -0.70710678118654752440};
  cplx beta{0.70710678118654752440, 0.70710678118654752440};
  int m0 = 0;  // 0 selects 2M

  std::vector<AlgorithmKind> algorithms{AlgorithmKind::Recursive};
  StepSpec step;
  KalmanSpec kalman;
  int wlan_period = 3;

  /// Static scenario direction; drawn uniformly on [-1, 1] per trial when empty.
  std::optional<double> static_x;
  /// Start the trackers here instead of running the coarse sweep.
  std::optional<double> initial_x;
  TrajectoryModel trajectory = SinusoidJitter{};

  long long n_slots = 2000;
  int n_trials = 100;
  std::uint64_t seed = 1;
  int workers = 1;
  /// Slots at which per-slot series are recorded; empty records every slot.
  std::vector<long long> record_slots;

  // VelocitySweep
  std::vector<double> omegas;
  // MaxVelocityTable
  double pilots_per_second = 5.0;
  double capacity_fraction = 0.95;
  double omega_max = 0.5;
  double omega_tolerance = 1e-4;
  // InitSuccessRate
  std::vector<int> antenna_counts;
  // TheoryDiagnostics
  double theory_x = 0.5;
  double theory_x0 = 0.6;
  double delta = 0.01;
};

/// Throws Error(Config) naming the offending field.
void validate(const ExperimentSpec& spec);

ArrayConfig tracking_array(const ExperimentSpec& spec);
ArrayConfig data_array(const ExperimentSpec& spec);

struct MetricSeries {
  std::string algorithm;
  std::string metric;
  std::vector<long long> slot;
  std::vector<double> mean;
  std::vector<double> stderr_;
  std::vector<std::int64_t> n_trials;
};

struct SummaryRow {
  std::string param;
  std::string algorithm;
  double value = 0.0;
};

struct SummaryTable {
  std::string name;
  std::vector<SummaryRow> rows;
};

/// End-of-run facts about one trial of one algorithm. Averages and the
/// excursion flag cover every slot, except in the static scenario where they
/// cover the recorded slots only.
struct TrialOutcome {
  double x_true = 0.0;      // at the last slot
  double x_hat = 0.0;       // at the last slot
  double initial_x_hat = 0.0;
  bool converged = false;   // |x_hat - x| < lambda/(2 M d) at the last slot
  bool excursion = false;   // some slot left the mainlobe half-width or hit a degenerate update
  double mean_rate = 0.0;
  double mean_mse_h = 0.0;
  double mean_aoa_error_deg = 0.0;
};

struct ExperimentResult {
  std::vector<MetricSeries> series;
  std::vector<SummaryTable> tables;
  /// outcomes[a][t] for algorithm index a and trial t (Static and Dynamic kinds).
  std::vector<std::vector<TrialOutcome>> outcomes;
  std::vector<std::string> notes;

  const SummaryTable* table(const std::string& name) const;
  const MetricSeries* find(const std::string& algorithm, const std::string& metric) const;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Mean rate over the horizon for a fixed-velocity trajectory, as a fraction
/// of capacity. Trials reuse `spec.seed`, so calls at different omegas
/// share their noise.
double capacity_fraction_at(const ExperimentSpec& spec, AlgorithmKind algo, double omega);

}  // namespace beamtrack
