// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 when any
// criterion fails. Tolerances are fixed here and never adjusted to the data.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "beamtrack/analysis.hpp"
#include "beamtrack/array.hpp"
#include "beamtrack/config.hpp"
#include "beamtrack/crlb.hpp"
#include "beamtrack/metrics.hpp"
#include "beamtrack/stats.hpp"
#include "beamtrack/trackers.hpp"

using namespace beamtrack;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Check {
  bool pass = false;
  std::string detail;
};

double table_value(const ExperimentResult& r, const std::string& table, const std::string& param,
                   const std::string& alg) {
  const SummaryTable* t = r.table(table);
  if (!t) throw Error(ErrorCode::Runtime, "missing table " + table);
  for (const auto& row : t->rows)
    if (row.param == param && row.algorithm == alg) return row.value;
  throw Error(ErrorCode::Runtime, "missing row " + param + "/" + alg + " in " + table);
}

double series_at(const ExperimentResult& r, const std::string& alg, const std::string& metric,
                 long long slot) {
  const MetricSeries* s = r.find(alg, metric);
  if (!s) throw Error(ErrorCode::Runtime, "missing series " + alg + "/" + metric);
  for (std::size_t i = 0; i < s->slot.size(); ++i)
    if (s->slot[i] == slot) return s->mean[i];
  throw Error(ErrorCode::Runtime, "slot not recorded");
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

ExperimentSpec static_spec(long long slots, int trials) {
  ExperimentSpec s = default_config(ExperimentKind::StaticConvergence).spec;
  s.antennas = 16;
  s.spacing_ratio = 0.5;
  s.snr_db = 10.0;
  s.step = {false, std::nullopt, 0.0};
  s.n_slots = slots;
  s.n_trials = trials;
  s.seed = kSeed;
  s.record_slots = {slots};
  return s;
}

// Criteria 1 and 2 share one static run.
const ExperimentResult& static_run() {
  static const ExperimentResult r = run_experiment(static_spec(2000, 10000));
  return r;
}

Check crlb_attainment() {
  const auto& r = static_run();
  const double target = 0.0689;
  const double all = series_at(r, "recursive", "n_mse_h", 2000);
  const double conv = series_at(r, "recursive", "n_mse_h_converged", 2000);
  const double excluded = table_value(r, "static_summary", "excluded_trials", "recursive");
  const bool pass = all >= 0.0586 && all <= 0.0792;
  return {pass, fmt("mean n*mse_h = %.5f, band [0.0586, 0.0792] around %.4f; "
                    "over the %g-trial converged subset %.5f",
                    all, target, 10000.0 - excluded, conv)};
}

Check asymptotic_normality() {
  const auto& r = static_run();
  const double crlb = min_crlb_x(ArrayConfig::make(16), 10.0, 1);
  const double var = table_value(r, "static_summary", "var_sqrt_n_error_converged", "recursive");
  const double ad = table_value(r, "static_summary", "anderson_darling_first_1000", "recursive");
  const bool var_ok = std::abs(var / crlb - 1.0) <= 0.15;
  const bool normal_ok = ad < kAndersonDarling5pct;
  return {var_ok && normal_ok,
          fmt("var sqrt(n)(x_n - x) = %.4e vs 1/I_max = %.4e (ratio %.3f, need within 15%%); ",
              var, crlb, var / crlb) +
              fmt("Anderson-Darling A2* = %.3f (reject above %.3f)", ad, kAndersonDarling5pct)};
}

Check initial_estimate_success() {
  ExperimentSpec s = default_config(ExperimentKind::InitSuccessRate).spec;
  s.snr_db = 0.0;
  s.m0 = 0;
  s.antenna_counts = {8, 16};
  s.n_trials = 10000;
  s.seed = kSeed;
  const auto r = run_experiment(s);
  const double p8 = table_value(r, "init_success", "M=8", "success_rate");
  const double p16 = table_value(r, "init_success", "M=16", "success_rate");
  const double w8 = table_value(r, "init_success", "M=8", "failures_wrapped_across_edge");
  const double w16 = table_value(r, "init_success", "M=16", "failures_wrapped_across_edge");
  return {p8 >= 0.999 && p16 >= 0.999,
          fmt("P(x0 in B(x)) M=8: %.4f, M=16: %.4f (need >= 0.999); "
              "failures wrapped across the +-1 edge: %g and %g",
              p8, p16, w8, w16)};
}

Check stable_point_structure() {
  const auto cfg = ArrayConfig::make(8, 0.5);
  const double x = 0.5;
  const auto sp = stable_points(cfg, x);
  // Independent oracle: scan for + to - sign changes of f and bisect.
  std::vector<double> roots;
  auto f = [&](double v) { return f_gain(cfg, v, x); };
  const int n = 100000;
  for (int i = 1; i <= n; ++i) {
    double lo = -1.0 + 2.0 * (i - 1) / n, hi = -1.0 + 2.0 * i / n;
    if (!(f(lo) > 0.0 && f(hi) <= 0.0)) continue;
    for (int k = 0; k < 80; ++k) {
      const double mid = 0.5 * (lo + hi);
      (f(mid) > 0.0 ? lo : hi) = mid;
    }
    roots.push_back(0.5 * (lo + hi));
  }
  bool ok = sp.points.size() == 7 && roots.size() == 7 &&
            std::abs(sp.spacing - 2.0 / 7.0) < 1e-12;
  double worst = 0.0;
  for (std::size_t i = 0; ok && i < roots.size(); ++i) {
    worst = std::max(worst, std::abs(sp.points[i] - roots[i]));
    const double h = 1e-7;
    if (!((f(sp.points[i] + h) - f(sp.points[i] - h)) / (2 * h) < 0.0)) ok = false;
    if (!(sp.points[i] > -1.0 && sp.points[i] <= 1.0)) ok = false;
  }
  ok = ok && worst < 1e-9;
  return {ok, fmt("%g stable points, spacing %.6f (2/7 = %.6f), max distance to oracle root %.2e",
                  static_cast<double>(sp.points.size()), sp.spacing, 2.0 / 7.0, worst)};
}

Check dynamic_capacity() {
  ExperimentSpec s = default_config(ExperimentKind::DynamicTrajectory).spec;
  s.antennas = 16;
  s.snr_db = 10.0;
  s.trajectory = SinusoidJitter{};
  s.step = {true, std::nullopt, 0.0};
  s.n_slots = 10000;
  s.n_trials = 100;
  s.seed = kSeed;
  s.algorithms = {AlgorithmKind::Recursive};
  const auto r = run_experiment(s);
  const double rate = table_value(r, "dynamic_summary", "mean_rate", "recursive");
  const double cap = capacity(ArrayConfig::make(16), 10.0);
  return {rate >= 0.95 * 7.33,
          fmt("mean rate %.4f bits/s/Hz >= 0.95 x 7.33 = %.4f (capacity %.4f)", rate,
              0.95 * 7.33, cap)};
}

Check velocity_threshold() {
  ExperimentSpec s = default_config(ExperimentKind::MaxVelocityTable).spec;
  s.antennas = 8;
  s.data_antennas = 16;
  s.snr_db = 10.0;
  s.step = {true, std::nullopt, 0.0};
  s.n_slots = 10000;
  s.seed = kSeed;
  s.algorithms = {AlgorithmKind::Recursive};
  const double at_064 = capacity_fraction_at(s, AlgorithmKind::Recursive, 0.064);
  const double at_13 = capacity_fraction_at(s, AlgorithmKind::Recursive, 0.13);
  const auto r = run_experiment(s);
  const double deg = table_value(r, "max_velocity", "max_omega_deg_per_s", "recursive");
  const bool holds = at_064 >= 0.95;
  const bool fails = at_13 < 0.95;
  const bool table = std::abs(deg - 18.33) <= 0.15 * 18.33;
  return {holds && fails && table,
          fmt("capacity fraction %.4f at 0.064 rad/slot (need >= 0.95), %.4f at 0.13 (need < 0.95); "
              "max velocity %.2f deg/s vs 18.33 +-15%%",
              at_064, at_13, deg)};
}

Check baseline_ordering() {
  ExperimentSpec s = static_spec(1000, 200);
  s.algorithms = {AlgorithmKind::Recursive, AlgorithmKind::LeastSquares,
                  AlgorithmKind::CompressedSensing, AlgorithmKind::Wlan, AlgorithmKind::Kalman};
  s.kalman.process_noise.reset();
  const auto r = run_experiment(s);
  const double rbt = series_at(r, "recursive", "mse_h", 1000);
  bool ok = true;
  std::string detail = fmt("mse_h at n=1000: recursive %.4g", rbt);
  for (const char* alg : {"ls", "cs", "wlan", "kf"}) {
    const double v = series_at(r, alg, "mse_h", 1000);
    ok = ok && rbt < v;
    detail += std::string(", ") + alg + fmt(" %.4g", v);
  }
  return {ok, detail};
}

Check theory_inequality() {
  // Bound against the empirical convergence frequency in a regime where it applies.
  const auto cfg = ArrayConfig::make(8);
  const double alpha = alpha_star(cfg) / 10.0;
  const double n0 = 50.0, x = 0.0, x0 = 0.1, delta = 0.05, snr_db = 30.0;
  const auto b = convergence_bound(cfg, db_to_linear(snr_db), alpha, n0, x, x0, delta);

  ExperimentSpec s = static_spec(2000, 10000);
  s.antennas = 8;
  s.snr_db = snr_db;
  s.static_x = x;
  s.initial_x = x0;
  s.step = {false, alpha, n0};
  const auto r = run_experiment(s);
  const double freq = table_value(r, "static_summary", "converged_trials", "recursive") / 1e4;
  const bool bound_ok = b.applicable && b.bound <= freq;

  // Non-convergence against SNR with alpha* and a start inside the mainlobe.
  std::vector<double> fails;
  for (double db : {5.0, 10.0, 15.0}) {
    ExperimentSpec m = static_spec(2000, 10000);
    m.antennas = 8;
    m.snr_db = db;
    m.static_x = 0.0;
    m.initial_x = 0.9 * mainlobe_half_width(cfg);
    m.step = {false, std::nullopt, 0.0};
    const auto rr = run_experiment(m);
    fails.push_back(1.0 - table_value(rr, "static_summary", "converged_trials", "recursive") / 1e4);
  }
  const bool mono = fails[0] >= fails[1] && fails[1] >= fails[2] && fails[0] > fails[2];
  return {bound_ok && mono,
          fmt("bound %.4f (applicable %g) <= empirical convergence %.4f; ", b.bound,
              b.applicable ? 1.0 : 0.0, freq) +
              fmt("non-convergence at 5/10/15 dB: %.4f, %.4f, %.4f", fails[0], fails[1], fails[2])};
}

Check oracle_equivalences() {
  const auto cfg = ArrayConfig::make(16);
  double worst_f = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double v = -1.0 + 2.0 * (i + 0.5) / 10000.0;
    const double xx = std::sin(0.37 * i);
    worst_f = std::max(worst_f, std::abs(f_gain(cfg, v, xx) - f_gain_closed(cfg, v, xx)));
  }

  const double rho = 10.0, x = 0.3;
  const auto w = conjugate_beamformer(cfg, SpatialFrequency(x));
  Rng rng(derive_seed(kSeed, 9));
  MeanAccumulator acc;
  const cplx mean = array_response(w, cfg, x);
  for (int i = 0; i < 100000; ++i)
    acc.add(score({mean + rng.complex_normal() / std::sqrt(rho)}, cfg, x, w, rho));
  const double fi = fisher_information(cfg, rho, x, w).value;
  const double fi_err = std::abs(acc.variance() / fi - 1.0);

  double worst_fd = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double xk = rng.uniform(-0.95, 0.95);
    const auto wk = conjugate_beamformer(cfg, SpatialFrequency(xk));
    const Observation y{array_response(wk, cfg, xk + rng.uniform(-0.02, 0.02)) +
                        rng.complex_normal() / std::sqrt(rho)};
    const double h = 1e-6;
    const double fd = (log_likelihood(y, cfg, xk + h, wk, rho) -
                       log_likelihood(y, cfg, xk - h, wk, rho)) / (2 * h);
    const double closed = matched_score(y, cfg, rho);
    worst_fd = std::max(worst_fd, std::abs(fd - closed) / std::abs(closed));
  }
  return {worst_f <= 1e-10 && fi_err <= 0.05 && worst_fd <= 1e-6,
          fmt("f sum vs closed form %.2e (<= 1e-10); score variance vs Fisher %.2f%% (<= 5%%); "
              "finite difference vs matched score %.2e relative (<= 1e-6)",
              worst_f, 100.0 * fi_err, worst_fd)};
}

Check algorithm2_pathology() {
  const auto cfg = ArrayConfig::make(8);
  const double x = std::sin(88.0 * kPi / 180.0);
  ExperimentSpec s = default_config(ExperimentKind::DynamicTrajectory).spec;
  s.antennas = 8;
  s.snr_db = 10.0;
  s.trajectory = StaticDirection{x};
  s.step = {true, std::nullopt, 0.0};
  s.n_slots = 1000;
  s.n_trials = 1000;
  s.seed = kSeed;
  s.algorithms = {AlgorithmKind::Recursive, AlgorithmKind::Angular};

  // Both algorithms start from the noiseless Stage-1 estimate, so any
  // excursion comes from the tracking recursion itself.
  std::vector<Observation> sweep;
  for (const auto& w : coarse_sweep_codebook(cfg)) sweep.push_back({array_response(w, cfg, x)});
  const double start = initial_estimate(cfg, sweep, 16).value();
  s.initial_x = start;
  const auto r = run_experiment(s);
  const double a1 = table_value(r, "dynamic_summary", "excursion_trials", "recursive") / 1000.0;
  const double a2 = table_value(r, "dynamic_summary", "excursion_trials", "angular") / 1000.0;

  // Reported only: with a noisy sweep the start can alias to the -1 edge.
  s.initial_x.reset();
  const auto swept = run_experiment(s);
  const double s1 = table_value(swept, "dynamic_summary", "excursion_trials", "recursive") / 1000.0;
  const double s2 = table_value(swept, "dynamic_summary", "excursion_trials", "angular") / 1000.0;
  return {a2 >= 0.10 && a1 < 0.01,
          fmt("start x0 = %.5f; trials with an excursion: Algorithm 2 %.1f%% (need >= 10%%), "
              "Algorithm 1 %.1f%% (need < 1%%)",
              start, 100.0 * a2, 100.0 * a1) +
              fmt("; from a noisy sweep: %.1f%% and %.1f%%", 100.0 * s2, 100.0 * s1)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Check()>>> criteria{
      {"CRLB attainment", crlb_attainment},
      {"Asymptotic normality", asymptotic_normality},
      {"Initial-estimate success", initial_estimate_success},
      {"Stable-point structure", stable_point_structure},
      {"Dynamic capacity", dynamic_capacity},
      {"Velocity threshold", velocity_threshold},
      {"Baseline ordering", baseline_ordering},
      {"Theory inequality", theory_inequality},
      {"Oracle equivalences", oracle_equivalences},
      {"Algorithm 2 pathology", algorithm2_pathology},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s [%zu] %s: %s (%.1fs)\n", c.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                c.detail.c_str(), secs);
    std::fflush(stdout);
    failed += c.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
