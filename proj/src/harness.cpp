#include "beamtrack/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <thread>

#include "beamtrack/analysis.hpp"
#include "beamtrack/crlb.hpp"
#include "beamtrack/metrics.hpp"
#include "beamtrack/stats.hpp"

namespace beamtrack {

namespace {

constexpr int kBlockSize = 16;

[[noreturn]] void config_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::Config, field + ": " + what, field);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Runs work(acc, trial) over all trials in fixed-size blocks on `workers`
// threads and merges block accumulators strictly in block order, so the
// merged result does not depend on the number of threads.
template <class Acc, class Make, class Work, class Merge>
void run_blocks(int n_trials, int workers, Make make, Work work, Merge merge) {
  const int n_blocks = (n_trials + kBlockSize - 1) / kBlockSize;
  std::atomic<int> next{0};
  std::mutex mu;
  std::map<int, Acc> pending;
  int merge_next = 0;
  std::exception_ptr error;

  auto body = [&] {
    for (;;) {
      const int b = next.fetch_add(1);
      if (b >= n_blocks) return;
      try {
        Acc acc = make();
        const int hi = std::min(n_trials, (b + 1) * kBlockSize);
        for (int t = b * kBlockSize; t < hi; ++t) work(acc, t);
        std::lock_guard<std::mutex> lock(mu);
        pending.emplace(b, std::move(acc));
        for (auto it = pending.find(merge_next); it != pending.end();
             it = pending.find(merge_next)) {
          merge(it->second);
          pending.erase(it);
          ++merge_next;
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
        next.store(n_blocks);
        return;
      }
    }
  };

  const int extra = std::max(0, std::min(workers, n_blocks) - 1);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(extra));
  for (int i = 0; i < extra; ++i) pool.emplace_back(body);
  body();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

struct TrialStreams {
  std::uint64_t trajectory;
  std::uint64_t noise;
  std::uint64_t probe;
  std::uint64_t draw;
};

TrialStreams streams_for(std::uint64_t seed, int trial) {
  const std::uint64_t root = derive_seed(seed, static_cast<std::uint64_t>(trial));
  return {derive_seed(root, 0), derive_seed(root, 1), derive_seed(root, 2), derive_seed(root, 3)};
}

enum Metric : int {
  kMseH,
  kNMseH,
  kMseX,
  kAoaErr,
  kRate,
  kThetaHat,
  kTheta,
  kNumMetrics,
};

const char* const kMetricNames[kNumMetrics] = {
    "mse_h", "n_mse_h", "mse_x", "aoa_error_deg", "rate", "theta_hat_deg", "theta_deg",
};

// Metrics that also get a series restricted to converged trials.
constexpr Metric kConvergedMetrics[] = {kMseH, kNMseH, kMseX};

struct RunPlan {
  ArrayConfig track;
  ArrayConfig data;
  SnrConfig snr;
  SnrConfig sweep_snr;
  ChannelState channel_template;
  bool static_scenario = false;
  std::vector<long long> record;  // ascending slots, may be empty
  bool scan_every_slot = true;    // outcome averages over all slots
  std::vector<AlgorithmKind> algos;
  std::vector<double> kalman_q;  // per algorithm; only read for Kalman
};

std::unique_ptr<TrackingAlgorithm> make_algorithm(const ExperimentSpec& spec,
                                                  const RunPlan& plan, AlgorithmKind kind,
                                                  double kalman_q) {
  const ArrayConfig& cfg = plan.track;
  const double alpha = spec.step.alpha.value_or(alpha_star(cfg));
  const StepSizeSchedule schedule = spec.step.fixed
                                        ? StepSizeSchedule::fixed(alpha)
                                        : StepSizeSchedule::diminishing(alpha, spec.step.n0);
  const BaselineMode mode = plan.static_scenario ? BaselineMode::Static : BaselineMode::Dynamic;
  switch (kind) {
    case AlgorithmKind::Recursive:
      return std::make_unique<RecursiveAlgorithm>(cfg, schedule, spec.m0);
    case AlgorithmKind::Angular:
      return std::make_unique<AngularAlgorithm>(cfg, schedule, spec.m0);
    case AlgorithmKind::LeastSquares:
      return std::make_unique<LeastSquares>(cfg, mode, spec.m0);
    case AlgorithmKind::CompressedSensing:
      return std::make_unique<CompressedSensing>(cfg, mode, spec.m0);
    case AlgorithmKind::Wlan:
      return std::make_unique<SectorSweep>(cfg, spec.wlan_period);
    case AlgorithmKind::Kalman: {
      KalmanParams p;
      p.offset_deg = spec.kalman.offset_deg;
      p.initial_variance = spec.kalman.initial_variance;
      p.process_noise = kalman_q;
      return std::make_unique<KalmanTracker>(cfg, plan.snr.rho, p, spec.m0);
    }
  }
  throw Error(ErrorCode::Runtime, "unknown algorithm");
}

cplx add_noise(cplx clean, const SnrConfig& snr, Rng& rng) {
  if (snr.noise_free) return clean;
  return clean + rng.complex_normal() / std::sqrt(snr.rho);
}

struct SlotValues {
  double v[kNumMetrics];
  bool excursion;
};

SlotValues evaluate(const RunPlan& plan, TrackingAlgorithm& alg, const TrajectorySample& truth,
                    long long n) {
  SlotValues s{};
  const double xh = alg.estimate_x();
  const double x = truth.x;
  const ChannelState ch{SpatialFrequency::clamped(x), plan.channel_template.beta};
  cplx response;
  if (const CVec* h = alg.channel_estimate()) {
    s.v[kMseH] = mse_h_direct(plan.track, *h, ch);
    const double phi = plan.track.phase_step();
    cplx acc{0.0, 0.0};
    for (std::size_t m = 0; m < h->size(); ++m)
      acc += std::polar(1.0, -std::arg((*h)[m]) - phi * static_cast<double>(m) * x);
    response = acc / plan.track.sqrt_m();
  } else {
    response = matched_response(plan.data, xh, x);
    const double overlap = plan.data.sqrt_m() * response.real();
    s.v[kMseH] = std::norm(ch.beta) * std::max(0.0, 2.0 * (plan.data.num_antennas - overlap));
  }
  s.v[kNMseH] = static_cast<double>(n) * s.v[kMseH];
  s.v[kMseX] = (xh - x) * (xh - x);
  s.v[kAoaErr] = aoa_error_deg(xh, x);
  s.v[kRate] = rate_from_response(response, plan.snr.rho);
  s.v[kThetaHat] = std::asin(std::clamp(xh, -1.0, 1.0)) * 180.0 / kPi;
  s.v[kTheta] = truth.theta * 180.0 / kPi;
  s.excursion = std::abs(xh - x) > mainlobe_half_width(plan.track) || alg.diverged();
  return s;
}

struct SeriesAcc {
  // [algo][metric][record index], plus converged-only copies of some metrics.
  std::vector<MeanAccumulator> all;
  std::vector<MeanAccumulator> conv;
  std::size_t n_algos = 0;
  std::size_t n_rec = 0;

  SeriesAcc(std::size_t algos, std::size_t rec)
      : all(algos * kNumMetrics * rec), conv(algos * std::size(kConvergedMetrics) * rec),
        n_algos(algos), n_rec(rec) {}

  std::size_t index(std::size_t a, int metric, std::size_t i) const {
    return (a * kNumMetrics + static_cast<std::size_t>(metric)) * n_rec + i;
  }
  std::size_t conv_index(std::size_t a, std::size_t k, std::size_t i) const {
    return (a * std::size(kConvergedMetrics) + k) * n_rec + i;
  }
  MeanAccumulator& at(std::size_t a, int metric, std::size_t i) { return all[index(a, metric, i)]; }
  MeanAccumulator& conv_at(std::size_t a, std::size_t k, std::size_t i) {
    return conv[conv_index(a, k, i)];
  }
  void merge(const SeriesAcc& o) {
    for (std::size_t i = 0; i < all.size(); ++i) all[i].merge(o.all[i]);
    for (std::size_t i = 0; i < conv.size(); ++i) conv[i].merge(o.conv[i]);
  }
};

struct Simulation {
  std::vector<std::vector<TrialOutcome>> outcomes;
  SeriesAcc series{0, 0};
};

// Runs every trial of every algorithm in the plan over the given trajectory.
Simulation simulate(const ExperimentSpec& spec, const RunPlan& plan,
                    const TrajectoryModel& dynamic_model, int n_trials, std::uint64_t seed) {
  const std::size_t n_alg = plan.algos.size();
  const std::size_t n_rec = plan.record.size();
  const long long N = spec.n_slots;
  Simulation sim;
  sim.outcomes.assign(n_alg, std::vector<TrialOutcome>(static_cast<std::size_t>(n_trials)));
  sim.series = SeriesAcc(n_alg, n_rec);
  const double conv_radius = 0.5 * mainlobe_half_width(plan.track);

  auto work = [&](SeriesAcc& acc, int t) {
    const TrialStreams st = streams_for(seed, t);
    Rng traj_rng(st.trajectory);
    Rng draw_rng(st.draw);
    TrajectoryModel model = dynamic_model;
    if (plan.static_scenario)
      model = StaticDirection{spec.static_x ? *spec.static_x : draw_rng.uniform(-1.0, 1.0)};
    const std::vector<TrajectorySample> path = sample_path(model, N, traj_rng);

    std::vector<double> trace(n_rec * kNumMetrics);
    for (std::size_t a = 0; a < n_alg; ++a) {
      Rng noise(st.noise);
      Rng probe(st.probe);
      auto alg = make_algorithm(spec, plan, plan.algos[a], plan.kalman_q[a]);
      TrialOutcome out;
      if (spec.initial_x) {
        alg->initialize_at(*spec.initial_x);
      } else {
        std::vector<Observation> sweep;
        for (double v : sweep_directions(plan.track))
          sweep.push_back({add_noise(matched_response(plan.track, v, path[0].x), plan.sweep_snr, noise)});
        alg->initialize(sweep);
      }
      out.initial_x_hat = alg->estimate_x();

      CompensatedSum rate_sum, mse_sum, aoa_sum;
      long long scanned = 0;
      std::size_t next_rec = 0;
      for (long long n = 1; n <= N; ++n) {
        const double x = path[static_cast<std::size_t>(n)].x;
        const cplx clean = alg->pilot_response(x, probe);
        alg->update({add_noise(clean, plan.snr, noise)});
        const bool recorded = next_rec < n_rec && plan.record[next_rec] == n;
        if (!recorded && !plan.scan_every_slot && n != N) continue;
        const SlotValues sv = evaluate(plan, *alg, path[static_cast<std::size_t>(n)], n);
        if (recorded) {
          for (int k = 0; k < kNumMetrics; ++k) trace[next_rec * kNumMetrics + k] = sv.v[k];
          ++next_rec;
        }
        if (recorded || plan.scan_every_slot) {
          rate_sum.add(sv.v[kRate]);
          mse_sum.add(sv.v[kMseH]);
          aoa_sum.add(sv.v[kAoaErr]);
          out.excursion = out.excursion || sv.excursion;
          ++scanned;
        }
        if (n == N) {
          out.x_true = x;
          out.x_hat = alg->estimate_x();
        }
      }
      if (N == 0) {
        out.x_true = path[0].x;
        out.x_hat = out.initial_x_hat;
      }
      out.converged = std::abs(out.x_hat - out.x_true) < conv_radius;
      if (scanned > 0) {
        out.mean_rate = rate_sum.value() / static_cast<double>(scanned);
        out.mean_mse_h = mse_sum.value() / static_cast<double>(scanned);
        out.mean_aoa_error_deg = aoa_sum.value() / static_cast<double>(scanned);
      }
      sim.outcomes[a][static_cast<std::size_t>(t)] = out;

      for (std::size_t i = 0; i < n_rec; ++i) {
        for (int k = 0; k < kNumMetrics; ++k) acc.at(a, k, i).add(trace[i * kNumMetrics + k]);
        if (out.converged)
          for (std::size_t c = 0; c < std::size(kConvergedMetrics); ++c)
            acc.conv_at(a, c, i).add(trace[i * kNumMetrics + kConvergedMetrics[c]]);
      }
    }
  };

  run_blocks<SeriesAcc>(
      n_trials, spec.workers, [&] { return SeriesAcc(n_alg, n_rec); }, work,
      [&](const SeriesAcc& b) { sim.series.merge(b); });
  return sim;
}

RunPlan make_plan(const ExperimentSpec& spec, bool static_scenario) {
  RunPlan plan;
  plan.track = tracking_array(spec);
  plan.data = data_array(spec);
  plan.snr = SnrConfig::from_db(spec.snr_db, spec.pilot);
  plan.sweep_snr = SnrConfig::from_db(spec.sweep_snr_db.value_or(spec.snr_db), spec.pilot);
  plan.channel_template = ChannelState::make(SpatialFrequency(0.0), spec.beta);
  plan.static_scenario = static_scenario;
  plan.algos = spec.algorithms;
  plan.kalman_q.assign(plan.algos.size(), spec.kalman.process_noise.value_or(0.0));
  return plan;
}

std::vector<long long> record_slots(const ExperimentSpec& spec) {
  if (!spec.record_slots.empty()) {
    std::vector<long long> r = spec.record_slots;
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
  }
  std::vector<long long> r(static_cast<std::size_t>(spec.n_slots));
  for (long long n = 1; n <= spec.n_slots; ++n) r[static_cast<std::size_t>(n - 1)] = n;
  return r;
}

double mean_capacity_fraction(const Simulation& sim, std::size_t a, double cap) {
  CompensatedSum s;
  for (const auto& o : sim.outcomes[a]) s.add(o.mean_rate);
  return s.value() / static_cast<double>(sim.outcomes[a].size()) / cap;
}

// Picks the Kalman random-walk variance by maximizing the mean rate on
// tuning trials that do not overlap the reported ones.
void tune_kalman(const ExperimentSpec& spec, RunPlan& plan, const TrajectoryModel& model,
                 std::vector<std::string>& notes) {
  if (spec.kalman.process_noise) return;
  static const double kGrid[] = {0.0, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2};
  for (std::size_t a = 0; a < plan.algos.size(); ++a) {
    if (plan.algos[a] != AlgorithmKind::Kalman) continue;
    RunPlan probe = plan;
    probe.algos = {AlgorithmKind::Kalman};
    probe.record.clear();
    probe.scan_every_slot = true;
    double best_q = 0.0;
    double best = -1.0;
    for (double q : kGrid) {
      probe.kalman_q = {q};
      const Simulation sim = simulate(spec, probe, model, spec.kalman.tuning_trials,
                                      derive_seed(spec.seed, 0x6b616c6d616eULL));
      double r = 0.0;
      for (const auto& o : sim.outcomes[0]) r += o.mean_rate;
      if (r > best) {
        best = r;
        best_q = q;
      }
    }
    plan.kalman_q[a] = best_q;
    notes.push_back("kalman process noise selected by grid search: " + fmt(best_q));
  }
}

void emit_series(const RunPlan& plan, const Simulation& sim,
                 ExperimentResult& res) {
  for (std::size_t a = 0; a < plan.algos.size(); ++a) {
    const std::string name = to_string(plan.algos[a]);
    auto make = [&](const std::string& metric, auto&& acc_at) {
      MetricSeries s{name, metric, {}, {}, {}, {}};
      for (std::size_t i = 0; i < plan.record.size(); ++i) {
        const MeanAccumulator& m = acc_at(i);
        s.slot.push_back(plan.record[i]);
        s.mean.push_back(m.mean());
        s.stderr_.push_back(m.stderr_of_mean());
        s.n_trials.push_back(m.count());
      }
      res.series.push_back(std::move(s));
    };
    const SeriesAcc& acc = sim.series;
    for (int k = 0; k < kNumMetrics; ++k)
      make(kMetricNames[k],
           [&](std::size_t i) -> const MeanAccumulator& { return acc.all[acc.index(a, k, i)]; });
    if (plan.static_scenario)
      for (std::size_t c = 0; c < std::size(kConvergedMetrics); ++c)
        make(std::string(kMetricNames[kConvergedMetrics[c]]) + "_converged",
             [&](std::size_t i) -> const MeanAccumulator& {
               return acc.conv[acc.conv_index(a, c, i)];
             });
  }
}

// Lower-bound overlay: mse of x at 1/(n I_max) and the induced channel error
// |u'(x)|^2/(n I_max) with u = beta a_data(x).
void emit_crlb(const ExperimentSpec& spec, const RunPlan& plan, ExperimentResult& res) {
  const double imax = max_fisher_information(plan.track, plan.snr.rho).value;
  const double Md = plan.data.num_antennas;
  const double phi = plan.data.phase_step();
  const double du2 = std::norm(spec.beta) * phi * phi * Md * (Md - 1.0) * (2.0 * Md - 1.0) / 6.0;
  MetricSeries h{"crlb", "mse_h", {}, {}, {}, {}};
  MetricSeries nh{"crlb", "n_mse_h", {}, {}, {}, {}};
  MetricSeries x{"crlb", "mse_x", {}, {}, {}, {}};
  for (long long n : plan.record) {
    for (auto* s : {&h, &nh, &x}) {
      s->slot.push_back(n);
      s->stderr_.push_back(0.0);
      s->n_trials.push_back(spec.n_trials);
    }
    h.mean.push_back(du2 / (static_cast<double>(n) * imax));
    nh.mean.push_back(du2 / imax);
    x.mean.push_back(1.0 / (static_cast<double>(n) * imax));
  }
  res.series.push_back(std::move(h));
  res.series.push_back(std::move(nh));
  res.series.push_back(std::move(x));
}

ExperimentResult run_static(const ExperimentSpec& spec) {
  ExperimentResult res;
  RunPlan plan = make_plan(spec, true);
  plan.record = record_slots(spec);
  plan.scan_every_slot = false;
  tune_kalman(spec, plan, StaticDirection{spec.static_x.value_or(0.0)}, res.notes);
  Simulation sim = simulate(spec, plan, StaticDirection{0.0}, spec.n_trials, spec.seed);
  emit_series(plan, sim, res);
  emit_crlb(spec, plan, res);

  const double imax = max_fisher_information(plan.track, plan.snr.rho).value;
  const double N = static_cast<double>(spec.n_slots);
  SummaryTable t{"static_summary", {}};
  for (std::size_t a = 0; a < plan.algos.size(); ++a) {
    const std::string name = to_string(plan.algos[a]);
    std::vector<double> scaled;
    long long converged = 0;
    for (const auto& o : sim.outcomes[a]) {
      if (!o.converged) continue;
      ++converged;
      scaled.push_back(std::sqrt(N) * (o.x_hat - o.x_true));
    }
    t.rows.push_back({"converged_trials", name, static_cast<double>(converged)});
    t.rows.push_back({"excluded_trials", name, static_cast<double>(spec.n_trials - converged)});
    if (scaled.size() >= 2) {
      const double var = sample_variance(scaled);
      t.rows.push_back({"var_sqrt_n_error_converged", name, var});
      t.rows.push_back({"var_ratio_to_crlb", name, var * imax});
    }
    if (scaled.size() >= 8) {
      std::vector<double> head(scaled.begin(),
                               scaled.begin() + static_cast<long>(std::min<std::size_t>(1000, scaled.size())));
      t.rows.push_back({"anderson_darling_first_1000", name, anderson_darling_normal(head)});
    }
  }
  const double Md = plan.data.num_antennas;
  if (plan.track.num_antennas == plan.data.num_antennas)
    t.rows.push_back({"n_mse_h_limit", "crlb",
                      asymptotic_channel_crlb(plan.data, plan.snr.noise_power(spec.beta),
                                              std::norm(spec.pilot))});
  t.rows.push_back({"capacity", "crlb", std::log2(1.0 + plan.snr.rho * Md)});
  res.tables.push_back(std::move(t));
  res.outcomes = std::move(sim.outcomes);
  return res;
}

ExperimentResult run_dynamic(const ExperimentSpec& spec) {
  ExperimentResult res;
  RunPlan plan = make_plan(spec, false);
  plan.record = record_slots(spec);
  plan.scan_every_slot = true;
  tune_kalman(spec, plan, spec.trajectory, res.notes);
  Simulation sim = simulate(spec, plan, spec.trajectory, spec.n_trials, spec.seed);
  emit_series(plan, sim, res);
  const double cap = capacity(plan.data, plan.snr.rho);
  SummaryTable t{"dynamic_summary", {}};
  for (std::size_t a = 0; a < plan.algos.size(); ++a) {
    const std::string name = to_string(plan.algos[a]);
    const double frac = mean_capacity_fraction(sim, a, cap);
    t.rows.push_back({"mean_rate", name, frac * cap});
    t.rows.push_back({"capacity_fraction", name, frac});
    long long exc = 0;
    for (const auto& o : sim.outcomes[a]) exc += o.excursion ? 1 : 0;
    t.rows.push_back({"excursion_trials", name, static_cast<double>(exc)});
  }
  t.rows.push_back({"capacity", "all", cap});
  res.tables.push_back(std::move(t));
  res.outcomes = std::move(sim.outcomes);
  return res;
}

Simulation simulate_velocity(const ExperimentSpec& spec, RunPlan plan, double omega,
                             std::vector<std::string>& notes) {
  const FixedVelocity fv{omega, kPi / 3.0, 0.0};
  plan.record.clear();
  plan.scan_every_slot = true;
  tune_kalman(spec, plan, fv, notes);
  return simulate(spec, plan, fv, spec.n_trials, spec.seed);
}

ExperimentResult run_sweep(const ExperimentSpec& spec) {
  ExperimentResult res;
  RunPlan plan = make_plan(spec, false);
  const double cap = capacity(plan.data, plan.snr.rho);
  SummaryTable rate{"sweep_rate", {}};
  SummaryTable frac{"sweep_capacity_fraction", {}};
  SummaryTable mse{"sweep_mse_h", {}};
  SummaryTable aoa{"sweep_aoa_error_deg", {}};
  for (double omega : spec.omegas) {
    const Simulation sim = simulate_velocity(spec, plan, omega, res.notes);
    for (std::size_t a = 0; a < plan.algos.size(); ++a) {
      const std::string name = to_string(plan.algos[a]);
      CompensatedSum r, m, e;
      for (const auto& o : sim.outcomes[a]) {
        r.add(o.mean_rate);
        m.add(o.mean_mse_h);
        e.add(o.mean_aoa_error_deg);
      }
      const double n = static_cast<double>(spec.n_trials);
      rate.rows.push_back({fmt(omega), name, r.value() / n});
      frac.rows.push_back({fmt(omega), name, r.value() / n / cap});
      mse.rows.push_back({fmt(omega), name, m.value() / n});
      aoa.rows.push_back({fmt(omega), name, e.value() / n});
    }
  }
  for (auto* t : {&rate, &frac, &mse, &aoa}) res.tables.push_back(std::move(*t));
  return res;
}

ExperimentResult run_table(const ExperimentSpec& spec) {
  ExperimentResult res;
  SummaryTable t{"max_velocity", {}};
  for (AlgorithmKind algo : spec.algorithms) {
    const std::string name = to_string(algo);
    auto passes = [&](double omega) {
      return capacity_fraction_at(spec, algo, omega) >= spec.capacity_fraction;
    };
    double lo = 0.0;
    double hi = 0.0;
    bool reachable = passes(0.0);
    if (reachable) {
      hi = std::min(0.01, spec.omega_max);
      while (hi < spec.omega_max && passes(hi)) {
        lo = hi;
        hi = std::min(2.0 * hi, spec.omega_max);
      }
      if (hi >= spec.omega_max && passes(hi)) {
        lo = hi;
        res.notes.push_back(name + ": capacity criterion still met at omega_max");
      } else {
        while (hi - lo > spec.omega_tolerance) {
          const double mid = 0.5 * (lo + hi);
          (passes(mid) ? lo : hi) = mid;
        }
      }
    }
    const double per_slot = reachable ? lo : std::nan("");
    const double deg_per_s = per_slot * spec.pilots_per_second * 180.0 / kPi;
    t.rows.push_back({"reachable", name, reachable ? 1.0 : 0.0});
    t.rows.push_back({"max_omega_rad_per_slot", name, per_slot});
    t.rows.push_back({"max_omega_deg_per_s", name, deg_per_s});
  }
  res.tables.push_back(std::move(t));
  return res;
}

ExperimentResult run_init_rate(const ExperimentSpec& spec) {
  ExperimentResult res;
  SummaryTable t{"init_success", {}};
  std::vector<int> counts = spec.antenna_counts;
  if (counts.empty()) counts.push_back(spec.antennas);
  const SnrConfig s1 = SnrConfig::from_db(spec.sweep_snr_db.value_or(spec.snr_db), spec.pilot);
  for (int M : counts) {
    const ArrayConfig cfg = ArrayConfig::make(M, spec.spacing_ratio);
    const int m0 = spec.m0 > 0 ? spec.m0 : 2 * M;
    const std::uint64_t seed = derive_seed(spec.seed, static_cast<std::uint64_t>(M));
    long long success = 0;
    long long edge_alias = 0;
    struct Count {
      long long ok = 0;
      long long alias = 0;
    };
    run_blocks<Count>(
        spec.n_trials, spec.workers, [] { return Count{}; },
        [&](Count& c, int trial) {
          const TrialStreams st = streams_for(seed, trial);
          Rng draw(st.draw);
          Rng noise(st.noise);
          const double x = spec.static_x ? *spec.static_x : draw.uniform(-1.0, 1.0);
          std::vector<Observation> sweep;
          for (double v : sweep_directions(cfg))
            sweep.push_back({add_noise(matched_response(cfg, v, x), s1, noise)});
          const double xh = initial_estimate(cfg, sweep, m0).value();
          if (mainlobe(cfg, x).contains(xh))
            ++c.ok;
          else if (std::abs(xh - x) > 1.0)
            ++c.alias;
        },
        [&](const Count& c) {
          success += c.ok;
          edge_alias += c.alias;
        });
    const std::string param = "M=" + std::to_string(M);
    t.rows.push_back({param, "success_rate", static_cast<double>(success) / spec.n_trials});
    t.rows.push_back({param, "failures", static_cast<double>(spec.n_trials - success)});
    t.rows.push_back({param, "failures_wrapped_across_edge", static_cast<double>(edge_alias)});
  }
  res.tables.push_back(std::move(t));
  return res;
}

ExperimentResult run_theory(const ExperimentSpec& spec) {
  ExperimentResult res;
  const ArrayConfig cfg = tracking_array(spec);
  const double rho = db_to_linear(spec.snr_db);
  const double alpha = spec.step.alpha.value_or(alpha_star(cfg));
  SummaryTable t{"theory", {}};
  auto row = [&](const std::string& p, double v) { t.rows.push_back({p, "analysis", v}); };
  row("M", cfg.num_antennas);
  row("spacing_ratio", cfg.spacing_ratio);
  row("rho", rho);
  row("lipschitz_L", lipschitz_constant(cfg));
  row("alpha_star", alpha_star(cfg));
  row("stability_threshold", stability_threshold(cfg));
  row("alpha", alpha);
  const auto sigma = asymptotic_variance(cfg, rho, alpha);
  row("sigma", sigma ? *sigma : std::nan(""));
  row("I_max", max_fisher_information(cfg, rho).value);
  row("min_crlb_n1", min_crlb_x(cfg, rho, 1));
  row("capacity", capacity(cfg, rho));
  const Interval ml = mainlobe(cfg, spec.theory_x);
  row("mainlobe_lo", ml.lo);
  row("mainlobe_hi", ml.hi);
  const StablePointSet sp = stable_points(cfg, spec.theory_x);
  row("stable_point_count", static_cast<double>(sp.points.size()));
  row("stable_point_spacing", sp.spacing);
  for (std::size_t i = 0; i < sp.points.size(); ++i)
    row("stable_point_" + std::to_string(i), sp.points[i]);
  row("upper_boundary_stable", sp.upper_boundary_stable ? 1.0 : 0.0);
  row("lower_boundary_stable", sp.lower_boundary_stable ? 1.0 : 0.0);
  const ConvergenceBound cb =
      convergence_bound(cfg, rho, alpha, spec.step.n0, spec.theory_x, spec.theory_x0, spec.delta);
  row("bound_applicable", cb.applicable ? 1.0 : 0.0);
  if (cb.T > 0.0) row("escape_time_T", cb.T);
  if (cb.C_e > 0.0) row("C_e", cb.C_e);
  if (cb.b0 > 0.0) row("b0", cb.b0);
  if (cb.alpha_max > 0.0) row("alpha_max", cb.alpha_max);
  if (cb.window_lhs > 0.0) row("window_condition_lhs", cb.window_lhs);
  if (cb.applicable) {
    row("C0", cb.C0);
    row("convergence_bound", cb.bound);
  } else {
    res.notes.push_back("convergence bound not applicable: " + cb.reason);
  }
  res.tables.push_back(std::move(t));
  return res;
}

ExperimentResult run_crlb(const ExperimentSpec& spec) {
  ExperimentResult res;
  RunPlan plan = make_plan(spec, true);
  plan.record = record_slots(spec);
  emit_crlb(spec, plan, res);
  const double rho = plan.snr.rho;
  SummaryTable t{"crlb", {}};
  t.rows.push_back({"I_max", "crlb", max_fisher_information(plan.track, rho).value});
  t.rows.push_back({"min_crlb_n1", "crlb", min_crlb_x(plan.track, rho, 1)});
  if (spec.n_slots >= 1)
    t.rows.push_back({"min_crlb_at_slots", "crlb", min_crlb_x(plan.track, rho, spec.n_slots)});
  t.rows.push_back({"channel_crlb_limit", "crlb",
                    asymptotic_channel_crlb(plan.track, plan.snr.noise_power(spec.beta),
                                            std::norm(spec.pilot))});
  t.rows.push_back({"capacity", "crlb", capacity(plan.data, rho)});
  res.tables.push_back(std::move(t));
  return res;
}

}  // namespace

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::StaticConvergence: return "static";
    case ExperimentKind::DynamicTrajectory: return "dynamic";
    case ExperimentKind::VelocitySweep: return "sweep";
    case ExperimentKind::MaxVelocityTable: return "table1";
    case ExperimentKind::InitSuccessRate: return "init-rate";
    case ExperimentKind::TheoryDiagnostics: return "theory";
    case ExperimentKind::CrlbReport: return "crlb";
  }
  return "unknown";
}

std::string to_string(AlgorithmKind k) {
  switch (k) {
    case AlgorithmKind::Recursive: return "recursive";
    case AlgorithmKind::Angular: return "angular";
    case AlgorithmKind::LeastSquares: return "ls";
    case AlgorithmKind::CompressedSensing: return "cs";
    case AlgorithmKind::Wlan: return "wlan";
    case AlgorithmKind::Kalman: return "kf";
  }
  return "unknown";
}

std::optional<AlgorithmKind> parse_algorithm(const std::string& s) {
  for (AlgorithmKind k : {AlgorithmKind::Recursive, AlgorithmKind::Angular,
                          AlgorithmKind::LeastSquares, AlgorithmKind::CompressedSensing,
                          AlgorithmKind::Wlan, AlgorithmKind::Kalman})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

ArrayConfig tracking_array(const ExperimentSpec& spec) {
  return ArrayConfig::make(spec.antennas, spec.spacing_ratio);
}

ArrayConfig data_array(const ExperimentSpec& spec) {
  return ArrayConfig::make(spec.data_antennas > 0 ? spec.data_antennas : spec.antennas,
                           spec.spacing_ratio);
}

void validate(const ExperimentSpec& spec) {
  if (spec.antennas < 2) config_error("array.antennas", "must be at least 2");
  if (spec.data_antennas != 0 && spec.data_antennas < spec.antennas)
    config_error("array.data_antennas", "must be at least the tracking antenna count");
  if (!(spec.spacing_ratio > 0.0) || !std::isfinite(spec.spacing_ratio))
    config_error("array.spacing_ratio", "must be positive");
  if (!std::isfinite(spec.snr_db)) config_error("snr_db", "must be finite");
  if (spec.sweep_snr_db && !std::isfinite(*spec.sweep_snr_db))
    config_error("sweep_snr_db", "must be finite");
  if (spec.pilot == cplx{0.0, 0.0}) config_error("pilot", "must be nonzero");
  if (spec.beta == cplx{0.0, 0.0}) config_error("beta", "must be nonzero");
  if (spec.m0 != 0 && spec.m0 < spec.antennas) config_error("m0", "must be at least M");
  if (spec.n_trials < 1) config_error("trials", "must be at least 1");
  if (spec.workers < 1) config_error("workers", "must be at least 1");
  if (spec.n_slots < 0) config_error("slots", "must be non-negative");
  if (spec.step.alpha && !(*spec.step.alpha > 0.0)) config_error("step.alpha", "must be positive");
  if (!(spec.step.n0 >= 0.0)) config_error("step.n0", "must be non-negative");
  if (spec.wlan_period < 3) config_error("wlan.period", "must be at least 3");
  if (spec.kalman.process_noise && !(*spec.kalman.process_noise >= 0.0))
    config_error("kalman.process_noise", "must be non-negative");
  if (spec.kalman.tuning_trials < 1) config_error("kalman.tuning_trials", "must be at least 1");
  if (spec.static_x && !(*spec.static_x >= -1.0 && *spec.static_x <= 1.0))
    config_error("static_x", "must lie in [-1, 1]");
  if (spec.initial_x && !(*spec.initial_x >= -1.0 && *spec.initial_x <= 1.0))
    config_error("initial_x", "must lie in [-1, 1]");
  if (spec.algorithms.empty()) config_error("algorithms", "must list at least one algorithm");
  const bool subset = spec.data_antennas != 0 && spec.data_antennas != spec.antennas;
  for (AlgorithmKind a : spec.algorithms) {
    if (a == AlgorithmKind::LeastSquares && subset)
      config_error("algorithms", "ls forms its data beam from the full channel estimate and "
                                 "cannot track on an antenna subset");
    if (spec.initial_x && (a == AlgorithmKind::LeastSquares || a == AlgorithmKind::Wlan))
      config_error("initial_x", to_string(a) + " cannot start from a given direction");
  }
  for (long long s : spec.record_slots)
    if (s < 1 || s > spec.n_slots) config_error("record_slots", "entries must lie in [1, slots]");
  try {
    validate(spec.trajectory);
  } catch (const Error& e) {
    config_error("trajectory", e.what());
  }
  switch (spec.kind) {
    case ExperimentKind::VelocitySweep:
      if (spec.omegas.empty()) config_error("omegas", "must list at least one velocity");
      for (double w : spec.omegas)
        if (!(w >= 0.0) || !std::isfinite(w)) config_error("omegas", "velocities must be >= 0");
      break;
    case ExperimentKind::MaxVelocityTable:
      if (!(spec.pilots_per_second > 0.0)) config_error("pilots_per_second", "must be positive");
      if (!(spec.capacity_fraction > 0.0 && spec.capacity_fraction <= 1.0))
        config_error("capacity_fraction", "must lie in (0, 1]");
      if (!(spec.omega_max > 0.0)) config_error("omega_max", "must be positive");
      if (!(spec.omega_tolerance > 0.0)) config_error("omega_tolerance", "must be positive");
      break;
    case ExperimentKind::InitSuccessRate:
      for (int m : spec.antenna_counts)
        if (m < 2) config_error("antenna_counts", "entries must be at least 2");
      break;
    case ExperimentKind::TheoryDiagnostics:
      if (!(spec.theory_x >= -1.0 && spec.theory_x <= 1.0))
        config_error("theory.x", "must lie in [-1, 1]");
      if (!(spec.theory_x0 >= -1.0 && spec.theory_x0 <= 1.0))
        config_error("theory.x0", "must lie in [-1, 1]");
      if (!(spec.delta > 0.0)) config_error("theory.delta", "must be positive");
      break;
    default:
      break;
  }
}

const SummaryTable* ExperimentResult::table(const std::string& name) const {
  for (const auto& t : tables)
    if (t.name == name) return &t;
  return nullptr;
}

const MetricSeries* ExperimentResult::find(const std::string& algorithm,
                                           const std::string& metric) const {
  for (const auto& s : series)
    if (s.algorithm == algorithm && s.metric == metric) return &s;
  return nullptr;
}

double capacity_fraction_at(const ExperimentSpec& spec, AlgorithmKind algo, double omega) {
  validate(spec);
  RunPlan plan = make_plan(spec, false);
  plan.algos = {algo};
  plan.kalman_q = {spec.kalman.process_noise.value_or(0.0)};
  std::vector<std::string> notes;
  const Simulation sim = simulate_velocity(spec, plan, omega, notes);
  return mean_capacity_fraction(sim, 0, capacity(plan.data, plan.snr.rho));
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  validate(spec);
  ExperimentResult res;
  switch (spec.kind) {
    case ExperimentKind::StaticConvergence: res = run_static(spec); break;
    case ExperimentKind::DynamicTrajectory: res = run_dynamic(spec); break;
    case ExperimentKind::VelocitySweep: res = run_sweep(spec); break;
    case ExperimentKind::MaxVelocityTable: res = run_table(spec); break;
    case ExperimentKind::InitSuccessRate: res = run_init_rate(spec); break;
    case ExperimentKind::TheoryDiagnostics: res = run_theory(spec); break;
    case ExperimentKind::CrlbReport: res = run_crlb(spec); break;
  }
  res.notes.insert(res.notes.begin(), "seed " + std::to_string(spec.seed) + ", trials " +
                                          std::to_string(spec.n_trials) + ", slots " +
                                          std::to_string(spec.n_slots));
  return res;
}

}  // namespace beamtrack
