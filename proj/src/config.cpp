#include "beamtrack/config.hpp"

#include <cmath>
#include <random>
#include <set>

#include <json.hpp>

namespace beamtrack {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::Config, path + ": " + what, path);
}

void reject_unknown(const json& obj, const std::string& prefix,
                    std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) bad(prefix.empty() ? "<root>" : prefix, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : obj.items()) {
    (void)v;
    if (!ok.count(k)) bad(prefix.empty() ? k : prefix + "." + k, "unknown key");
  }
}

std::string join(const std::string& prefix, const char* key) {
  return prefix.empty() ? key : prefix + "." + key;
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) bad(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) bad(path, "must be finite");
  return d;
}

long long get_integer(const json& v, const std::string& path) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) bad(path, "expected an integer");
  return v.get<long long>();
}

cplx get_complex(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) bad(path, "expected [real, imag]");
  return {get_number(v[0], path + "[0]"), get_number(v[1], path + "[1]")};
}

template <class F>
void maybe(const json& obj, const char* key, const std::string& prefix, F&& apply) {
  if (auto it = obj.find(key); it != obj.end()) apply(*it, join(prefix, key));
}

TrajectoryModel parse_trajectory(const json& t, const std::string& path) {
  if (!t.is_object()) bad(path, "expected an object");
  const auto it = t.find("model");
  if (it == t.end() || !it->is_string()) bad(path + ".model", "expected \"static\", \"sinusoid\" or \"fixed_velocity\"");
  const std::string model = it->get<std::string>();
  if (model == "static") {
    reject_unknown(t, path, {"model", "x"});
    StaticDirection s;
    maybe(t, "x", path, [&](const json& v, const std::string& p) { s.x = get_number(v, p); });
    return s;
  }
  if (model == "sinusoid") {
    reject_unknown(t, path, {"model", "amplitude", "period", "jitter_std"});
    SinusoidJitter s;
    maybe(t, "amplitude", path, [&](const json& v, const std::string& p) { s.amplitude = get_number(v, p); });
    maybe(t, "period", path, [&](const json& v, const std::string& p) { s.period = get_number(v, p); });
    maybe(t, "jitter_std", path, [&](const json& v, const std::string& p) { s.jitter_std = get_number(v, p); });
    return s;
  }
  if (model == "fixed_velocity") {
    reject_unknown(t, path, {"model", "omega", "bound", "theta0"});
    FixedVelocity f;
    maybe(t, "omega", path, [&](const json& v, const std::string& p) { f.omega = get_number(v, p); });
    maybe(t, "bound", path, [&](const json& v, const std::string& p) { f.bound = get_number(v, p); });
    maybe(t, "theta0", path, [&](const json& v, const std::string& p) { f.theta0 = get_number(v, p); });
    return f;
  }
  bad(path + ".model", "unknown trajectory model \"" + model + "\"");
}

json trajectory_json(const TrajectoryModel& m) {
  if (const auto* s = std::get_if<StaticDirection>(&m)) return {{"model", "static"}, {"x", s->x}};
  if (const auto* s = std::get_if<SinusoidJitter>(&m))
    return {{"model", "sinusoid"},
            {"amplitude", s->amplitude},
            {"period", s->period},
            {"jitter_std", s->jitter_std}};
  const auto& f = std::get<FixedVelocity>(m);
  return {{"model", "fixed_velocity"}, {"omega", f.omega}, {"bound", f.bound}, {"theta0", f.theta0}};
}

std::uint64_t random_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

}  // namespace

std::optional<ExperimentKind> parse_kind(const std::string& s) {
  for (ExperimentKind k :
       {ExperimentKind::StaticConvergence, ExperimentKind::DynamicTrajectory,
        ExperimentKind::VelocitySweep, ExperimentKind::MaxVelocityTable,
        ExperimentKind::InitSuccessRate, ExperimentKind::TheoryDiagnostics,
        ExperimentKind::CrlbReport})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

RunConfig default_config(ExperimentKind kind) {
  RunConfig c;
  ExperimentSpec& s = c.spec;
  s.kind = kind;
  switch (kind) {
    case ExperimentKind::StaticConvergence:
      s.n_slots = 2000;
      s.n_trials = 1000;
      s.step = {false, std::nullopt, 0.0};
      s.trajectory = StaticDirection{};
      break;
    case ExperimentKind::DynamicTrajectory:
      s.n_slots = 10000;
      s.n_trials = 100;
      s.step = {true, std::nullopt, 0.0};
      s.trajectory = SinusoidJitter{};
      s.kalman.process_noise.reset();
      break;
    case ExperimentKind::VelocitySweep:
      s.n_slots = 10000;
      s.n_trials = 20;
      s.step = {true, std::nullopt, 0.0};
      s.trajectory = FixedVelocity{};
      s.omegas = {0.0, 0.01, 0.02, 0.04, 0.064, 0.08, 0.1, 0.13};
      s.kalman.process_noise.reset();
      break;
    case ExperimentKind::MaxVelocityTable:
      s.antennas = 8;
      s.data_antennas = 16;
      s.n_slots = 10000;
      s.n_trials = 20;
      s.step = {true, std::nullopt, 0.0};
      s.trajectory = FixedVelocity{};
      s.kalman.process_noise.reset();
      break;
    case ExperimentKind::InitSuccessRate:
      s.snr_db = 0.0;
      s.n_slots = 0;
      s.n_trials = 10000;
      s.antenna_counts = {8, 16};
      break;
    case ExperimentKind::TheoryDiagnostics:
      s.antennas = 8;
      s.n_slots = 0;
      s.n_trials = 1;
      s.theory_x = 0.5;
      s.theory_x0 = 0.6;
      s.delta = 0.01;
      break;
    case ExperimentKind::CrlbReport:
      s.n_slots = 2000;
      s.n_trials = 1;
      break;
  }
  return c;
}

RunConfig parse_config(ExperimentKind kind, const std::string& text) {
  RunConfig c = default_config(kind);
  ExperimentSpec& s = c.spec;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad("<document>", std::string("malformed JSON: ") + e.what());
  }
  reject_unknown(j, "",
                 {"experiment", "array", "snr_db", "sweep_snr_db", "pilot", "beta", "m0",
                  "algorithms", "step", "kalman", "wlan", "static_x", "initial_x", "trajectory",
                  "slots", "trials", "seed", "workers", "record_slots", "omegas", "table",
                  "antenna_counts", "theory", "output_dir"});

  maybe(j, "experiment", "", [&](const json& v, const std::string& p) {
    if (!v.is_string() || v.get<std::string>() != to_string(kind))
      bad(p, "does not match the subcommand \"" + to_string(kind) + "\"");
  });
  maybe(j, "array", "", [&](const json& a, const std::string& p) {
    reject_unknown(a, p, {"antennas", "data_antennas", "spacing_ratio"});
    maybe(a, "antennas", p, [&](const json& v, const std::string& q) { s.antennas = static_cast<int>(get_integer(v, q)); });
    maybe(a, "data_antennas", p, [&](const json& v, const std::string& q) { s.data_antennas = static_cast<int>(get_integer(v, q)); });
    maybe(a, "spacing_ratio", p, [&](const json& v, const std::string& q) { s.spacing_ratio = get_number(v, q); });
  });
  maybe(j, "snr_db", "", [&](const json& v, const std::string& p) { s.snr_db = get_number(v, p); });
  maybe(j, "sweep_snr_db", "", [&](const json& v, const std::string& p) {
    if (v.is_null()) s.sweep_snr_db.reset(); else s.sweep_snr_db = get_number(v, p);
  });
  maybe(j, "pilot", "", [&](const json& v, const std::string& p) { s.pilot = get_complex(v, p); });
  maybe(j, "beta", "", [&](const json& v, const std::string& p) { s.beta = get_complex(v, p); });
  maybe(j, "m0", "", [&](const json& v, const std::string& p) { s.m0 = static_cast<int>(get_integer(v, p)); });
  maybe(j, "algorithms", "", [&](const json& v, const std::string& p) {
    if (!v.is_array()) bad(p, "expected a list of algorithm names");
    s.algorithms.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string q = p + "[" + std::to_string(i) + "]";
      if (!v[i].is_string()) bad(q, "expected a string");
      const auto a = parse_algorithm(v[i].get<std::string>());
      if (!a) bad(q, "unknown algorithm \"" + v[i].get<std::string>() +
                         "\" (recursive, angular, ls, cs, wlan, kf)");
      s.algorithms.push_back(*a);
    }
  });
  maybe(j, "step", "", [&](const json& st, const std::string& p) {
    reject_unknown(st, p, {"schedule", "alpha", "n0"});
    maybe(st, "schedule", p, [&](const json& v, const std::string& q) {
      if (v == "fixed") s.step.fixed = true;
      else if (v == "diminishing") s.step.fixed = false;
      else bad(q, "expected \"fixed\" or \"diminishing\"");
    });
    maybe(st, "alpha", p, [&](const json& v, const std::string& q) {
      if (v == "star") s.step.alpha.reset(); else s.step.alpha = get_number(v, q);
    });
    maybe(st, "n0", p, [&](const json& v, const std::string& q) { s.step.n0 = get_number(v, q); });
  });
  maybe(j, "kalman", "", [&](const json& k, const std::string& p) {
    reject_unknown(k, p, {"process_noise", "offset_deg", "initial_variance", "tuning_trials"});
    maybe(k, "process_noise", p, [&](const json& v, const std::string& q) {
      if (v == "auto") s.kalman.process_noise.reset(); else s.kalman.process_noise = get_number(v, q);
    });
    maybe(k, "offset_deg", p, [&](const json& v, const std::string& q) { s.kalman.offset_deg = get_number(v, q); });
    maybe(k, "initial_variance", p, [&](const json& v, const std::string& q) { s.kalman.initial_variance = get_number(v, q); });
    maybe(k, "tuning_trials", p, [&](const json& v, const std::string& q) { s.kalman.tuning_trials = static_cast<int>(get_integer(v, q)); });
  });
  maybe(j, "wlan", "", [&](const json& w, const std::string& p) {
    reject_unknown(w, p, {"period"});
    maybe(w, "period", p, [&](const json& v, const std::string& q) { s.wlan_period = static_cast<int>(get_integer(v, q)); });
  });
  maybe(j, "static_x", "", [&](const json& v, const std::string& p) {
    if (v.is_null()) s.static_x.reset(); else s.static_x = get_number(v, p);
  });
  maybe(j, "initial_x", "", [&](const json& v, const std::string& p) {
    if (v.is_null()) s.initial_x.reset(); else s.initial_x = get_number(v, p);
  });
  maybe(j, "trajectory", "", [&](const json& v, const std::string& p) { s.trajectory = parse_trajectory(v, p); });
  maybe(j, "slots", "", [&](const json& v, const std::string& p) { s.n_slots = get_integer(v, p); });
  maybe(j, "trials", "", [&](const json& v, const std::string& p) {
    const long long n = get_integer(v, p);
    if (n < 1 || n > 100'000'000) bad(p, "must lie in [1, 1e8]");
    s.n_trials = static_cast<int>(n);
  });
  bool have_seed = false;
  maybe(j, "seed", "", [&](const json& v, const std::string& p) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      bad(p, "expected a non-negative integer");
    s.seed = v.get<std::uint64_t>();
    have_seed = true;
  });
  maybe(j, "workers", "", [&](const json& v, const std::string& p) { s.workers = static_cast<int>(get_integer(v, p)); });
  maybe(j, "record_slots", "", [&](const json& v, const std::string& p) {
    if (!v.is_array()) bad(p, "expected a list of slot numbers");
    s.record_slots.clear();
    for (std::size_t i = 0; i < v.size(); ++i)
      s.record_slots.push_back(get_integer(v[i], p + "[" + std::to_string(i) + "]"));
  });
  maybe(j, "omegas", "", [&](const json& v, const std::string& p) {
    if (!v.is_array()) bad(p, "expected a list of angular velocities");
    s.omegas.clear();
    for (std::size_t i = 0; i < v.size(); ++i)
      s.omegas.push_back(get_number(v[i], p + "[" + std::to_string(i) + "]"));
  });
  maybe(j, "table", "", [&](const json& t, const std::string& p) {
    reject_unknown(t, p, {"pilots_per_second", "capacity_fraction", "omega_max", "omega_tolerance"});
    maybe(t, "pilots_per_second", p, [&](const json& v, const std::string& q) { s.pilots_per_second = get_number(v, q); });
    maybe(t, "capacity_fraction", p, [&](const json& v, const std::string& q) { s.capacity_fraction = get_number(v, q); });
    maybe(t, "omega_max", p, [&](const json& v, const std::string& q) { s.omega_max = get_number(v, q); });
    maybe(t, "omega_tolerance", p, [&](const json& v, const std::string& q) { s.omega_tolerance = get_number(v, q); });
  });
  maybe(j, "antenna_counts", "", [&](const json& v, const std::string& p) {
    if (!v.is_array()) bad(p, "expected a list of antenna counts");
    s.antenna_counts.clear();
    for (std::size_t i = 0; i < v.size(); ++i)
      s.antenna_counts.push_back(static_cast<int>(get_integer(v[i], p + "[" + std::to_string(i) + "]")));
  });
  maybe(j, "theory", "", [&](const json& t, const std::string& p) {
    reject_unknown(t, p, {"x", "x0", "delta"});
    maybe(t, "x", p, [&](const json& v, const std::string& q) { s.theory_x = get_number(v, q); });
    maybe(t, "x0", p, [&](const json& v, const std::string& q) { s.theory_x0 = get_number(v, q); });
    maybe(t, "delta", p, [&](const json& v, const std::string& q) { s.delta = get_number(v, q); });
  });
  maybe(j, "output_dir", "", [&](const json& v, const std::string& p) {
    if (!v.is_string() || v.get<std::string>().empty()) bad(p, "expected a non-empty path");
    c.output_dir = v.get<std::string>();
  });

  if (!have_seed) {
    s.seed = random_seed();
    c.seed_was_random = true;
  }
  return c;
}

std::string to_json(const RunConfig& c) {
  const ExperimentSpec& s = c.spec;
  json j;
  j["experiment"] = to_string(s.kind);
  j["array"] = {{"antennas", s.antennas},
                {"data_antennas", s.data_antennas > 0 ? s.data_antennas : s.antennas},
                {"spacing_ratio", s.spacing_ratio}};
  j["snr_db"] = s.snr_db;
  j["sweep_snr_db"] = s.sweep_snr_db ? json(*s.sweep_snr_db) : json(nullptr);
  j["pilot"] = {s.pilot.real(), s.pilot.imag()};
  j["beta"] = {s.beta.real(), s.beta.imag()};
  j["m0"] = s.m0 > 0 ? s.m0 : 2 * s.antennas;
  json algos = json::array();
  for (AlgorithmKind a : s.algorithms) algos.push_back(to_string(a));
  j["algorithms"] = algos;
  j["step"] = {{"schedule", s.step.fixed ? "fixed" : "diminishing"},
               {"alpha", s.step.alpha ? json(*s.step.alpha) : json("star")},
               {"n0", s.step.n0}};
  j["kalman"] = {{"process_noise", s.kalman.process_noise ? json(*s.kalman.process_noise) : json("auto")},
                 {"offset_deg", s.kalman.offset_deg},
                 {"initial_variance", s.kalman.initial_variance},
                 {"tuning_trials", s.kalman.tuning_trials}};
  j["wlan"] = {{"period", s.wlan_period}};
  j["static_x"] = s.static_x ? json(*s.static_x) : json(nullptr);
  j["initial_x"] = s.initial_x ? json(*s.initial_x) : json(nullptr);
  j["trajectory"] = trajectory_json(s.trajectory);
  j["slots"] = s.n_slots;
  j["trials"] = s.n_trials;
  j["seed"] = s.seed;
  j["workers"] = s.workers;
  j["record_slots"] = s.record_slots;
  j["omegas"] = s.omegas;
  j["table"] = {{"pilots_per_second", s.pilots_per_second},
                {"capacity_fraction", s.capacity_fraction},
                {"omega_max", s.omega_max},
                {"omega_tolerance", s.omega_tolerance}};
  j["antenna_counts"] = s.antenna_counts;
  j["theory"] = {{"x", s.theory_x}, {"x0", s.theory_x0}, {"delta", s.delta}};
  j["output_dir"] = c.output_dir;
  return j.dump(2);
}

}  // namespace beamtrack
