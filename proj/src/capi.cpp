#include "beamtrack/beamtrack.h"

#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "beamtrack/crlb.hpp"
#include "beamtrack/output.hpp"
#include "beamtrack/trackers.hpp"

struct bt_config {
  beamtrack::RunConfig cfg;
};

struct bt_result {
  beamtrack::ExperimentResult result;
  beamtrack::RunConfig cfg;
};

struct bt_tracker {
  beamtrack::ArrayConfig array;
  beamtrack::TrackerState state;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_field;

bt_status set_error(bt_status s, const std::string& msg, const std::string& field = {}) {
  g_error = msg;
  g_field = field;
  return s;
}

bt_status from_code(beamtrack::ErrorCode c) {
  switch (c) {
    case beamtrack::ErrorCode::InvalidArgument: return BT_ERR_INVALID_ARGUMENT;
    case beamtrack::ErrorCode::Config: return BT_ERR_CONFIG;
    case beamtrack::ErrorCode::Runtime: return BT_ERR_RUNTIME;
    case beamtrack::ErrorCode::NotApplicable: return BT_ERR_NOT_APPLICABLE;
  }
  return BT_ERR_RUNTIME;
}

template <class F>
bt_status guarded(F&& f) {
  try {
    g_error.clear();
    g_field.clear();
    return f();
  } catch (const beamtrack::Error& e) {
    return set_error(from_code(e.code()), e.what(), e.field());
  } catch (const std::bad_alloc&) {
    return set_error(BT_ERR_RUNTIME, "out of memory");
  } catch (const std::exception& e) {
    return set_error(BT_ERR_RUNTIME, e.what());
  } catch (...) {
    return set_error(BT_ERR_RUNTIME, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* p = new char[s.size() + 1];
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

beamtrack::ExperimentKind kind_or_throw(const char* kind) {
  if (!kind) throw beamtrack::Error(beamtrack::ErrorCode::InvalidArgument, "kind is NULL");
  const auto k = beamtrack::parse_kind(kind);
  if (!k)
    throw beamtrack::Error(beamtrack::ErrorCode::InvalidArgument,
                           std::string("unknown experiment kind \"") + kind + "\"");
  return *k;
}

#define BT_REQUIRE(ptr)                                                                 \
  do {                                                                                  \
    if (!(ptr)) return set_error(BT_ERR_INVALID_ARGUMENT, #ptr " must not be NULL"); \
  } while (0)

}  // namespace

extern "C" {

const char* bt_version(void) { return "1.0.0"; }
const char* bt_last_error(void) { return g_error.c_str(); }
const char* bt_last_error_field(void) { return g_field.c_str(); }
void bt_free_string(char* s) { delete[] s; }

bt_status bt_config_from_json(const char* kind, const char* json_text, bt_config** out) {
  BT_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    const auto k = kind_or_throw(kind);
    const std::string text = (json_text && *json_text) ? json_text : "{}";
    *out = new bt_config{beamtrack::parse_config(k, text)};
    return BT_OK;
  });
}

bt_status bt_config_from_file(const char* kind, const char* path, bt_config** out) {
  BT_REQUIRE(out);
  BT_REQUIRE(path);
  *out = nullptr;
  return guarded([&] {
    const auto k = kind_or_throw(kind);
    std::ifstream f(path, std::ios::binary);
    if (!f)
      throw beamtrack::Error(beamtrack::ErrorCode::Config,
                             std::string("config: cannot read file ") + path, "config");
    std::ostringstream ss;
    ss << f.rdbuf();
    *out = new bt_config{beamtrack::parse_config(k, ss.str())};
    return BT_OK;
  });
}

void bt_config_free(bt_config* cfg) { delete cfg; }

bt_status bt_config_set_int(bt_config* cfg, const char* key, int64_t value) {
  BT_REQUIRE(cfg);
  BT_REQUIRE(key);
  return guarded([&] {
    auto& s = cfg->cfg.spec;
    const std::string k = key;
    if (k == "seed") {
      if (value < 0) return set_error(BT_ERR_CONFIG, "seed: must be non-negative", "seed");
      s.seed = static_cast<std::uint64_t>(value);
      cfg->cfg.seed_was_random = false;
    } else if (k == "antennas") {
      s.antennas = static_cast<int>(value);
    } else if (k == "data_antennas") {
      s.data_antennas = static_cast<int>(value);
    } else if (k == "trials") {
      s.n_trials = static_cast<int>(value);
    } else if (k == "workers") {
      s.workers = static_cast<int>(value);
    } else if (k == "slots") {
      s.n_slots = value;
    } else {
      return set_error(BT_ERR_CONFIG, k + ": unknown integer override", k);
    }
    return BT_OK;
  });
}

bt_status bt_config_set_double(bt_config* cfg, const char* key, double value) {
  BT_REQUIRE(cfg);
  BT_REQUIRE(key);
  const std::string k = key;
  if (k != "snr_db") return set_error(BT_ERR_CONFIG, k + ": unknown numeric override", k);
  cfg->cfg.spec.snr_db = value;
  return BT_OK;
}

bt_status bt_config_set_string(bt_config* cfg, const char* key, const char* value) {
  BT_REQUIRE(cfg);
  BT_REQUIRE(key);
  BT_REQUIRE(value);
  const std::string k = key;
  if (k != "output_dir") return set_error(BT_ERR_CONFIG, k + ": unknown string override", k);
  if (!*value) return set_error(BT_ERR_CONFIG, "output_dir: must not be empty", k);
  cfg->cfg.output_dir = value;
  return BT_OK;
}

bt_status bt_config_resolved_json(const bt_config* cfg, char** out_json) {
  BT_REQUIRE(cfg);
  BT_REQUIRE(out_json);
  return guarded([&] {
    *out_json = dup_string(beamtrack::to_json(cfg->cfg));
    return BT_OK;
  });
}

bt_status bt_config_output_dir(const bt_config* cfg, char** out_dir) {
  BT_REQUIRE(cfg);
  BT_REQUIRE(out_dir);
  return guarded([&] {
    *out_dir = dup_string(cfg->cfg.output_dir);
    return BT_OK;
  });
}

bt_status bt_run(const bt_config* cfg, bt_result** out) {
  BT_REQUIRE(cfg);
  BT_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    auto res = std::make_unique<bt_result>();
    res->cfg = cfg->cfg;
    res->result = beamtrack::run_experiment(cfg->cfg.spec);
    *out = res.release();
    return BT_OK;
  });
}

void bt_result_free(bt_result* res) { delete res; }

bt_status bt_result_write(const bt_result* res, const char* dir) {
  BT_REQUIRE(res);
  BT_REQUIRE(dir);
  const bt_status s = guarded([&] {
    beamtrack::write_outputs(res->result, res->cfg, dir);
    return BT_OK;
  });
  return s == BT_ERR_RUNTIME ? BT_ERR_IO : s;
}

bt_status bt_result_report(const bt_result* res, char** out_text) {
  BT_REQUIRE(res);
  BT_REQUIRE(out_text);
  return guarded([&] {
    *out_text = dup_string(beamtrack::report(res->result));
    return BT_OK;
  });
}

bt_status bt_result_table_value(const bt_result* res, const char* table, const char* param,
                                const char* algorithm, double* out) {
  BT_REQUIRE(res);
  BT_REQUIRE(table);
  BT_REQUIRE(param);
  BT_REQUIRE(algorithm);
  BT_REQUIRE(out);
  const beamtrack::SummaryTable* t = res->result.table(table);
  if (!t) return set_error(BT_ERR_INVALID_ARGUMENT, std::string("no table ") + table);
  for (const auto& r : t->rows)
    if (r.param == param && r.algorithm == algorithm) {
      *out = r.value;
      return BT_OK;
    }
  return set_error(BT_ERR_INVALID_ARGUMENT,
                   std::string("no row ") + param + "/" + algorithm + " in " + table);
}

bt_status bt_result_series_value(const bt_result* res, const char* algorithm, const char* metric,
                                 int64_t slot, double* mean, double* stderr_out) {
  BT_REQUIRE(res);
  BT_REQUIRE(algorithm);
  BT_REQUIRE(metric);
  BT_REQUIRE(mean);
  const beamtrack::MetricSeries* s = res->result.find(algorithm, metric);
  if (!s) return set_error(BT_ERR_INVALID_ARGUMENT, std::string("no series ") + algorithm + "/" + metric);
  for (std::size_t i = 0; i < s->slot.size(); ++i)
    if (s->slot[i] == slot) {
      *mean = s->mean[i];
      if (stderr_out) *stderr_out = s->stderr_[i];
      return BT_OK;
    }
  return set_error(BT_ERR_INVALID_ARGUMENT, "slot " + std::to_string(slot) + " was not recorded");
}

bt_status bt_max_fisher_information(int m, double spacing, double rho, double* out) {
  BT_REQUIRE(out);
  return guarded([&] {
    *out = beamtrack::max_fisher_information(beamtrack::ArrayConfig::make(m, spacing), rho).value;
    return BT_OK;
  });
}

bt_status bt_min_crlb(int m, double spacing, double rho, int64_t n, double* out) {
  BT_REQUIRE(out);
  return guarded([&] {
    *out = beamtrack::min_crlb_x(beamtrack::ArrayConfig::make(m, spacing), rho, n);
    return BT_OK;
  });
}

bt_status bt_channel_crlb_limit(int m, double spacing, double sigma2, double pilot_power,
                                double* out) {
  BT_REQUIRE(out);
  return guarded([&] {
    *out = beamtrack::asymptotic_channel_crlb(beamtrack::ArrayConfig::make(m, spacing), sigma2,
                                              pilot_power);
    return BT_OK;
  });
}

bt_status bt_alpha_star(int m, double spacing, double* out) {
  BT_REQUIRE(out);
  return guarded([&] {
    *out = beamtrack::alpha_star(beamtrack::ArrayConfig::make(m, spacing));
    return BT_OK;
  });
}

bt_status bt_f_gain(int m, double spacing, double v, double x, double* out) {
  BT_REQUIRE(out);
  return guarded([&] {
    *out = beamtrack::f_gain(beamtrack::ArrayConfig::make(m, spacing), v, x);
    return BT_OK;
  });
}

bt_status bt_tracker_create(int m, double spacing, double alpha, double n0, int fixed, double x0,
                            bt_tracker** out) {
  BT_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    const auto cfg = beamtrack::ArrayConfig::make(m, spacing);
    const auto sched = fixed ? beamtrack::StepSizeSchedule::fixed(alpha)
                             : beamtrack::StepSizeSchedule::diminishing(alpha, n0);
    *out = new bt_tracker{cfg, {beamtrack::SpatialFrequency(x0), 0, sched}};
    return BT_OK;
  });
}

void bt_tracker_free(bt_tracker* t) { delete t; }

bt_status bt_tracker_weights(const bt_tracker* t, double* re, double* im, int len) {
  BT_REQUIRE(t);
  BT_REQUIRE(re);
  BT_REQUIRE(im);
  if (len != t->array.num_antennas)
    return set_error(BT_ERR_INVALID_ARGUMENT, "weight buffer length must equal the antenna count");
  return guarded([&] {
    const auto w = beamtrack::conjugate_beamformer(t->array, t->state.estimate);
    for (int m = 0; m < len; ++m) {
      re[m] = w.weights()[m].real();
      im[m] = w.weights()[m].imag();
    }
    return BT_OK;
  });
}

bt_status bt_tracker_update(bt_tracker* t, double y_re, double y_im, double* estimate) {
  BT_REQUIRE(t);
  return guarded([&] {
    t->state = beamtrack::rbt_step(t->state, {{y_re, y_im}});
    if (estimate) *estimate = t->state.estimate;
    return BT_OK;
  });
}

bt_status bt_tracker_estimate(const bt_tracker* t, double* estimate) {
  BT_REQUIRE(t);
  BT_REQUIRE(estimate);
  *estimate = t->state.estimate;
  return BT_OK;
}

}  // extern "C"
