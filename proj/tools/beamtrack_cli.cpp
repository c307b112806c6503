// Command-line front end. Talks to the simulator only through beamtrack.h.

#include <cstdio>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "beamtrack/beamtrack.h"

namespace {

struct Overrides {
  std::string config;
  std::optional<int> m;
  std::optional<double> snr_db;
  std::optional<long long> seed;
  std::optional<int> trials;
  std::optional<int> workers;
  std::optional<long long> slots;
  std::optional<std::string> out;
};

struct ConfigDeleter {
  void operator()(bt_config* c) const { bt_config_free(c); }
};
struct ResultDeleter {
  void operator()(bt_result* r) const { bt_result_free(r); }
};

int exit_code(bt_status s) {
  if (s == BT_OK) return 0;
  return s == BT_ERR_CONFIG || s == BT_ERR_INVALID_ARGUMENT ? 2 : 1;
}

int report_error(bt_status s) {
  const std::string field = bt_last_error_field();
  std::fprintf(stderr, "error: %s", bt_last_error());
  if (!field.empty()) std::fprintf(stderr, " [%s]", field.c_str());
  std::fprintf(stderr, "\n");
  return exit_code(s);
}

std::string take(char* s) {
  std::string out = s ? s : "";
  bt_free_string(s);
  return out;
}

int run(const std::string& kind, const Overrides& o) {
  bt_config* raw = nullptr;
  bt_status s = o.config.empty() ? bt_config_from_json(kind.c_str(), nullptr, &raw)
                                 : bt_config_from_file(kind.c_str(), o.config.c_str(), &raw);
  if (s != BT_OK) return report_error(s);
  std::unique_ptr<bt_config, ConfigDeleter> cfg(raw);

  if (o.m && (s = bt_config_set_int(cfg.get(), "antennas", *o.m)) != BT_OK) return report_error(s);
  if (o.snr_db && (s = bt_config_set_double(cfg.get(), "snr_db", *o.snr_db)) != BT_OK)
    return report_error(s);
  if (o.seed && (s = bt_config_set_int(cfg.get(), "seed", *o.seed)) != BT_OK) return report_error(s);
  if (o.trials && (s = bt_config_set_int(cfg.get(), "trials", *o.trials)) != BT_OK)
    return report_error(s);
  if (o.workers && (s = bt_config_set_int(cfg.get(), "workers", *o.workers)) != BT_OK)
    return report_error(s);
  if (o.slots && (s = bt_config_set_int(cfg.get(), "slots", *o.slots)) != BT_OK)
    return report_error(s);
  if (o.out && (s = bt_config_set_string(cfg.get(), "output_dir", o.out->c_str())) != BT_OK)
    return report_error(s);

  bt_result* rraw = nullptr;
  if ((s = bt_run(cfg.get(), &rraw)) != BT_OK) return report_error(s);
  std::unique_ptr<bt_result, ResultDeleter> res(rraw);

  char* dir = nullptr;
  if ((s = bt_config_output_dir(cfg.get(), &dir)) != BT_OK) return report_error(s);
  const std::string out_dir = take(dir);
  if ((s = bt_result_write(res.get(), out_dir.c_str())) != BT_OK) return report_error(s);

  char* text = nullptr;
  if ((s = bt_result_report(res.get(), &text)) != BT_OK) return report_error(s);
  std::fputs(take(text).c_str(), stdout);
  std::printf("outputs written to %s\n", out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Beam tracking simulator for single-RF-chain phased arrays"};
  app.require_subcommand(1);

  Overrides o;
  const char* kinds[][2] = {
      {"static", "Convergence to a fixed direction, compared against the CRLB"},
      {"dynamic", "Tracking a moving direction over time"},
      {"sweep", "Rate and error versus angular velocity"},
      {"table1", "Largest velocity that keeps a target fraction of capacity"},
      {"init-rate", "Coarse-sweep success rate by array size"},
      {"theory", "Stable points, mainlobe, step-size limits and the convergence bound"},
      {"crlb", "Closed-form Fisher information and CRLB quantities"},
  };
  std::string chosen;
  for (const auto& k : kinds) {
    CLI::App* sub = app.add_subcommand(k[0], k[1]);
    sub->add_option("--config", o.config, "JSON configuration file");
    sub->add_option("--m", o.m, "Number of tracking antennas")->check(CLI::PositiveNumber);
    sub->add_option("--snr-db", o.snr_db, "Per-antenna SNR in dB");
    sub->add_option("--seed", o.seed, "Base random seed")->check(CLI::NonNegativeNumber);
    sub->add_option("--trials", o.trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
    sub->add_option("--slots", o.slots, "Slots per trial")->check(CLI::PositiveNumber);
    sub->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", o.out, "Output directory");
    sub->callback([&chosen, name = std::string(k[0])] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  return run(chosen, o);
}
