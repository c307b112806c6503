#include "beamtrack/output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

namespace beamtrack {

namespace fs = std::filesystem;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string series_csv(const MetricSeries& s) {
  std::ostringstream os;
  os << "slot,metric,mean,stderr,n_trials\n";
  for (std::size_t i = 0; i < s.slot.size(); ++i)
    os << s.slot[i] << ',' << s.metric << ',' << format_double(s.mean[i]) << ','
       << format_double(s.stderr_[i]) << ',' << s.n_trials[i] << '\n';
  return os.str();
}

std::string table_csv(const SummaryTable& t) {
  std::ostringstream os;
  os << "param,algorithm,value\n";
  for (const auto& r : t.rows) os << r.param << ',' << r.algorithm << ',' << format_double(r.value) << '\n';
  return os.str();
}

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Runtime, "cannot open " + path.string() + " for writing");
  f << body;
  if (!f) throw Error(ErrorCode::Runtime, "failed writing " + path.string());
}

}  // namespace

void write_outputs(const ExperimentResult& result, const RunConfig& cfg, const std::string& dir) {
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& s : result.series)
    files.emplace_back(s.algorithm + "_" + s.metric + ".csv", series_csv(s));
  for (const auto& t : result.tables) files.emplace_back(t.name + ".csv", table_csv(t));
  std::string notes;
  for (const auto& n : result.notes) notes += n + "\n";
  if (cfg.seed_was_random) notes += "seed was not given and was drawn at random\n";
  files.emplace_back("notes.txt", notes);
  files.emplace_back("config.resolved.json", to_json(cfg) + "\n");

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Runtime, "cannot create output directory " + dir + ": " + ec.message());
  for (const auto& [name, body] : files) {
    const fs::path final_path = fs::path(dir) / name;
    const fs::path tmp = fs::path(dir) / ("." + name + ".tmp");
    write_file(tmp, body);
    fs::rename(tmp, final_path, ec);
    if (ec) throw Error(ErrorCode::Runtime, "cannot move " + tmp.string() + ": " + ec.message());
  }
}

std::string report(const ExperimentResult& result) {
  std::ostringstream os;
  for (const auto& t : result.tables) {
    os << "[" << t.name << "]\n";
    for (const auto& r : t.rows)
      os << "  " << r.param << "  " << r.algorithm << "  " << format_double(r.value) << '\n';
  }
  for (const auto& n : result.notes) os << "note: " << n << '\n';
  return os.str();
}

}  // namespace beamtrack
