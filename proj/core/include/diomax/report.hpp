#pragma once
// Experiment reports: ordered scalar metrics, explicit-tolerance checks, and
// a config echo, rendered to deterministic JSON.  Identical config and seed
// give byte-identical files once the timestamp is excluded; array-valued
// series live in sidecar CSVs, not in the JSON.  The JSON library stays out
// of this header so installed consumers of the core library do not inherit a
// vendored include path.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace diomax {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;      // the measured quantity
  double tolerance = 0.0;  // the bound it was held to
  std::string detail;      // comparator or context, e.g. "residual <= tol"
};

struct ExperimentReport {
  std::string experiment;
  std::string version = "0.1.0";
  uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> config_echo;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<CheckResult> checks;
  std::vector<std::string> output_files;

  void add_metric(const std::string& name, double value) {
    metrics.emplace_back(name, value);
  }
  void add_check(const std::string& name, bool pass, double value,
                 double tolerance, const std::string& detail) {
    checks.push_back({name, pass, value, tolerance, detail});
  }
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

std::string report_json_text(const ExperimentReport& report,
                             bool include_timestamp);
void write_report_json(const ExperimentReport& report, const std::string& path,
                       bool include_timestamp);

/// One line per check ("[PASS] name  value=… tol=…"), then a verdict line.
std::string report_summary_text(const ExperimentReport& report);

}  // namespace diomax
