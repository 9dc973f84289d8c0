#include "diomax/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "diomax/common.hpp"

namespace diomax {

namespace {

std::string utc_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string report_json_text(const ExperimentReport& report,
                             bool include_timestamp) {
  nlohmann::ordered_json j;
  j["experiment"] = report.experiment;
  j["version"] = report.version;
  if (include_timestamp) j["timestamp"] = utc_now();
  j["seed"] = report.seed;
  nlohmann::ordered_json cfg;
  for (const auto& [k, v] : report.config_echo) cfg[k] = v;
  j["config"] = cfg;
  nlohmann::ordered_json metrics;
  for (const auto& [k, v] : report.metrics) metrics[k] = v;
  j["metrics"] = metrics;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    nlohmann::ordered_json jc;
    jc["check"] = c.name;
    jc["pass"] = c.pass;
    jc["value"] = c.value;
    jc["tolerance"] = c.tolerance;
    jc["detail"] = c.detail;
    checks.push_back(jc);
  }
  j["checks"] = checks;
  j["all_pass"] = report.all_pass();
  j["outputs"] = report.output_files;
  return j.dump(2) + "\n";
}

void write_report_json(const ExperimentReport& report, const std::string& path,
                       bool include_timestamp) {
  std::ofstream out(path);
  if (!out) throw input_error("report: cannot open " + path + " for writing");
  out << report_json_text(report, include_timestamp);
  if (!out) throw input_error("report: write failed on " + path);
}

std::string report_summary_text(const ExperimentReport& report) {
  std::ostringstream out;
  char line[256];
  for (const auto& c : report.checks) {
    std::snprintf(line, sizeof line, "[%s] %-44s value=%-12.6g tol=%-10.4g %s",
                  c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value,
                  c.tolerance, c.detail.c_str());
    out << line << '\n';
  }
  out << (report.all_pass() ? "ALL CHECKS PASSED" : "CHECK FAILURES PRESENT")
      << " (" << report.experiment << ")\n";
  return out.str();
}

}  // namespace diomax
