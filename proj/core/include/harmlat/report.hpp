#pragma once
// Tabular experiment reports: named columns, typed rows, provenance and
// per-assertion verdicts, with JSON round-trip and CSV export.

#include <json.hpp>
#include <string>
#include <vector>

namespace harmlat {

using Json = nlohmann::json;

struct Verdict {
  std::string name;       // what was checked
  std::string criterion;  // id of the acceptance check this belongs to
  std::string status;     // pass | fail | report-only
  std::string detail;     // numbers, offending instance, reference values
};

struct ExperimentReport {
  std::string id;
  Json params = Json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;  // cells aligned with columns
  Json provenance = Json::object();     // seed, tolerances, radii, version
  std::vector<Verdict> verdicts;

  void add_row(std::vector<Json> cells);
  void add_verdict(const std::string& name, const std::string& criterion,
                   bool pass, const std::string& detail = "");
  void add_report_only(const std::string& name, const std::string& criterion,
                       const std::string& detail);
  bool all_pass() const;  // no hard failures (report-only rows do not count)
};

Json report_to_json(const ExperimentReport& r);
ExperimentReport report_from_json(const Json& j);
// Header row plus data rows; column order is declaration order.
std::string report_to_csv(const ExperimentReport& r);

}  // namespace harmlat
