#include "harmlat/report.hpp"

#include <sstream>
#include <stdexcept>

namespace harmlat {

void ExperimentReport::add_row(std::vector<Json> cells) {
  if (cells.size() != columns.size())
    throw std::invalid_argument("row width does not match column count");
  rows.push_back(std::move(cells));
}

void ExperimentReport::add_verdict(const std::string& name,
                                   const std::string& criterion, bool pass,
                                   const std::string& detail) {
  verdicts.push_back({name, criterion, pass ? "pass" : "fail", detail});
}

void ExperimentReport::add_report_only(const std::string& name,
                                       const std::string& criterion,
                                       const std::string& detail) {
  verdicts.push_back({name, criterion, "report-only", detail});
}

bool ExperimentReport::all_pass() const {
  for (const auto& v : verdicts)
    if (v.status == "fail") return false;
  return true;
}

Json report_to_json(const ExperimentReport& r) {
  Json j;
  j["id"] = r.id;
  j["params"] = r.params;
  j["columns"] = r.columns;
  j["rows"] = r.rows;
  j["provenance"] = r.provenance;
  Json vs = Json::array();
  for (const auto& v : r.verdicts)
    vs.push_back({{"name", v.name},
                  {"criterion", v.criterion},
                  {"status", v.status},
                  {"detail", v.detail}});
  j["verdicts"] = vs;
  return j;
}

ExperimentReport report_from_json(const Json& j) {
  ExperimentReport r;
  r.id = j.at("id").get<std::string>();
  r.params = j.at("params");
  r.columns = j.at("columns").get<std::vector<std::string>>();
  for (const auto& row : j.at("rows")) {
    std::vector<Json> cells(row.begin(), row.end());
    r.add_row(std::move(cells));
  }
  r.provenance = j.at("provenance");
  for (const auto& v : j.at("verdicts"))
    r.verdicts.push_back({v.at("name").get<std::string>(),
                          v.at("criterion").get<std::string>(),
                          v.at("status").get<std::string>(),
                          v.at("detail").get<std::string>()});
  return r;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_cell(const Json& cell) {
  if (cell.is_string()) return csv_escape(cell.get<std::string>());
  return cell.dump();
}

}  // namespace

std::string report_to_csv(const ExperimentReport& r) {
  std::ostringstream out;
  for (std::size_t i = 0; i < r.columns.size(); ++i) {
    if (i) out << ',';
    out << csv_escape(r.columns[i]);
  }
  out << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << csv_cell(row[i]);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace harmlat
