#include "focklab/report.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "json.hpp"

#include "focklab/version.hpp"
#include "focklab/weights.hpp"

namespace focklab {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json case_json(const CaseResult& c) {
  ordered_json j;
  j["name"] = c.name;
  j["criterion"] = c.criterion;
  j["inputs"] = c.inputs;
  // NaN serializes as null, which is what verdict cases want.
  j["measured"] = c.measured;
  j["expected"] = c.expected;
  j["tolerance"] = c.tolerance;
  j["pass"] = c.pass;
  j["note"] = c.note;
  return j;
}

ordered_json suite_json(const SuiteReport& r) {
  ordered_json j;
  j["suite"] = r.suite;
  j["anchor"] = r.anchor;
  j["seed"] = r.seed;
  j["pass"] = r.pass();
  j["wallTimeMs"] = r.wall_ms;
  j["cases"] = ordered_json::array();
  for (const CaseResult& c : r.cases) j["cases"].push_back(case_json(c));
  return j;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  out += "\"";
  return out;
}

std::string num_field(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

CaseResult numeric_case(std::string name, int criterion, std::string inputs,
                        double measured, double expected, double tolerance,
                        std::string note) {
  CaseResult c;
  c.name = std::move(name);
  c.criterion = criterion;
  c.inputs = std::move(inputs);
  c.measured = measured;
  c.expected = expected;
  c.tolerance = tolerance;
  c.pass = std::isfinite(measured) &&
           std::abs(measured - expected) <= tolerance;
  c.note = std::move(note);
  return c;
}

CaseResult verdict_case(std::string name, int criterion, std::string inputs,
                        bool pass, std::string note) {
  CaseResult c;
  c.name = std::move(name);
  c.criterion = criterion;
  c.inputs = std::move(inputs);
  c.measured = std::numeric_limits<double>::quiet_NaN();
  c.expected = std::numeric_limits<double>::quiet_NaN();
  c.tolerance = std::numeric_limits<double>::quiet_NaN();
  c.pass = pass;
  c.note = std::move(note);
  return c;
}

bool SuiteReport::pass() const {
  for (const CaseResult& c : cases)
    if (!c.pass) return false;
  return true;
}

std::string render_suite_json(const SuiteReport& report, int indent) {
  return suite_json(report).dump(indent);
}

std::string render_summary_json(const std::vector<SuiteReport>& reports,
                                int indent) {
  ordered_json j;
  j["tool"] = "focklab";
  j["version"] = kVersion;
  j["catalogHash"] = catalog_hash();
  bool all = true;
  for (const SuiteReport& r : reports) all = all && r.pass();
  j["pass"] = all;
  j["suites"] = ordered_json::array();
  for (const SuiteReport& r : reports) j["suites"].push_back(suite_json(r));
  return j.dump(indent);
}

std::string render_suite_csv(const SuiteReport& report) {
  std::string out =
      "suite,anchor,case,criterion,inputs,measured,expected,tolerance,pass,"
      "note\n";
  for (const CaseResult& c : report.cases) {
    out += csv_escape(report.suite) + ",";
    out += csv_escape(report.anchor) + ",";
    out += csv_escape(c.name) + ",";
    out += std::to_string(c.criterion) + ",";
    out += csv_escape(c.inputs) + ",";
    out += num_field(c.measured) + ",";
    out += num_field(c.expected) + ",";
    out += num_field(c.tolerance) + ",";
    out += (c.pass ? "true," : "false,");
    out += csv_escape(c.note) + "\n";
  }
  return out;
}

std::vector<std::filesystem::path> emit_report(
    const std::vector<SuiteReport>& reports,
    const std::filesystem::path& base) {
  if (reports.empty())
    throw std::invalid_argument("emit_report: empty report list");

  std::vector<std::filesystem::path> written;
  std::filesystem::path json_path = base;
  if (json_path.extension() != ".json") json_path += ".json";
  std::filesystem::path stem = json_path;
  stem.replace_extension();

  if (json_path.has_parent_path())
    std::filesystem::create_directories(json_path.parent_path());

  {
    std::ofstream out(json_path);
    if (!out) throw std::runtime_error("cannot write " + json_path.string());
    out << render_summary_json(reports) << "\n";
    written.push_back(json_path);
  }
  for (const SuiteReport& r : reports) {
    std::filesystem::path csv_path = stem;
    csv_path += "-" + r.suite + ".csv";
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot write " + csv_path.string());
    out << render_suite_csv(r);
    written.push_back(csv_path);
  }
  return written;
}

}  // namespace focklab
