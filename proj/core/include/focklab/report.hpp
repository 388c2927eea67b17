#pragma once

/* Verification reports.  A suite produces a list of cases; each case carries
 * the inputs it ran with, the measured and expected numbers (NaN for
 * verdict-style cases, where `pass` is an equality of classifications), and a
 * tolerance.  Serialization is deterministic: given the same seed and config
 * the JSON payload is byte-identical except for the wallTimeMs field. */

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace focklab {

struct CaseResult {
  std::string name;
  int criterion = 0;  // 0 = informational, otherwise acceptance criterion tag
  std::string inputs;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

// Numeric case: pass iff |measured - expected| <= tolerance.
CaseResult numeric_case(std::string name, int criterion, std::string inputs,
                        double measured, double expected, double tolerance,
                        std::string note = "");
// Verdict case: pass is decided by the caller (classifier equality etc),
// measured/expected/tolerance are NaN in the serialized record.
CaseResult verdict_case(std::string name, int criterion, std::string inputs,
                        bool pass, std::string note);

struct SuiteReport {
  std::string suite;
  std::string anchor;
  std::uint64_t seed = 0;
  double wall_ms = 0.0;
  std::vector<CaseResult> cases;

  bool pass() const;
};

// JSON for one suite or a combined run (tool version, catalog hash, suites).
std::string render_suite_json(const SuiteReport& report, int indent = 2);
std::string render_summary_json(const std::vector<SuiteReport>& reports,
                                int indent = 2);
// Flat CSV of one suite's cases.
std::string render_suite_csv(const SuiteReport& report);

// Writes <base>.json plus <base>-<suite>.csv per suite; returns the paths
// written.  Throws std::invalid_argument on an empty report list and
// std::runtime_error on I/O failure.
std::vector<std::filesystem::path> emit_report(
    const std::vector<SuiteReport>& reports,
    const std::filesystem::path& base);

}  // namespace focklab
