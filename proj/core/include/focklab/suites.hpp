#pragma once

/* Verification suite catalog.
 *
 * Each suite packages the measurements that certify one statement of the
 * underlying analysis (or one piece of numerical plumbing) into a
 * SuiteReport.  Case tolerances default to the acceptance values and can be
 * overridden through the Config; the `criterion` tag on a case ties it to
 * the numbered acceptance checklist (0 = informational).
 *
 * Suites are deterministic given (seed, config).  run_suites executes them
 * as independent parallel jobs and merges the reports in the order they
 * were requested; a suite that throws is converted into a single failed
 * case so one broken configuration cannot take down a whole run.
 */

#include <string>
#include <vector>

#include "focklab/config.hpp"
#include "focklab/report.hpp"

namespace focklab {

// Catalog order; also the execution and report order for "all".
const std::vector<std::string>& suite_catalog();

// The anchor string recorded in the suite's report (a quoted statement
// fragment where one exists, a descriptive slug otherwise).  Throws on an
// unknown suite name.
std::string suite_anchor(const std::string& suite);

SuiteReport run_suite(const std::string& name, const Config& cfg);

std::vector<SuiteReport> run_suites(const std::vector<std::string>& names,
                                    const Config& cfg);

}  // namespace focklab
