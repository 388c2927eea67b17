// Acceptance gate: one process per criterion so the harness reports each
// independently.  Usage: focklab_acceptance <criterion 1..14>.  Runs the
// suite that owns the criterion, prints one line per tagged case and a
// summary line, and exits nonzero when any tagged case fails.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "focklab/config.hpp"
#include "focklab/report.hpp"
#include "focklab/suites.hpp"

namespace {

const char* suite_for(int criterion) {
  switch (criterion) {
    case 1: return "kernel-classical";
    case 2: return "laplace";
    case 3: return "laplace";
    case 4: return "theorem-b";
    case 5: return "hankel-exact";
    case 6: return "schatten-threshold";
    case 7: return "mo-bloch";
    case 8: return "mo-bloch";
    case 9: return "mo-bloch";
    case 10: return "carleson";
    case 11: return "trace";
    case 12: return "hankel-exact";
    case 13: return "lattice";
    case 14: return "qx";
    default: return nullptr;
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <criterion 1..14>\n", argv[0]);
    return 2;
  }
  const int criterion = std::atoi(argv[1]);
  const char* suite = suite_for(criterion);
  if (!suite) {
    std::fprintf(stderr, "unknown criterion: %s\n", argv[1]);
    return 2;
  }

  focklab::Config cfg;
  if (const char* cache = std::getenv("FOCKLAB_CACHE_DIR"))
    cfg.set("cache_dir", cache);

  focklab::SuiteReport rep;
  try {
    rep = focklab::run_suite(suite, cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "suite %s raised: %s\n", suite, e.what());
    return 2;
  }

  int total = 0, failed = 0;
  for (const focklab::CaseResult& c : rep.cases) {
    if (c.criterion != criterion) continue;
    ++total;
    if (!c.pass) ++failed;
    std::printf("[%s] %s (%s)%s%s\n", c.pass ? "pass" : "FAIL",
                c.name.c_str(), c.inputs.c_str(), c.note.empty() ? "" : " - ",
                c.note.c_str());
  }
  const bool ok = total > 0 && failed == 0;
  std::printf("criterion %02d: %s (%d/%d cases, suite %s, %.0f ms)\n",
              criterion, ok ? "PASS" : "FAIL", total - failed, total, suite,
              rep.wall_ms);
  return ok ? 0 : 1;
}
