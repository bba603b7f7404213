// One line per acceptance criterion. Exit status is the number of failures.
//   acceptance [--seed N]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "coarse/suites.hpp"

namespace {

using coarse::suites::SuiteOptions;
using coarse::suites::SuiteReport;

struct Criterion {
  int id;
  const char* title;
  const char* suite;
  double budget_seconds;  // 0: no runtime bound
};

const Criterion kCriteria[] = {
    {1, "disjointification", "lemma-disjointify", 60},
    {2, "fibers of coarsely n-to-1 maps", "fibers", 120},
    {3, "pushforward dimension bound", "pushforward-bound", 0},
    {4, "quotient metric sandwich", "quotient-sandwich", 0},
    {5, "asdim sandwich on group quotients", "sandwich", 600},
    {6, "sFDC and countable asdim", "sfdc-equivalence", 0},
    {7, "tree transfer", "tree-transfer", 0},
    {8, "MSP constants", "msp-pipelines", 0},
    {9, "oracle equivalence", "oracle-equivalence", 0},
};

struct Timed {
  SuiteReport report;
  double seconds;
};

Timed timed_run(const char* name, const SuiteOptions& o) {
  const auto t0 = std::chrono::steady_clock::now();
  auto r = coarse::suites::run_suite(name, o);
  return {std::move(r), std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()};
}

void line(int id, const char* title, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id, title, detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  SuiteOptions o;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
      o.seed = std::strtoull(argv[++i], nullptr, 10);
    } else {
      std::fprintf(stderr, "usage: %s [--seed N]\n", argv[0]);
      return 2;
    }
  }

  int failures = 0;
  std::vector<std::string> first_dumps;
  for (const auto& c : kCriteria) {
    const auto t = timed_run(c.suite, o);
    const bool in_time = c.budget_seconds == 0 || t.seconds < c.budget_seconds;
    const bool pass = t.report.ok() && in_time;
    char detail[256];
    std::snprintf(detail, sizeof detail, "%s %zu/%zu, %.2fs%s", c.suite, t.report.passed, t.report.instances,
                  t.seconds, in_time ? "" : ", over time budget");
    line(c.id, c.title, pass, detail);
    failures += pass ? 0 : 1;
    first_dumps.push_back(t.report.body.dump());
  }

  // Full-size reruns plus the small-scale determinism suite.
  std::size_t identical = 0;
  for (std::size_t k = 0; k < first_dumps.size(); ++k) {
    identical += coarse::suites::run_suite(kCriteria[k].suite, o).body.dump() == first_dumps[k] ? 1 : 0;
  }
  const auto det = coarse::suites::run_suite("determinism", o);
  const bool pass = identical == first_dumps.size() && det.ok();
  char detail[256];
  std::snprintf(detail, sizeof detail, "%zu/%zu full reruns identical, determinism %zu/%zu", identical,
                first_dumps.size(), det.passed, det.instances);
  line(10, "determinism", pass, detail);
  failures += pass ? 0 : 1;
  return failures;
}
