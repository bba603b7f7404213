#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "coarse/generators.hpp"
#include "coarse/suites.hpp"

namespace coarse::suites::detail {

using io::json;

/// Per-instance outcome: named checks plus the numbers worth keeping.
class Instance {
 public:
  explicit Instance(std::size_t id) { record_["id"] = id; }

  void check(const std::string& name, bool ok) {
    if (!ok) failures_.push_back(name);
  }
  json& operator[](const std::string& key) { return record_[key]; }
  bool ok() const { return failures_.empty(); }
  const std::vector<std::string>& failures() const { return failures_; }
  json finish() {
    record_["ok"] = ok();
    if (!failures_.empty()) record_["failed_checks"] = failures_;
    return record_;
  }

 private:
  json record_ = json::object();
  std::vector<std::string> failures_;
};

/// Collects instances; keeps up to five full counterexample dumps.
class Recorder {
 public:
  Recorder(std::string name, const SuiteOptions& options, std::size_t count, std::size_t max_points);

  gen::Rng next_rng() { return gen::Rng(master_()); }
  /// Runs one instance; exceptions become failures named "threw".
  void run(const std::function<void(Instance&, json& dump)>& body);
  json& parameters() { return params_; }
  SuiteReport finish();

  std::size_t count() const { return count_; }
  std::size_t max_points() const { return max_points_; }
  const SuiteOptions& options() const { return options_; }

 private:
  std::string name_;
  SuiteOptions options_;
  std::size_t count_;
  std::size_t max_points_;
  gen::Rng master_;
  json params_ = json::object();
  json results_ = json::array();
  json counterexamples_ = json::array();
  std::size_t passed_ = 0;
};

/// Least C with every maximal r-bounded B splitting into <= n parts of
/// diameter <= C; `exact` false when a relaxation or a ball cover was used.
struct ControlValue {
  double value = 0.0;
  bool exact = true;
};
ControlValue control_at(const CoarseMap& f, int n, double r, const SearchLimits& limits);

/// Step control attaining `value` at r (parts of diameter <= value).
ControlFunction attained(double r, double value);

SuiteReport lemma_disjointify(const SuiteOptions& o);
SuiteReport fibers(const SuiteOptions& o);
SuiteReport pushforward_bound(const SuiteOptions& o);
SuiteReport quotient_sandwich(const SuiteOptions& o);
SuiteReport asdim_sandwich(const SuiteOptions& o);
SuiteReport sfdc_equivalence(const SuiteOptions& o);
SuiteReport tree_transfer(const SuiteOptions& o);
SuiteReport msp_pipelines(const SuiteOptions& o);
SuiteReport oracle_equivalence(const SuiteOptions& o);
SuiteReport determinism(const SuiteOptions& o);

}  // namespace coarse::suites::detail
