#pragma once

// Report plumbing shared by the coarse-kit subcommands.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coarse/io.hpp"

namespace cli {

using coarse::io::json;

/// Result of one subcommand: the payload and whether its certificate holds.
struct Outcome {
  json result = json::object();
  bool holds = true;
};

/// Inputs and parameters collected while a subcommand runs.
class Context {
 public:
  explicit Context(coarse::SearchLimits limits) : limits_(limits) {}

  /// Reads a JSON file and records its digest under `role`.
  json load(const std::string& role, const std::string& path);
  void param(const std::string& name, json value) { params_[name] = std::move(value); }

  const coarse::SearchLimits& limits() const { return limits_; }
  const json& inputs() const { return inputs_; }
  const json& params() const { return params_; }

 private:
  coarse::SearchLimits limits_;
  json inputs_ = json::object();
  json params_ = json::object();
};

using Action = std::function<Outcome(Context&)>;

/// Options every leaf command accepts.
struct CommonOptions {
  std::string out;
  bool json_flag = true;
  coarse::SearchLimits limits;
};

void add_common(CLI::App* sub, CommonOptions& common);

/// Runs `action`, writes the report, prints timing to stderr, returns the exit code.
int execute(const std::string& command, const Action& action, const CommonOptions& common);

json numbers(const std::vector<double>& v);

}  // namespace cli
