#include "cli_support.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace cli {

json Context::load(const std::string& role, const std::string& path) {
  json j = coarse::io::read_json_file(path);
  inputs_[role] = json{{"path", path}, {"sha256", coarse::io::digest(j)}};
  return j;
}

void add_common(CLI::App* sub, CommonOptions& common) {
  sub->add_option("--out", common.out, "Write the report here instead of stdout");
  sub->add_flag("--json", common.json_flag, "JSON output (the only format)");
  sub->add_option("--clique-cap", common.limits.clique_cap, "Exact maximal-subset enumeration up to this size")
      ->capture_default_str();
  sub->add_option("--exact-cap", common.limits.exact_cap, "Exhaustive searches up to this size")
      ->capture_default_str();
  sub->add_option("--node-budget", common.limits.node_budget, "Backtracking node budget")->capture_default_str();
  sub->add_option("--max-cliques", common.limits.max_cliques, "Clique count before falling back to balls")
      ->capture_default_str();
}

json numbers(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(coarse::io::number(x));
  return out;
}

namespace {

void emit(const json& report, const std::string& out) {
  const std::string text = report.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw coarse::io::InputError(out + ": cannot write report");
  f << text;
}

}  // namespace

int execute(const std::string& command, const Action& action, const CommonOptions& common) {
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  Context ctx(common.limits);
  json report{{"schema_version", coarse::io::kSchemaVersion}, {"command", command}};
  int code = 0;
  try {
    Outcome o = action(ctx);
    report["inputs"] = ctx.inputs();
    report["parameters"] = ctx.params();
    report["limits"] = json{{"clique_cap", common.limits.clique_cap},
                            {"exact_cap", common.limits.exact_cap},
                            {"node_budget", common.limits.node_budget},
                            {"max_cliques", common.limits.max_cliques}};
    report["holds"] = o.holds;
    report["result"] = std::move(o.result);
    code = o.holds ? 0 : 1;
  } catch (const coarse::PreconditionError& e) {
    // A refusal is a certificate outcome, so it still gets a report.
    report["inputs"] = ctx.inputs();
    report["parameters"] = ctx.params();
    report["holds"] = false;
    report["refusal"] = e.what();
    code = 1;
  } catch (const std::exception& e) {
    std::cerr << "coarse-kit " << command << ": error: " << e.what() << "\n";
    std::fprintf(stderr, "timing: %s %.6fs\n", command.c_str(), elapsed());
    return 2;
  }
  try {
    emit(report, common.out);
  } catch (const std::exception& e) {
    std::cerr << "coarse-kit " << command << ": error: " << e.what() << "\n";
    return 2;
  }
  std::fprintf(stderr, "timing: %s %.6fs\n", command.c_str(), elapsed());
  return code;
}

}  // namespace cli
