#pragma once

// Seeded property suites behind the acceptance criteria and `coarse-kit suite`.
// Reports carry no timings, so a rerun with the same options is byte-identical.

#include <cstdint>
#include <string>
#include <vector>

#include "coarse/io.hpp"
#include "coarse/search.hpp"

namespace coarse::suites {

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::size_t count = 0;       // 0: the suite's default
  std::size_t max_points = 0;  // 0: the suite's default
  SearchLimits limits;
};

struct SuiteInfo {
  std::string name;
  std::string summary;
  std::size_t default_count = 0;
  std::size_t default_max_points = 0;
};

struct SuiteReport {
  std::string name;
  std::size_t instances = 0;
  std::size_t passed = 0;
  io::json body;

  bool ok() const { return instances > 0 && passed == instances; }
};

const std::vector<SuiteInfo>& catalog();
/// Throws PreconditionError for an unknown name.
SuiteReport run_suite(const std::string& name, const SuiteOptions& options);

}  // namespace coarse::suites
