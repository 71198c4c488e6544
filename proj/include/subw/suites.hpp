#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "subw/hypergraph.hpp"

namespace subw {

/// Named hypergraphs shared by the CLI fixtures and the verification suites:
/// `single-edge-<r>`, `path4`, `triangle`, `cycle5`, `k4`, `q1`, `fano`, `grid3`.
Hypergraph fixture_hypergraph(const std::string& name);
std::vector<std::string> fixture_names();

struct SuiteOptions {
  std::uint64_t seed = 1;
  int jobs = 1;
  int cases = 0;  // 0: the suite's default count
};

struct SuiteInfo {
  std::string name;
  int criterion = 0;
  std::string title;
  int default_cases = 0;
  bool fixed = false;  // fixture list, ignores seed and case count
};

/// One entry per acceptance criterion, in criterion order.
const std::vector<SuiteInfo>& suite_catalog();
const SuiteInfo& suite_info(const std::string& name);

struct SuiteReport {
  std::string name;
  std::string title;
  int criterion = 0;
  std::uint64_t seed = 0;
  long cases = 0;
  long required_cases = 0;
  long checks = 0;
  long failures = 0;
  // the first few failure descriptions, in case order
  std::vector<std::string> messages;
  std::map<std::string, long> counters;

  bool passed() const { return failures == 0 && cases >= required_cases; }
};

/// Runs every case of the suite. Each case draws from its own generator seeded by
/// (seed, criterion, index), so reports do not depend on `jobs`. DomainError for an
/// unknown suite name.
SuiteReport run_suite(const std::string& name, const SuiteOptions& options = {});

}  // namespace subw
