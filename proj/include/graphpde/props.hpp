#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graphpde/graph.hpp"

namespace graphpde {

// Seeded randomized invariant suites shared by the CLI `props` subcommand and
// the acceptance checks. Each entry counts runs and violations and keeps the
// worst observed defect for reporting.
struct PropsConfig {
  uint64_t seed = 1;
  int operator_identity_runs = 50;
  int spectral_runs = 20;
  int kernel_runs = 20;
  int linear_supersolution_runs = 200;
  int ordered_pair_runs = 100;
  int monotone_runs = 8;
};

struct PropsEntry {
  std::string name;
  int runs = 0;
  int failures = 0;
  double worst = 0.0;  // largest violation magnitude observed
  std::string note;
};

struct PropsReport {
  std::vector<PropsEntry> entries;
  bool ok() const {
    for (const auto& e : entries)
      if (e.failures > 0) return false;
    return true;
  }
};

PropsReport run_property_suites(const PropsConfig& cfg);

}  // namespace graphpde
