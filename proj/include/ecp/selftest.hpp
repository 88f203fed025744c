#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ecp {

struct SelfTestResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast randomized invariant checks: score dominance, ACP alpha bounds,
/// quantile against a counting oracle, and grid safe-set soundness.
std::vector<SelfTestResult> run_selftests(std::uint64_t seed = 1);

}  // namespace ecp
