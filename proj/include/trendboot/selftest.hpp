#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace trendboot {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Quick oracle checks of the numerics, smoothers, multipliers and engine
/// (a few seconds of work). Used by the `selftest` CLI subcommand.
std::vector<CheckResult> run_selftest(std::uint64_t seed);

}  // namespace trendboot
