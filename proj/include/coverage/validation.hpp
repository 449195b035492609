#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace coverage {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runtime invariant suite behind `coverage validate`: gradient identity,
/// rank-weight limit, Hessian structure, projection safety, consensus
/// contraction, data-integral consistency, rank equivariance.
[[nodiscard]] std::vector<CheckResult> run_invariant_suite(std::uint64_t seed = 7,
                                                           int grid_resolution = 60);

}  // namespace coverage
