#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace graphsmooth {

/// Result of the structural invariant battery.
struct SelftestReport {
  struct Check {
    std::string name;
    bool passed = false;
    std::string detail;  ///< measured quantity, or the failure reason
  };
  std::vector<Check> checks;

  bool all_passed() const;
};

/// Fast structural checks on a small random instance: row-stochasticity of
/// the aggregation operator (including drift after 1000 steps), constant
/// features as fixed points, order-0 smoothing as the identity, permutation
/// equivariance of the graph builder, agreement of the sweep's k = 0 entry
/// with a direct fit, and byte-identical experiment reruns driven by a
/// manifest.  scratch_dir (created if missing) receives the rerun artifacts;
/// when empty, a throwaway directory under the system temp path is used and
/// removed afterwards.
SelftestReport run_selftest(std::uint64_t seed = 97531,
                            const std::filesystem::path& scratch_dir = {});

}  // namespace graphsmooth
