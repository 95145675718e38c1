#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gnnbench {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Deterministic oracle and invariant suite on synthetic data: iterative PPR
/// vs. the dense solve, model gradients vs. finite differences, the GCN/SGC
/// collapse identity, decoupled-vs-inline propagation, the spectrum of the
/// normalized adjacency, and permutation equivariance. No external files;
/// runs in well under five minutes.
std::vector<CheckResult> run_selftest();

/// Per-model test accuracy on a well-separated synthetic dataset (the
/// end-to-end smoke test; every model should clear 0.95).
std::vector<std::pair<std::string, double>> synthetic_end_to_end(std::uint64_t seed = 7);

} // namespace gnnbench
