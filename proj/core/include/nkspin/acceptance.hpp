#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace nkspin {

struct AcceptanceConfig {
    std::uint64_t seed{20240601};
    std::size_t residual_samples{1000};
    std::size_t volume_samples{20000};
    /// Random non-example spinors used by the divergence identity check.
    std::size_t random_spinors{50};
    std::size_t random_spinor_samples{200};
    /// Random admissible parameter draws per Lagrangian family.
    std::size_t parameter_draws{5};
};

struct CriterionResult {
    int id{0};
    std::string name;
    bool pass{false};
    /// Observed values, in a fixed order.
    std::vector<std::pair<std::string, double>> metrics;
    /// Human-readable summary of the thresholds applied.
    std::string detail;
};

/// Runs the thirteen end-to-end verification criteria. Exceptions inside a
/// criterion are caught and reported as a failure of that criterion.
std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& cfg = {});

}  // namespace nkspin
