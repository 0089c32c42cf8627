#pragma once

#include <cstdint>
#include <stdexcept>

namespace rlink {

/// Numerical tolerances shared by every kernel.  All randomized choices
/// (projection centers, chart randomization, eliminator mixing) derive
/// from the single seed so that whole runs are reproducible.
struct ToleranceConfig {
    double root_tol = 1e-11;    // residual tolerance for polished roots
    double cluster_tol = 1e-7;  // mutual-distance threshold for root clustering
    double geom_tol = 1e-6;     // coincidence tests, half-integer rounding guards
    double quad_step = 2e-3;    // base parameter step on RP^1 sampling circles
    std::uint64_t seed = 0;

    void validate() const {
        if (root_tol <= 0 || cluster_tol <= 0 || geom_tol <= 0 || quad_step <= 0)
            throw std::invalid_argument("ToleranceConfig: tolerances must be positive");
        if (cluster_tol <= root_tol)
            throw std::invalid_argument("ToleranceConfig: cluster_tol must exceed root_tol");
    }
};

}  // namespace rlink
