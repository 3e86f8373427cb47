#pragma once

#include "aqrm_cli/output.hpp"

#include <aqrm/model.hpp>

#include <cstdint>

namespace aqrm::cli {

struct VerifyOptions {
    int n_max = 3;
    std::uint64_t seed = 1;
    double tol_scale = 1.0;  // multiplies every tolerance; 0 forces failures
    bool timings = true;
};

// Runs every check suite at the reference parameters (delta 1.2, eps 0.3, omega 1).
// Report keys are emitted in a fixed order; "passed" is the conjunction.
Json run_verify(const VerifyOptions& opts);

} // namespace aqrm::cli
