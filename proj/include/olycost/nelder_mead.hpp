#pragma once

#include <functional>
#include <vector>

namespace olycost {

struct NelderMeadOptions {
    double diameter_tol = 1e-9;
    int max_evaluations = 10000;
    // Number of additional deterministic jittered starts; the best final
    // objective value wins.
    int restarts = 3;
    double initial_step = 0.25;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
};

// Derivative-free simplex minimization. Deterministic: restarts use fixed
// offset patterns, not random jitter, so results are reproducible
// bit-for-bit.
NelderMeadResult nelder_mead_minimize(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x0, const NelderMeadOptions& opts = {});

} // namespace olycost
