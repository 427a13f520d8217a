#pragma once

#include <cstddef>
#include <span>

#include "olycost/distfit.hpp"

namespace olycost {

struct VuongResult {
    double r_normalized = 0.0;  // positive favors model A
    double p_two_sided = 1.0;
    std::size_t n_tail = 0;
    double per_point_llr_sd = 0.0;
};

// Vuong likelihood-ratio comparison of two non-nested models over the same
// tail. The caller supplies the tail sample both models were fitted on;
// densities are conditioned on x >= xmin. r = sum(l_i) / (sd(l_i) * sqrt(n))
// with the MLE (divisor n) standard deviation; p is two-sided normal.
// Throws NumericError when the per-point log-likelihood ratios have zero
// variance.
VuongResult vuong_test(std::span<const double> tail, const ModelFit& model_a,
                       const ModelFit& model_b, double xmin);

} // namespace olycost
