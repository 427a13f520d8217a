#include "olycost/vuong.hpp"

#include <cmath>

#include "olycost/errors.hpp"
#include "olycost/mathfn.hpp"

namespace olycost {

VuongResult vuong_test(std::span<const double> tail, const ModelFit& model_a,
                       const ModelFit& model_b, double xmin) {
    if (tail.size() < 5) throw InputError("vuong_test: need n_tail >= 5");

    const std::size_t n = tail.size();
    std::vector<double> llr(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        llr[i] = log_density_conditional(model_a, tail[i], xmin) -
                 log_density_conditional(model_b, tail[i], xmin);
        sum += llr[i];
    }
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double l : llr) ss += (l - mean) * (l - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n));  // MLE divisor n
    if (sd <= 0.0) {
        throw NumericError(
            "vuong_test: per-point log-likelihood ratios have zero variance "
            "(models identical on this sample)");
    }

    VuongResult res;
    res.n_tail = n;
    res.per_point_llr_sd = sd;
    res.r_normalized = sum / (sd * std::sqrt(static_cast<double>(n)));
    res.p_two_sided = 2.0 * mathfn::norm_sf(std::fabs(res.r_normalized));
    return res;
}

} // namespace olycost
