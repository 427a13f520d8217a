#include "olycost/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace olycost {

namespace {

struct Vertex {
    std::vector<double> x;
    double value;
};

double simplex_diameter(const std::vector<Vertex>& s) {
    double d = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            double dist2 = 0.0;
            for (std::size_t k = 0; k < s[i].x.size(); ++k) {
                const double diff = s[i].x[k] - s[j].x[k];
                dist2 += diff * diff;
            }
            d = std::max(d, std::sqrt(dist2));
        }
    }
    return d;
}

NelderMeadResult run_once(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x0, double step, int eval_budget,
    double diameter_tol) {
    const std::size_t dim = x0.size();
    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        const double v = f(x);
        return std::isfinite(v) ? v : 1e300;
    };

    std::vector<Vertex> simplex;
    simplex.push_back({x0, eval(x0)});
    for (std::size_t i = 0; i < dim; ++i) {
        std::vector<double> x = x0;
        x[i] += (x[i] != 0.0) ? step * std::fabs(x[i]) : step;
        simplex.push_back({x, eval(x)});
    }

    auto by_value = [](const Vertex& a, const Vertex& b) {
        return a.value < b.value;
    };

    bool converged = false;
    while (evals < eval_budget) {
        std::sort(simplex.begin(), simplex.end(), by_value);
        if (simplex_diameter(simplex) < diameter_tol) {
            converged = true;
            break;
        }

        // Centroid of all but the worst vertex.
        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = 0; j + 1 < simplex.size(); ++j) {
                centroid[i] += simplex[j].x[i];
            }
            centroid[i] /= static_cast<double>(dim);
        }
        Vertex& worst = simplex.back();
        const double best_val = simplex.front().value;
        const double second_worst = simplex[simplex.size() - 2].value;

        auto point_at = [&](double coeff) {
            std::vector<double> x(dim);
            for (std::size_t i = 0; i < dim; ++i) {
                x[i] = centroid[i] + coeff * (worst.x[i] - centroid[i]);
            }
            return x;
        };

        std::vector<double> xr = point_at(-1.0);
        const double fr = eval(xr);
        if (fr < best_val) {
            std::vector<double> xe = point_at(-2.0);
            const double fe = eval(xe);
            if (fe < fr) {
                worst = {std::move(xe), fe};
            } else {
                worst = {std::move(xr), fr};
            }
        } else if (fr < second_worst) {
            worst = {std::move(xr), fr};
        } else {
            const double coeff = (fr < worst.value) ? -0.5 : 0.5;
            std::vector<double> xc = point_at(coeff);
            const double fc = eval(xc);
            const double f_ref = (fr < worst.value) ? fr : worst.value;
            if (fc < f_ref) {
                worst = {std::move(xc), fc};
            } else {
                // Shrink toward the best vertex.
                for (std::size_t j = 1; j < simplex.size(); ++j) {
                    for (std::size_t i = 0; i < dim; ++i) {
                        simplex[j].x[i] = 0.5 * (simplex[j].x[i] +
                                                 simplex.front().x[i]);
                    }
                    simplex[j].value = eval(simplex[j].x);
                }
            }
        }
    }

    std::sort(simplex.begin(), simplex.end(), by_value);
    return {simplex.front().x, simplex.front().value, evals, converged};
}

} // namespace

NelderMeadResult nelder_mead_minimize(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x0, const NelderMeadOptions& opts) {
    // Fixed offset pattern per restart keeps the whole search deterministic.
    static constexpr double kOffsets[] = {0.0, 0.31, -0.47, 0.83};
    const int starts = std::max(1, opts.restarts + 1);
    const int budget_per_start = opts.max_evaluations / starts;

    NelderMeadResult best;
    bool have_best = false;
    for (int s = 0; s < starts && s < 4; ++s) {
        std::vector<double> start = x0;
        for (std::size_t i = 0; i < start.size(); ++i) {
            start[i] += kOffsets[s] * (1.0 + 0.1 * static_cast<double>(i));
        }
        NelderMeadResult res = run_once(f, start, opts.initial_step,
                                        budget_per_start, opts.diameter_tol);
        if (!have_best || res.value < best.value) {
            best = std::move(res);
            have_best = true;
        }
    }
    return best;
}

} // namespace olycost
