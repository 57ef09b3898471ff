#include "dpnqcrb/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dpnqcrb {

namespace {

struct Vertex {
    std::vector<double> x;
    double f;
};

std::vector<double> affine(const std::vector<double>& a, const std::vector<double>& b, double t) {
    // a + t (b - a)
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] + t * (b[i] - a[i]);
    }
    return out;
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             std::vector<double> start, const NelderMeadOptions& options) {
    const std::size_t n = start.size();
    if (n == 0) {
        throw std::invalid_argument("Nelder-Mead needs at least one parameter");
    }
    const double dn = static_cast<double>(n);
    const double expand = n > 1 ? 1.0 + 2.0 / dn : 2.0;
    const double contract = n > 1 ? 0.75 - 0.5 / dn : 0.5;
    const double shrink = n > 1 ? 1.0 - 1.0 / dn : 0.5;

    NelderMeadResult result;
    auto eval = [&](const std::vector<double>& x) {
        ++result.evaluations;
        const double f = objective(x);
        return std::isnan(f) ? std::numeric_limits<double>::infinity() : f;
    };
    auto budget_left = [&] { return result.evaluations < options.max_evals; };

    Vertex best{std::move(start), 0.0};
    best.f = eval(best.x);

    for (int round = 0; round <= options.max_rebuilds && budget_left(); ++round) {
        std::vector<Vertex> simplex;
        simplex.reserve(n + 1);
        simplex.push_back(best);
        for (std::size_t i = 0; i < n && budget_left(); ++i) {
            Vertex v{best.x, 0.0};
            v.x[i] += options.initial_step;
            v.f = eval(v.x);
            simplex.push_back(std::move(v));
        }
        if (simplex.size() != n + 1) {
            break;
        }

        bool converged = false;
        while (budget_left()) {
            std::stable_sort(simplex.begin(), simplex.end(),
                             [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
            const double f_best = simplex.front().f;
            const double spread = simplex.back().f - f_best;
            double x_spread = 0.0;
            for (std::size_t v = 1; v <= n; ++v) {
                for (std::size_t i = 0; i < n; ++i) {
                    x_spread = std::max(x_spread, std::abs(simplex[v].x[i] - simplex[0].x[i]));
                }
            }
            if (spread <= options.f_tol * std::max(std::abs(f_best), 1.0) && x_spread <= options.x_tol) {
                converged = true;
                break;
            }

            std::vector<double> centroid(n, 0.0);
            for (std::size_t v = 0; v < n; ++v) {
                for (std::size_t i = 0; i < n; ++i) {
                    centroid[i] += simplex[v].x[i] / dn;
                }
            }
            Vertex& worst = simplex.back();
            const double f_second = simplex[n - 1].f;

            Vertex reflected{affine(centroid, worst.x, -1.0), 0.0};
            reflected.f = eval(reflected.x);
            if (reflected.f < f_best) {
                Vertex expanded{affine(centroid, worst.x, -expand), 0.0};
                expanded.f = eval(expanded.x);
                worst = expanded.f < reflected.f ? std::move(expanded) : std::move(reflected);
                continue;
            }
            if (reflected.f < f_second) {
                worst = std::move(reflected);
                continue;
            }
            Vertex contracted{reflected.f < worst.f ? affine(centroid, reflected.x, contract)
                                                    : affine(centroid, worst.x, contract),
                              0.0};
            contracted.f = eval(contracted.x);
            if (contracted.f < std::min(reflected.f, worst.f)) {
                worst = std::move(contracted);
                continue;
            }
            for (std::size_t v = 1; v <= n && budget_left(); ++v) {
                simplex[v].x = affine(simplex[0].x, simplex[v].x, shrink);
                simplex[v].f = eval(simplex[v].x);
            }
        }

        auto it = std::min_element(simplex.begin(), simplex.end(),
                                   [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
        const double gain = best.f - it->f;
        const bool improved = it->f < best.f;
        if (improved) {
            best = *it;
        }
        result.converged = converged;
        if (!converged || (round > 0 && gain <= options.f_tol * std::max(std::abs(best.f), 1.0))) {
            break;
        }
    }
    result.x = std::move(best.x);
    result.f = best.f;
    return result;
}

}  // namespace dpnqcrb
