#pragma once

#include <functional>
#include <vector>

namespace dpnqcrb {

struct NelderMeadOptions {
    long max_evals = 20000;
    /// Stop when (f_worst - f_best) <= f_tol * max(|f_best|, 1) ...
    double f_tol = 1e-9;
    /// ... and every vertex lies within x_tol of the best one (max norm).
    double x_tol = 1e-9;
    /// Edge length of the initial simplex.
    double initial_step = 0.1;
    /// Rebuild the simplex around the converged point this many times to
    /// escape premature collapse; stops early when a rebuild gains nothing.
    int max_rebuilds = 3;
};

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    long evaluations = 0;
    bool converged = false;
};

/// Derivative-free minimization with dimension-adaptive coefficients
/// (reflection 1, expansion 1 + 2/n, contraction 0.75 - 1/2n, shrink 1 - 1/n).
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             std::vector<double> start, const NelderMeadOptions& options = {});

}  // namespace dpnqcrb
