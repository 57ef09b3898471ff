#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "dpnqcrb/fock.hpp"
#include "dpnqcrb/qfim.hpp"
#include "dpnqcrb/state.hpp"

namespace dpnqcrb {

struct OptimConfig {
    int starts = 16;
    /// Objective evaluations allowed per restart.
    long max_evals = 20000;
    /// Relative spread of simplex values at convergence.
    double f_tol = 1e-9;
    std::uint64_t seed = 0;
    /// Objective value used in place of an infinite QCRB.
    double penalty = 1e9;
    /// Workers for restarts; <= 0 means default_thread_count().
    int threads = 1;
    /// QFIM evaluation inside the search. Defaults to the spectral form, which
    /// is an order of magnitude faster than the Liouville solve at N = 2, m = 3.
    QfimConfig qfim{.method = QfimMethod::spectral};

    /// Throws std::invalid_argument on starts < 1, max_evals < 1, f_tol <= 0
    /// or penalty <= 0.
    void validate() const;
};

struct OptimResult {
    std::shared_ptr<const FockBasis> basis;
    /// Optimal alpha over the full basis; zero outside the support mask.
    std::vector<double> weights;
    /// Beam-splitter amplitudes u for optimize_bs_ratios, empty otherwise.
    std::vector<double> beam_splitter;
    double qcrb = 0.0;
    double sql = 0.0;
    double advantage = 0.0;
    long evaluations = 0;
    bool converged = false;
    int start_index = 0;

    [[nodiscard]] DpnState state() const { return DpnState(basis, weights); }
};

/// alpha_i = x_i^2 / sum_j x_j^2. Throws std::invalid_argument when every
/// entry is zero.
std::vector<double> embed(std::span<const double> free_params);

/// Multi-start Nelder-Mead minimization of the QCRB over probe weights
/// supported on `mask`.
///
/// Restart 0 starts from uniform weights, restart 1 from equal weight on the
/// NOON components inside the mask (a random draw if there are none), and
/// the rest from uniform random points on the simplex drawn from cfg.seed.
/// The winner is the restart with the lowest QCRB; restarts within f_tol of
/// each other resolve to the lowest index.
OptimResult optimize_weights(int m, int photons, const LossRates& gamma, const SupportMask& mask,
                             const OptimConfig& cfg = {});

/// Same search over the output amplitudes u of a beam splitter fed with N
/// photons in mode 0 (see fock_bs_state).
OptimResult optimize_bs_ratios(int m, int photons, const LossRates& gamma, const OptimConfig& cfg = {});

nlohmann::json to_json(const OptimResult& result);

}  // namespace dpnqcrb
