#include "dpnqcrb/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

#include "dpnqcrb/benchmark.hpp"
#include "dpnqcrb/nelder_mead.hpp"
#include "dpnqcrb/parallel.hpp"

namespace dpnqcrb {

void OptimConfig::validate() const {
    if (starts < 1) {
        throw std::invalid_argument("optimizer needs at least one start");
    }
    if (max_evals < 1) {
        throw std::invalid_argument("max_evals must be positive");
    }
    if (!(f_tol > 0.0)) {
        throw std::invalid_argument("f_tol must be positive");
    }
    if (!(penalty > 0.0)) {
        throw std::invalid_argument("penalty must be positive");
    }
}

std::vector<double> embed(std::span<const double> free_params) {
    double norm2 = 0.0;
    for (double x : free_params) {
        norm2 += x * x;
    }
    if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
        throw std::invalid_argument("embedding needs a nonzero finite parameter vector");
    }
    std::vector<double> alpha(free_params.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        alpha[i] = free_params[i] * free_params[i] / norm2;
    }
    return alpha;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform point on the probability simplex, returned as square-root
// coordinates so that embed() maps it back.
std::vector<double> random_simplex_point(std::size_t dim, std::uint64_t seed, int start) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(start))));
    std::exponential_distribution<double> exp1(1.0);
    std::vector<double> x(dim);
    double sum = 0.0;
    for (double& v : x) {
        v = exp1(rng);
        sum += v;
    }
    for (double& v : x) {
        v = std::sqrt(v / sum);
    }
    return x;
}

struct StartOutcome {
    NelderMeadResult nm;
    int index = 0;
};

// Runs every start, then picks the lowest objective; ties within f_tol go to
// the lower index.
StartOutcome best_of_starts(const std::vector<std::vector<double>>& starts,
                            const std::function<double(const std::vector<double>&)>& objective,
                            const OptimConfig& cfg, long& total_evals) {
    NelderMeadOptions options;
    options.max_evals = cfg.max_evals;
    options.f_tol = cfg.f_tol;

    std::vector<NelderMeadResult> runs(starts.size());
    parallel_for(starts.size(), cfg.threads,
                 [&](std::size_t i) { runs[i] = nelder_mead(objective, starts[i], options); });

    StartOutcome best{runs.front(), 0};
    total_evals = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        total_evals += runs[i].evaluations;
        if (i > 0 && runs[i].f < best.nm.f - cfg.f_tol * std::max(std::abs(best.nm.f), 1e-300)) {
            best = {runs[i], static_cast<int>(i)};
        }
    }
    return best;
}

double finite_or_penalty(double qcrb, double penalty) {
    return std::isfinite(qcrb) ? qcrb : penalty;
}

void finish(OptimResult& result, int m, int photons, const LossRates& gamma, const OptimConfig& cfg) {
    const QfimResult q = total_qfim(result.state(), gamma, PhaseVector::zeros(m), cfg.qfim);
    result.qcrb = q.qcrb;
    result.sql = sql(m, photons, gamma);
    result.advantage = quantum_advantage(result.qcrb, result.sql);
}

void check_problem(int m, int photons, const LossRates& gamma, const OptimConfig& cfg) {
    cfg.validate();
    if (m < 1 || photons < 1) {
        throw std::invalid_argument("optimization needs at least one phase and one photon");
    }
    gamma.validate(m + 1);
    for (double g : gamma.rates) {
        if (g >= 1.0) {
            throw std::domain_error("loss rates must be below 1 for optimization");
        }
    }
}

}  // namespace

OptimResult optimize_weights(int m, int photons, const LossRates& gamma, const SupportMask& mask,
                             const OptimConfig& cfg) {
    check_problem(m, photons, gamma, cfg);
    auto basis = FockBasis::make(photons, m + 1);
    if (mask.allowed.empty()) {
        throw std::invalid_argument("support mask is empty");
    }
    for (std::size_t i : mask.allowed) {
        if (i >= basis->size()) {
            throw std::out_of_range("support mask refers past the end of the basis");
        }
    }
    const std::size_t dim = mask.size();
    const PhaseVector phi = PhaseVector::zeros(m);

    auto to_full = [&](const std::vector<double>& x) {
        const std::vector<double> alpha = embed(x);
        std::vector<double> w(basis->size(), 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            w[mask.allowed[i]] = alpha[i];
        }
        return w;
    };
    auto objective = [&](const std::vector<double>& x) {
        double norm2 = 0.0;
        for (double v : x) {
            norm2 += v * v;
        }
        if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
            return cfg.penalty;
        }
        const DpnState state(basis, to_full(x));
        return finite_or_penalty(total_qfim(state, gamma, phi, cfg.qfim).qcrb, cfg.penalty);
    };

    std::vector<std::vector<double>> starts;
    starts.emplace_back(dim, 1.0);
    if (cfg.starts > 1) {
        const SupportMask noon = noon_support(*basis);
        std::vector<double> concentrated(dim, 0.0);
        bool any = false;
        for (std::size_t i = 0; i < dim; ++i) {
            if (std::find(noon.allowed.begin(), noon.allowed.end(), mask.allowed[i]) != noon.allowed.end()) {
                concentrated[i] = 1.0;
                any = true;
            }
        }
        starts.push_back(any ? concentrated : random_simplex_point(dim, cfg.seed, 1));
    }
    for (int s = 2; s < cfg.starts; ++s) {
        starts.push_back(random_simplex_point(dim, cfg.seed, s));
    }

    OptimResult result;
    const StartOutcome best = best_of_starts(starts, objective, cfg, result.evaluations);
    result.basis = basis;
    result.weights = to_full(best.nm.x);
    result.converged = best.nm.converged;
    result.start_index = best.index;
    finish(result, m, photons, gamma, cfg);
    return result;
}

OptimResult optimize_bs_ratios(int m, int photons, const LossRates& gamma, const OptimConfig& cfg) {
    check_problem(m, photons, gamma, cfg);
    const std::size_t dim = static_cast<std::size_t>(m) + 1;
    const PhaseVector phi = PhaseVector::zeros(m);

    auto to_unit = [](const std::vector<double>& x) {
        double norm2 = 0.0;
        for (double v : x) {
            norm2 += v * v;
        }
        std::vector<double> u(x.size());
        const double norm = std::sqrt(norm2);
        for (std::size_t i = 0; i < x.size(); ++i) {
            u[i] = std::abs(x[i]) / norm;
        }
        return u;
    };
    auto objective = [&](const std::vector<double>& x) {
        double norm2 = 0.0;
        for (double v : x) {
            norm2 += v * v;
        }
        if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
            return cfg.penalty;
        }
        return finite_or_penalty(total_qfim(fock_bs_state(photons, to_unit(x)), gamma, phi, cfg.qfim).qcrb,
                                 cfg.penalty);
    };

    std::vector<std::vector<double>> starts;
    starts.emplace_back(dim, 1.0);
    if (cfg.starts > 1) {
        // Half the intensity kept in the reference mode.
        std::vector<double> reference(dim, std::sqrt(0.5 / static_cast<double>(m)));
        reference[0] = std::sqrt(0.5);
        starts.push_back(std::move(reference));
    }
    for (int s = 2; s < cfg.starts; ++s) {
        starts.push_back(random_simplex_point(dim, cfg.seed, s));
    }

    OptimResult result;
    const StartOutcome best = best_of_starts(starts, objective, cfg, result.evaluations);
    result.beam_splitter = to_unit(best.nm.x);
    const DpnState state = fock_bs_state(photons, result.beam_splitter);
    result.basis = state.basis_ptr();
    result.weights = state.weights();
    result.converged = best.nm.converged;
    result.start_index = best.index;
    finish(result, m, photons, gamma, cfg);
    return result;
}

nlohmann::json to_json(const OptimResult& result) {
    nlohmann::json weights = nlohmann::json::object();
    for (std::size_t i = 0; i < result.weights.size(); ++i) {
        weights[(*result.basis)[i].to_string()] = result.weights[i];
    }
    auto number = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(v > 0 ? "inf" : "-inf"); };
    nlohmann::json j = {{"photons", result.basis->photons()},
                        {"modes", result.basis->modes()},
                        {"weights", weights},
                        {"qcrb", number(result.qcrb)},
                        {"sql", result.sql},
                        {"advantage", number(result.advantage)},
                        {"evaluations", result.evaluations},
                        {"converged", result.converged},
                        {"start_index", result.start_index}};
    if (!result.beam_splitter.empty()) {
        j["beam_splitter"] = result.beam_splitter;
    }
    return j;
}

}  // namespace dpnqcrb
