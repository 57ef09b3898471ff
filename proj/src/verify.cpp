#include "dpnqcrb/verify.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "dpnqcrb/benchmark.hpp"
#include "dpnqcrb/loss.hpp"
#include "dpnqcrb/optimize.hpp"
#include "dpnqcrb/qfim.hpp"

namespace dpnqcrb {

namespace {

struct Instance {
    DpnState state;
    LossRates gamma;
    PhaseVector phi;
};

class InstanceGenerator {
public:
    explicit InstanceGenerator(std::uint64_t seed) : rng_(seed) {}

    // Sparse weights (some components exactly zero) exercise rank-deficient
    // blocks; dense ones keep the total QFIM invertible.
    Instance next(bool dense) {
        std::uniform_int_distribution<int> photons(1, 3);
        std::uniform_int_distribution<int> phases(1, 3);
        const int n = photons(rng_);
        const int m = phases(rng_);
        auto basis = FockBasis::make(n, m + 1);
        std::exponential_distribution<double> exp1(1.0);
        std::bernoulli_distribution drop(dense ? 0.0 : 0.3);
        std::vector<double> w(basis->size());
        double sum = 0.0;
        for (double& x : w) {
            x = drop(rng_) ? 0.0 : exp1(rng_);
            sum += x;
        }
        if (sum == 0.0) {
            w.front() = sum = 1.0;
        }
        for (double& x : w) {
            x /= sum;
        }
        return {DpnState(basis, std::move(w)), random_rates(m + 1), random_phases(m)};
    }

    LossRates random_rates(int modes) {
        std::uniform_real_distribution<double> g(0.0, 0.9);
        LossRates r;
        for (int j = 0; j < modes; ++j) {
            r.rates.push_back(g(rng_));
        }
        return r;
    }

    PhaseVector random_phases(int m) {
        std::uniform_real_distribution<double> p(-std::numbers::pi, std::numbers::pi);
        PhaseVector phi;
        for (int j = 0; j < m; ++j) {
            phi.phases.push_back(p(rng_));
        }
        return phi;
    }

private:
    std::mt19937_64 rng_;
};

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

CheckResult run_check(const std::string& name, double tolerance,
                      const std::function<void(CheckResult&)>& body) {
    CheckResult result;
    result.name = name;
    result.tolerance = tolerance;
    try {
        body(result);
        result.passed = result.worst <= tolerance;
    } catch (const std::exception& e) {
        result.passed = false;
        result.detail = e.what();
    }
    return result;
}

}  // namespace

std::vector<CheckResult> run_property_suites(const VerifyOptions& options) {
    QfimConfig liouville;
    liouville.regularization = options.regularization;
    QfimConfig spectral = liouville;
    spectral.method = QfimMethod::spectral;

    std::vector<CheckResult> checks;

    checks.push_back(run_check("oracle_equivalence", 1e-7, [&](CheckResult& r) {
        InstanceGenerator gen(options.seed);
        for (int i = 0; i < options.instances; ++i) {
            const Instance inst = gen.next(false);
            for (const Block& block : lossy_blocks(inst.state, inst.gamma, inst.phi)) {
                r.worst = std::max(r.worst, max_abs_diff(block_qfim(block, liouville),
                                                         block_qfim_spectral(block, spectral)));
                ++r.cases;
            }
        }
    }));

    checks.push_back(run_check("trace_preservation", 1e-10, [&](CheckResult& r) {
        InstanceGenerator gen(options.seed + 1);
        for (int i = 0; i < options.instances; ++i) {
            const Instance inst = gen.next(false);
            double total = 0.0;
            for (const LossBranch& b : enumerate_branches(inst.state, inst.gamma, inst.phi)) {
                total += b.weight;
            }
            r.worst = std::max(r.worst, std::abs(total - 1.0));
            ++r.cases;
        }
    }));

    checks.push_back(run_check("phase_invariance", 1e-8, [&](CheckResult& r) {
        InstanceGenerator gen(options.seed + 2);
        for (int i = 0; i < options.instances; ++i) {
            const Instance inst = gen.next(false);
            const PhaseVector other = gen.random_phases(inst.state.phases());
            const auto a = total_qfim(inst.state, inst.gamma, inst.phi, liouville);
            const auto b = total_qfim(inst.state, inst.gamma, other, liouville);
            r.worst = std::max(r.worst, max_abs_diff(a.matrix, b.matrix));
            ++r.cases;
        }
    }));

    checks.push_back(run_check("derivative_consistency", 1e-7, [&](CheckResult& r) {
        InstanceGenerator gen(options.seed + 3);
        constexpr double h = 1e-5;
        for (int i = 0; i < options.instances; ++i) {
            const Instance inst = gen.next(false);
            const auto blocks = lossy_blocks(inst.state, inst.gamma, inst.phi);
            for (std::size_t j = 0; j < inst.phi.size(); ++j) {
                PhaseVector plus = inst.phi;
                PhaseVector minus = inst.phi;
                plus.phases[j] += h;
                minus.phases[j] -= h;
                const auto bp = lossy_blocks(inst.state, inst.gamma, plus);
                const auto bm = lossy_blocks(inst.state, inst.gamma, minus);
                for (std::size_t b = 0; b < blocks.size(); ++b) {
                    const Eigen::MatrixXcd fd = (bp[b].sigma - bm[b].sigma) / (2.0 * h);
                    r.worst = std::max(r.worst, max_abs_diff(fd, blocks[b].dsigma[j]));
                    ++r.cases;
                }
            }
        }
    }));

    checks.push_back(run_check("regularization_stability", 1e-6, [&](CheckResult& r) {
        InstanceGenerator gen(options.seed + 4);
        QfimConfig halved = liouville;
        halved.regularization = 0.5 * liouville.regularization;
        for (int i = 0; i < options.instances; ++i) {
            const Instance inst = gen.next(true);
            const double a = total_qfim(inst.state, inst.gamma, inst.phi, liouville).qcrb;
            const double b = total_qfim(inst.state, inst.gamma, inst.phi, halved).qcrb;
            if (std::isinf(a) && std::isinf(b)) {
                continue;
            }
            r.worst = std::max(r.worst, std::abs(a - b) / std::abs(b));
            ++r.cases;
        }
    }));

    checks.push_back(run_check("sql_equivalence", 1e-4, [&](CheckResult& r) {
        InstanceGenerator gen(options.seed + 5);
        OptimConfig cfg;
        cfg.starts = 4;
        cfg.seed = options.seed;
        cfg.qfim.regularization = options.regularization;
        for (auto [m, n] : {std::pair{1, 1}, {1, 2}, {3, 1}, {3, 2}}) {
            std::vector<LossRates> grid = {LossRates::uniform(m + 1, 0.0), LossRates::uniform(m + 1, 0.5),
                                           gen.random_rates(m + 1)};
            for (const LossRates& gamma : grid) {
                const OptimResult opt = optimize_bs_ratios(m, n, gamma, cfg);
                const double reference = sql(m, n, gamma);
                r.worst = std::max(r.worst, std::abs(opt.qcrb - reference) / reference);
                ++r.cases;
            }
        }
    }));

    return checks;
}

nlohmann::json to_json(const std::vector<CheckResult>& checks, const VerifyOptions& options) {
    bool all = true;
    nlohmann::json list = nlohmann::json::array();
    for (const CheckResult& c : checks) {
        all = all && c.passed;
        nlohmann::json entry = {{"name", c.name},
                                {"passed", c.passed},
                                {"worst", c.worst},
                                {"tolerance", c.tolerance},
                                {"cases", c.cases}};
        if (!c.detail.empty()) {
            entry["detail"] = c.detail;
        }
        list.push_back(entry);
    }
    return {{"passed", all},
            {"seed", options.seed},
            {"regularization", options.regularization},
            {"instances", options.instances},
            {"checks", list}};
}

}  // namespace dpnqcrb
