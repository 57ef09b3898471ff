#include "dpnqcrb/benchmark.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dpnqcrb {

double sql(int m, int photons, const LossRates& gamma) {
    if (m < 1 || photons < 1) {
        throw std::invalid_argument("SQL needs at least one phase and one photon");
    }
    gamma.validate(m + 1);
    for (double g : gamma.rates) {
        if (g >= 1.0) {
            throw std::domain_error("SQL diverges at a loss rate of 1");
        }
    }
    double s = std::sqrt(static_cast<double>(m) / (1.0 - gamma[0]));
    for (int j = 1; j <= m; ++j) {
        s += 1.0 / std::sqrt(1.0 - gamma[static_cast<std::size_t>(j)]);
    }
    return s * s / (4.0 * photons);
}

double quantum_advantage(double qcrb, double sql_value) {
    if (!(sql_value > 0.0)) {
        throw std::invalid_argument("SQL must be positive");
    }
    if (std::isinf(qcrb)) {
        return -std::numeric_limits<double>::infinity();
    }
    return 1.0 - qcrb / sql_value;
}

OptimResult noon_optimal(int m, int photons, const LossRates& gamma, const OptimConfig& cfg) {
    const FockBasis basis(photons, m + 1);
    return optimize_weights(m, photons, gamma, noon_support(basis), cfg);
}

BenchmarkPoint benchmark_point(int m, int photons, const LossRates& gamma, const OptimConfig& cfg) {
    BenchmarkPoint p;
    p.gamma = gamma;
    p.sql = sql(m, photons, gamma);
    const FockBasis basis(photons, m + 1);
    p.qcrb_dpn = optimize_weights(m, photons, gamma, SupportMask::full(basis), cfg).qcrb;
    p.qcrb_noon = noon_optimal(m, photons, gamma, cfg).qcrb;
    p.r_qa_dpn = quantum_advantage(p.qcrb_dpn, p.sql);
    p.r_qa_noon = quantum_advantage(p.qcrb_noon, p.sql);
    return p;
}

}  // namespace dpnqcrb
