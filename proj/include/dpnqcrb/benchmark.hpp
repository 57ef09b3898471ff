#pragma once

#include "dpnqcrb/optimize.hpp"
#include "dpnqcrb/state.hpp"

namespace dpnqcrb {

/// Classical benchmark: QCRB of an optimally split coherent probe with mean
/// photon number N,
///   (1 / 4N) (sqrt(m / (1 - g_0)) + sum_{j>=1} 1 / sqrt(1 - g_j))^2.
/// Throws std::domain_error if any rate reaches 1, std::invalid_argument on
/// N < 1, m < 1 or a rate vector of the wrong length.
double sql(int m, int photons, const LossRates& gamma);

/// 1 - qcrb / sql. Positive values beat the classical benchmark; an infinite
/// qcrb gives -infinity. Throws std::invalid_argument unless sql > 0.
double quantum_advantage(double qcrb, double sql_value);

/// Optimal probe restricted to the NOON components.
OptimResult noon_optimal(int m, int photons, const LossRates& gamma, const OptimConfig& cfg = {});

struct BenchmarkPoint {
    LossRates gamma;
    double sql = 0.0;
    double qcrb_dpn = 0.0;
    double qcrb_noon = 0.0;
    double r_qa_dpn = 0.0;
    double r_qa_noon = 0.0;
};

/// Optimizes both the unrestricted and the NOON-restricted probe at `gamma`.
BenchmarkPoint benchmark_point(int m, int photons, const LossRates& gamma, const OptimConfig& cfg = {});

}  // namespace dpnqcrb
