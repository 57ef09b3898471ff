#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace dpnqcrb {

struct VerifyOptions {
    std::uint64_t seed = 1;
    /// Regularization used by the Liouville route in every check.
    double regularization = 1e-10;
    int instances = 100;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    /// Largest observed deviation, in the check's own units.
    double worst = 0.0;
    double tolerance = 0.0;
    int cases = 0;
    std::string detail;
};

/// Randomized property suites over small instances (N <= 3, m <= 3):
///   oracle_equivalence        Liouville vs spectral block QFIM, 1e-7 entrywise
///   trace_preservation        sum of branch weights, 1e-10
///   phase_invariance          total QFIM at two random phase vectors, 1e-8
///   derivative_consistency    dsigma vs central differences (h = 1e-5), 1e-7
///   regularization_stability  relative QCRB change when nu is halved, 1e-6
///   sql_equivalence           optimized beam-splitter QCRB vs SQL, 1e-4 relative
/// A check that throws is reported as failed with the message in `detail`.
std::vector<CheckResult> run_property_suites(const VerifyOptions& options = {});

/// {"passed": bool, "seed": s, "regularization": nu, "checks": [...]}.
nlohmann::json to_json(const std::vector<CheckResult>& checks, const VerifyOptions& options);

}  // namespace dpnqcrb
