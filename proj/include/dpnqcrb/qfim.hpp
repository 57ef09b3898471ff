#pragma once

#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "dpnqcrb/loss.hpp"
#include "dpnqcrb/state.hpp"

namespace dpnqcrb {

enum class QfimMethod { liouville, spectral };

struct QfimConfig {
    /// Mixing weight nu toward (trace sigma) I / dim applied per block.
    double regularization = 1e-10;
    /// Eigenvalue threshold for the spectral support and for declaring the
    /// total QFIM singular.
    double support_cut = 1e-12;
    QfimMethod method = QfimMethod::liouville;

    /// Throws std::invalid_argument unless 0 <= nu < 1e-3 and support_cut >= 0.
    void validate() const;
};

struct QfimResult {
    Eigen::MatrixXd matrix;
    /// trace(F^-1), or +infinity when F is singular at support_cut.
    double qcrb = 0.0;
    double min_eigenvalue = 0.0;
    /// One m x m contribution per block, in block order; sums to `matrix`.
    std::vector<Eigen::MatrixXd> per_block;
    std::vector<int> block_photons_lost;
    std::vector<double> block_traces;
};

/// 2 vec(d_j s)^H (s (x) I + I (x) s*)^-1 vec(d_k s) on the regularized
/// block s = (1 - nu) sigma + nu tr(sigma) I / dim, solved directly in
/// Liouville space. Throws std::runtime_error if the superoperator cannot
/// be factorized.
Eigen::MatrixXd block_qfim(const Block& block, const QfimConfig& cfg);

/// SLD construction from the eigendecomposition of the unregularized sigma,
/// summing over eigenpairs with lambda_a + lambda_b > support_cut.
Eigen::MatrixXd block_qfim_spectral(const Block& block, const QfimConfig& cfg);

/// Sum of block QFIMs over the lossy state, with its QCRB.
QfimResult total_qfim(const DpnState& state, const LossRates& gamma, const PhaseVector& phi,
                      const QfimConfig& cfg = {});

/// trace(F^-1) via Cholesky, or +infinity if the smallest eigenvalue is at or
/// below cfg.support_cut. Throws std::invalid_argument if F is asymmetric
/// beyond 1e-8.
double qcrb_of(const Eigen::MatrixXd& matrix, const QfimConfig& cfg = {});

/// {"matrix": [[...]], "qcrb": x, "min_eigenvalue": y,
///  "blocks": [{"photons_lost": L, "trace": t}, ...]}.
/// An infinite qcrb is written as the string "inf".
nlohmann::json to_json(const QfimResult& result);

}  // namespace dpnqcrb
