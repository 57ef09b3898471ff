#include "dpnqcrb/qfim.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace dpnqcrb {

void QfimConfig::validate() const {
    if (!(regularization >= 0.0 && regularization < 1e-3)) {
        throw std::invalid_argument("regularization must lie in [0, 1e-3)");
    }
    if (!(support_cut >= 0.0)) {
        throw std::invalid_argument("support_cut must be non-negative");
    }
}

namespace {

// Row-major vectorization: vec(X)[i * d + j] = X(i, j). With this convention
// (A (x) B) vec(X) = vec(A X B^T), so (s (x) I + I (x) s*) vec(X) = vec(s X + X s).
Eigen::VectorXcd vec_rows(const Eigen::MatrixXcd& x) {
    const Eigen::Index d = x.rows();
    Eigen::VectorXcd v(d * d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            v[i * d + j] = x(i, j);
        }
    }
    return v;
}

Eigen::MatrixXcd liouville_superoperator(const Eigen::MatrixXcd& s) {
    const Eigen::Index d = s.rows();
    Eigen::MatrixXcd super = Eigen::MatrixXcd::Zero(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            const Eigen::Index row = i * d + j;
            for (Eigen::Index k = 0; k < d; ++k) {
                super(row, k * d + j) += s(i, k);       // s (x) I
                super(row, i * d + k) += std::conj(s(j, k));  // I (x) s*
            }
        }
    }
    return super;
}

}  // namespace

Eigen::MatrixXd block_qfim(const Block& block, const QfimConfig& cfg) {
    const auto m = static_cast<Eigen::Index>(block.dsigma.size());
    const auto d = static_cast<Eigen::Index>(block.dimension);
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(m, m);
    const double trace = block.sigma.trace().real();
    if (d == 0 || m == 0 || !(trace > 0.0)) {
        return f;
    }
    const double nu = cfg.regularization;
    Eigen::MatrixXcd reg = (1.0 - nu) * block.sigma;
    reg.diagonal().array() += nu * trace / static_cast<double>(d);

    Eigen::MatrixXcd rhs(d * d, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        rhs.col(j) = vec_rows(block.dsigma[static_cast<std::size_t>(j)]);
    }
    if (rhs.cwiseAbs().maxCoeff() == 0.0) {
        return f;
    }

    // Hermitian positive definite whenever reg is.
    Eigen::LLT<Eigen::MatrixXcd> llt(liouville_superoperator(reg));
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("Liouville superoperator is not invertible; increase the regularization");
    }
    const Eigen::MatrixXcd solved = llt.solve(rhs);
    const Eigen::MatrixXcd gram = rhs.adjoint() * solved;
    f = 2.0 * gram.real();
    return 0.5 * (f + f.transpose());
}

Eigen::MatrixXd block_qfim_spectral(const Block& block, const QfimConfig& cfg) {
    const auto m = static_cast<Eigen::Index>(block.dsigma.size());
    const auto d = static_cast<Eigen::Index>(block.dimension);
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(m, m);
    if (d == 0 || m == 0) {
        return f;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(block.sigma);
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    const Eigen::MatrixXcd& vecs = eig.eigenvectors();

    std::vector<Eigen::MatrixXcd> rotated;
    rotated.reserve(static_cast<std::size_t>(m));
    for (const auto& ds : block.dsigma) {
        rotated.push_back(vecs.adjoint() * ds * vecs);
    }
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) {
            const double denom = lambda[a] + lambda[b];
            if (!(denom > cfg.support_cut)) {
                continue;
            }
            for (Eigen::Index j = 0; j < m; ++j) {
                const auto& rj = rotated[static_cast<std::size_t>(j)];
                for (Eigen::Index k = j; k < m; ++k) {
                    const auto& rk = rotated[static_cast<std::size_t>(k)];
                    f(j, k) += 2.0 * std::real(rj(a, b) * rk(b, a)) / denom;
                }
            }
        }
    }
    for (Eigen::Index j = 0; j < m; ++j) {
        for (Eigen::Index k = 0; k < j; ++k) {
            f(j, k) = f(k, j);
        }
    }
    return f;
}

double qcrb_of(const Eigen::MatrixXd& matrix, const QfimConfig& cfg) {
    if (matrix.rows() != matrix.cols()) {
        throw std::invalid_argument("QFIM must be square");
    }
    if (matrix.size() == 0) {
        return 0.0;
    }
    if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-8) {
        throw std::invalid_argument("QFIM is not symmetric");
    }
    const Eigen::MatrixXd sym = 0.5 * (matrix + matrix.transpose());
    const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym, Eigen::EigenvaluesOnly)
                               .eigenvalues()
                               .minCoeff();
    if (!(min_eig > cfg.support_cut)) {
        return std::numeric_limits<double>::infinity();
    }
    Eigen::LLT<Eigen::MatrixXd> llt(sym);
    if (llt.info() != Eigen::Success) {
        return std::numeric_limits<double>::infinity();
    }
    return llt.solve(Eigen::MatrixXd::Identity(sym.rows(), sym.cols())).trace();
}

QfimResult total_qfim(const DpnState& state, const LossRates& gamma, const PhaseVector& phi,
                      const QfimConfig& cfg) {
    const int m = state.phases();
    QfimResult result;
    result.matrix = Eigen::MatrixXd::Zero(m, m);
    for (const Block& block : lossy_blocks(state, gamma, phi)) {
        Eigen::MatrixXd contribution = cfg.method == QfimMethod::spectral
                                           ? block_qfim_spectral(block, cfg)
                                           : block_qfim(block, cfg);
        result.matrix += contribution;
        result.per_block.push_back(std::move(contribution));
        result.block_photons_lost.push_back(block.photons_lost);
        result.block_traces.push_back(block.sigma.trace().real());
    }
    if (m == 0) {
        result.min_eigenvalue = 0.0;
        result.qcrb = 0.0;
        return result;
    }
    result.min_eigenvalue =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(result.matrix, Eigen::EigenvaluesOnly)
            .eigenvalues()
            .minCoeff();
    result.qcrb = qcrb_of(result.matrix, cfg);
    return result;
}

nlohmann::json to_json(const QfimResult& result) {
    nlohmann::json matrix = nlohmann::json::array();
    for (Eigen::Index i = 0; i < result.matrix.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < result.matrix.cols(); ++j) {
            row.push_back(result.matrix(i, j));
        }
        matrix.push_back(row);
    }
    nlohmann::json blocks = nlohmann::json::array();
    for (std::size_t b = 0; b < result.block_traces.size(); ++b) {
        blocks.push_back({{"photons_lost", result.block_photons_lost[b]}, {"trace", result.block_traces[b]}});
    }
    nlohmann::json qcrb = std::isfinite(result.qcrb) ? nlohmann::json(result.qcrb) : nlohmann::json("inf");
    return {{"matrix", matrix}, {"qcrb", qcrb}, {"min_eigenvalue", result.min_eigenvalue}, {"blocks", blocks}};
}

}  // namespace dpnqcrb
