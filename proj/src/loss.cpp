#include "dpnqcrb/loss.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace dpnqcrb {

double loss_amplitude(const Composition& k, const Composition& l, const LossRates& gamma) {
    if (k.modes() != l.modes() || gamma.size() != k.modes()) {
        throw std::invalid_argument("loss amplitude arguments disagree on mode count");
    }
    double p = 1.0;
    for (std::size_t j = 0; j < k.modes(); ++j) {
        if (l[j] > k[j]) {
            throw std::domain_error("cannot lose " + std::to_string(l[j]) + " photons from a mode holding " +
                                    std::to_string(k[j]));
        }
        const int kept = k[j] - l[j];
        p *= std::sqrt(static_cast<double>(binomial(k[j], l[j]))) *
             std::pow(1.0 - gamma[j], 0.5 * kept) * std::pow(gamma[j], 0.5 * l[j]);
    }
    return p;
}

std::vector<LossBranch> enumerate_branches(const DpnState& state, const LossRates& gamma,
                                           const PhaseVector& phi) {
    const int photons = state.photons();
    const int modes = state.modes();
    gamma.validate(modes);
    phi.validate(modes - 1);
    const FockBasis& basis = state.basis();

    std::vector<LossBranch> branches;
    for (int lost = 0; lost <= photons; ++lost) {
        auto remaining = FockBasis::make(photons - lost, modes);
        for (const Composition& l : enumerate_compositions(lost, modes)) {
            LossBranch branch;
            branch.loss_vector = l;
            branch.remaining = remaining;
            branch.photons = photons;
            branch.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(remaining->size()));
            branch.generators.reserve(remaining->size());
            for (std::size_t r = 0; r < remaining->size(); ++r) {
                Composition k = (*remaining)[r] + l;
                const double alpha = state.weights()[basis.index_of(k)];
                if (alpha > 0.0) {
                    double phase = 0.0;
                    for (int j = 1; j < modes; ++j) {
                        phase += k[static_cast<std::size_t>(j)] * phi.phases[static_cast<std::size_t>(j - 1)];
                    }
                    branch.amplitudes[static_cast<Eigen::Index>(r)] =
                        std::polar(std::sqrt(alpha) * loss_amplitude(k, l, gamma), phase);
                }
                branch.generators.push_back(std::move(k));
            }
            branch.weight = branch.amplitudes.squaredNorm();
            if (branch.weight > kBranchWeightCutoff) {
                branch.amplitudes /= std::sqrt(branch.weight);
                branches.push_back(std::move(branch));
            }
        }
    }
    return branches;
}

std::vector<Block> assemble_blocks(const std::vector<LossBranch>& branches, int m) {
    if (branches.empty()) {
        return {};
    }
    const int photons = branches.front().photons;
    std::map<int, Block> by_lost;
    for (const LossBranch& b : branches) {
        if (b.photons != photons || b.loss_vector.modes() != static_cast<std::size_t>(m + 1) ||
            !b.remaining || b.remaining->modes() != m + 1 ||
            b.remaining->photons() != photons - b.photons_lost()) {
            throw std::invalid_argument("branches disagree on photon number or mode count");
        }
        const auto dim = static_cast<Eigen::Index>(b.remaining->size());
        auto [it, inserted] = by_lost.try_emplace(b.photons_lost());
        Block& block = it->second;
        if (inserted) {
            block.photons_lost = b.photons_lost();
            block.dimension = b.remaining->size();
            block.sigma = Eigen::MatrixXcd::Zero(dim, dim);
            block.dsigma.assign(static_cast<std::size_t>(m), Eigen::MatrixXcd::Zero(dim, dim));
        }
        const Eigen::VectorXcd& v = b.amplitudes;
        block.sigma.noalias() += b.weight * v * v.adjoint();
        for (int j = 1; j <= m; ++j) {
            // d/dphi_j of the amplitude on n is i k_j times itself, k = n + l.
            Eigen::VectorXcd gv(v.size());
            for (Eigen::Index r = 0; r < v.size(); ++r) {
                const double kj = b.generators[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
                gv[r] = std::complex<double>(0.0, kj) * v[r];
            }
            Eigen::MatrixXcd outer = gv * v.adjoint();
            block.dsigma[static_cast<std::size_t>(j - 1)].noalias() +=
                b.weight * (outer + outer.adjoint());
        }
    }
    std::vector<Block> blocks;
    blocks.reserve(by_lost.size());
    for (auto& [lost, block] : by_lost) {
        blocks.push_back(std::move(block));
    }
    return blocks;
}

std::vector<Block> lossy_blocks(const DpnState& state, const LossRates& gamma,
                                const PhaseVector& phi) {
    return assemble_blocks(enumerate_branches(state, gamma, phi), state.phases());
}

}  // namespace dpnqcrb
