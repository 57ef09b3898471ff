#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "dpnqcrb/fock.hpp"
#include "dpnqcrb/state.hpp"

namespace dpnqcrb {

/// One environment outcome of the loss channel: the pattern `loss_vector`
/// of photons lost per mode, its probability `weight`, and the normalized
/// conditional state on the remaining photons.
struct LossBranch {
    Composition loss_vector;
    double weight = 0.0;
    /// Basis of the N - |l| photons left in the signal modes.
    std::shared_ptr<const FockBasis> remaining;
    /// Unit-norm amplitudes over `remaining`.
    Eigen::VectorXcd amplitudes;
    /// Original occupation k = n + l for each remaining element n; the phase
    /// imprinted before loss is exp(i sum_j k_j phi_j).
    std::vector<Composition> generators;
    int photons = 0;

    [[nodiscard]] int photons_lost() const { return loss_vector.total(); }
};

/// Direct-sum block of the lossy state on the (N - L)-photon subspace.
struct Block {
    int photons_lost = 0;
    std::size_t dimension = 0;
    /// Sub-normalized; trace equals the summed weight of its branches.
    Eigen::MatrixXcd sigma;
    /// dsigma[j - 1] = d sigma / d phi_j for j = 1..m.
    std::vector<Eigen::MatrixXcd> dsigma;
};

inline constexpr double kBranchWeightCutoff = 1e-15;

/// Per-mode binomial loss amplitude
///   prod_j sqrt(C(k_j, l_j)) (1 - g_j)^((k_j - l_j)/2) g_j^(l_j/2),
/// with 0^0 = 1. Throws std::domain_error if some l_j > k_j.
double loss_amplitude(const Composition& k, const Composition& l, const LossRates& gamma);

/// All loss branches with weight above kBranchWeightCutoff, ordered by
/// photons lost and then canonically by loss vector.
std::vector<LossBranch> enumerate_branches(const DpnState& state, const LossRates& gamma,
                                           const PhaseVector& phi);

/// Groups branches by photons lost into sigma and its analytic phase
/// derivatives. `m` is the number of relative phases. Throws
/// std::invalid_argument when branches disagree on N or the mode count.
std::vector<Block> assemble_blocks(const std::vector<LossBranch>& branches, int m);

/// enumerate_branches followed by assemble_blocks.
std::vector<Block> lossy_blocks(const DpnState& state, const LossRates& gamma,
                                const PhaseVector& phi);

}  // namespace dpnqcrb
