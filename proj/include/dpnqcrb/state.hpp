#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include <nlohmann/json.hpp>

#include "dpnqcrb/fock.hpp"

namespace dpnqcrb {

/// Relative phases phi_1..phi_m with respect to mode 0 (radians).
struct PhaseVector {
    std::vector<double> phases;

    static PhaseVector zeros(int m) { return {std::vector<double>(static_cast<std::size_t>(m), 0.0)}; }
    [[nodiscard]] std::size_t size() const { return phases.size(); }
    /// Throws std::invalid_argument on non-finite entries or a size other than m.
    void validate(int m) const;
};

/// Per-mode photon loss rates gamma_0..gamma_m, each in [0, 1].
struct LossRates {
    std::vector<double> rates;

    static LossRates uniform(int modes, double gamma);
    /// Loss `gamma` on a single mode, lossless elsewhere.
    static LossRates single_mode(int modes, int lossy_mode, double gamma);

    [[nodiscard]] std::size_t size() const { return rates.size(); }
    [[nodiscard]] double operator[](std::size_t j) const { return rates[j]; }
    /// Throws std::invalid_argument when a rate lies outside [0, 1] or the
    /// length is not `modes`.
    void validate(int modes) const;
};

/// Basis positions permitted to carry nonzero weight, sorted ascending.
struct SupportMask {
    std::vector<std::size_t> allowed;

    static SupportMask full(const FockBasis& basis);
    [[nodiscard]] std::size_t size() const { return allowed.size(); }
};

/// Definite-photon-number probe: non-negative weights alpha_k over the Fock
/// basis, amplitudes sqrt(alpha_k) with zero prior phases.
class DpnState {
public:
    /// Validates weights. A sum within 1e-9 of one is renormalized; anything
    /// further off, a negative entry, or a length mismatch throws
    /// std::invalid_argument.
    DpnState(std::shared_ptr<const FockBasis> basis, std::vector<double> weights);

    [[nodiscard]] const FockBasis& basis() const { return *basis_; }
    [[nodiscard]] const std::shared_ptr<const FockBasis>& basis_ptr() const { return basis_; }
    [[nodiscard]] const std::vector<double>& weights() const { return weights_; }
    [[nodiscard]] int photons() const { return basis_->photons(); }
    [[nodiscard]] int modes() const { return basis_->modes(); }
    /// Number of estimated relative phases, modes() - 1.
    [[nodiscard]] int phases() const { return basis_->modes() - 1; }

    [[nodiscard]] double weight(const Composition& k) const { return weights_[basis_->index_of(k)]; }

private:
    std::shared_ptr<const FockBasis> basis_;
    std::vector<double> weights_;
};

inline constexpr double kNormalizationTolerance = 1e-9;

/// Same as constructing a DpnState directly.
DpnState new_dpn(std::shared_ptr<const FockBasis> basis, std::vector<double> weights);

/// The m+1 compositions holding all photons in one mode.
SupportMask noon_support(const FockBasis& basis);

/// N photons in mode 0 sent through a beam splitter with real output
/// amplitudes u: alpha_k = multinomial(k) * prod_j u_j^(2 k_j).
/// `u` is renormalized if its squared norm is within 1e-9 of one.
DpnState fock_bs_state(int photons, const std::vector<double>& u);

/// Mean photon number per mode, sum_k alpha_k k_j.
std::vector<double> mode_energies(const DpnState& state);

/// Weights restricted to `mask` and renormalized. Throws if nothing survives.
DpnState restrict_to(const DpnState& state, const SupportMask& mask);

/// {"photons": N, "modes": m+1, "weights": {"(k0,...,km)": value, ...}};
/// zero weights are omitted.
nlohmann::json to_json(const DpnState& state);
/// Parses the format written by to_json. Missing keys mean zero weight.
DpnState state_from_json(const nlohmann::json& j);

}  // namespace dpnqcrb
