#include "dpnqcrb/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dpnqcrb {

void PhaseVector::validate(int m) const {
    if (phases.size() != static_cast<std::size_t>(m)) {
        throw std::invalid_argument("expected " + std::to_string(m) + " relative phases, got " +
                                    std::to_string(phases.size()));
    }
    for (double p : phases) {
        if (!std::isfinite(p)) {
            throw std::invalid_argument("phases must be finite");
        }
    }
}

LossRates LossRates::uniform(int modes, double gamma) {
    return {std::vector<double>(static_cast<std::size_t>(modes), gamma)};
}

LossRates LossRates::single_mode(int modes, int lossy_mode, double gamma) {
    LossRates r{std::vector<double>(static_cast<std::size_t>(modes), 0.0)};
    r.rates.at(static_cast<std::size_t>(lossy_mode)) = gamma;
    return r;
}

void LossRates::validate(int modes) const {
    if (rates.size() != static_cast<std::size_t>(modes)) {
        throw std::invalid_argument("expected " + std::to_string(modes) + " loss rates, got " +
                                    std::to_string(rates.size()));
    }
    for (double g : rates) {
        if (!(g >= 0.0 && g <= 1.0)) {
            throw std::invalid_argument("loss rates must lie in [0, 1]");
        }
    }
}

SupportMask SupportMask::full(const FockBasis& basis) {
    SupportMask mask;
    mask.allowed.resize(basis.size());
    std::iota(mask.allowed.begin(), mask.allowed.end(), std::size_t{0});
    return mask;
}

DpnState::DpnState(std::shared_ptr<const FockBasis> basis, std::vector<double> weights)
    : basis_(std::move(basis)), weights_(std::move(weights)) {
    if (!basis_) {
        throw std::invalid_argument("state requires a basis");
    }
    if (weights_.size() != basis_->size()) {
        throw std::invalid_argument("weight vector has " + std::to_string(weights_.size()) +
                                    " entries, basis has " + std::to_string(basis_->size()));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i])) {
            throw std::invalid_argument("negative or non-finite weight on " +
                                        (*basis_)[i].to_string());
        }
        sum += weights_[i];
    }
    if (std::abs(sum - 1.0) > kNormalizationTolerance) {
        throw std::invalid_argument("weights sum to " + std::to_string(sum) + ", expected 1");
    }
    for (double& w : weights_) {
        w /= sum;
    }
}

DpnState new_dpn(std::shared_ptr<const FockBasis> basis, std::vector<double> weights) {
    return DpnState(std::move(basis), std::move(weights));
}

SupportMask noon_support(const FockBasis& basis) {
    SupportMask mask;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto& occ = basis[i].occupations();
        if (std::count(occ.begin(), occ.end(), 0) == static_cast<long>(occ.size()) - 1 ||
            basis.photons() == 0) {
            mask.allowed.push_back(i);
        }
    }
    return mask;
}

DpnState fock_bs_state(int photons, const std::vector<double>& u) {
    if (u.empty()) {
        throw std::invalid_argument("beam-splitter amplitudes must cover at least one mode");
    }
    double norm2 = 0.0;
    for (double x : u) {
        if (!(x >= 0.0)) {
            throw std::invalid_argument("beam-splitter amplitudes must be non-negative");
        }
        norm2 += x * x;
    }
    if (std::abs(norm2 - 1.0) > kNormalizationTolerance) {
        throw std::invalid_argument("beam-splitter amplitudes must have unit norm");
    }
    auto basis = FockBasis::make(photons, static_cast<int>(u.size()));
    std::vector<double> weights(basis->size());
    for (std::size_t i = 0; i < basis->size(); ++i) {
        const Composition& k = (*basis)[i];
        double w = static_cast<double>(multinomial(k));
        for (std::size_t j = 0; j < u.size(); ++j) {
            w *= std::pow(u[j] * u[j] / norm2, k[j]);
        }
        weights[i] = w;
    }
    // Multinomial theorem: the sum is (sum u_j^2)^N = 1 up to rounding.
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (double& w : weights) {
        w /= sum;
    }
    return DpnState(std::move(basis), std::move(weights));
}

std::vector<double> mode_energies(const DpnState& state) {
    const auto& basis = state.basis();
    std::vector<double> energy(static_cast<std::size_t>(basis.modes()), 0.0);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = 0; j < energy.size(); ++j) {
            energy[j] += state.weights()[i] * basis[i][j];
        }
    }
    return energy;
}

DpnState restrict_to(const DpnState& state, const SupportMask& mask) {
    std::vector<double> w(state.weights().size(), 0.0);
    double sum = 0.0;
    for (std::size_t i : mask.allowed) {
        w.at(i) = state.weights()[i];
        sum += w[i];
    }
    if (sum <= 0.0) {
        throw std::invalid_argument("state has no weight on the support mask");
    }
    for (double& x : w) {
        x /= sum;
    }
    return DpnState(state.basis_ptr(), std::move(w));
}

nlohmann::json to_json(const DpnState& state) {
    nlohmann::json weights = nlohmann::json::object();
    const auto& basis = state.basis();
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (state.weights()[i] != 0.0) {
            weights[basis[i].to_string()] = state.weights()[i];
        }
    }
    return {{"photons", state.photons()}, {"modes", state.modes()}, {"weights", weights}};
}

DpnState state_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw std::invalid_argument("state must be a JSON object");
    }
    for (const char* field : {"photons", "modes", "weights"}) {
        if (!j.contains(field)) {
            throw std::invalid_argument(std::string("state is missing field '") + field + "'");
        }
    }
    if (!j["photons"].is_number_integer() || j["photons"].get<int>() < 0) {
        throw std::invalid_argument("field 'photons' must be a non-negative integer");
    }
    if (!j["modes"].is_number_integer() || j["modes"].get<int>() < 1) {
        throw std::invalid_argument("field 'modes' must be a positive integer");
    }
    if (!j["weights"].is_object()) {
        throw std::invalid_argument("field 'weights' must be an object keyed by composition");
    }
    auto basis = FockBasis::make(j["photons"].get<int>(), j["modes"].get<int>());
    std::vector<double> weights(basis->size(), 0.0);
    for (const auto& [key, value] : j["weights"].items()) {
        if (!value.is_number()) {
            throw std::invalid_argument("weight for " + key + " is not a number");
        }
        weights[basis->index_of(Composition::parse(key))] = value.get<double>();
    }
    return DpnState(std::move(basis), std::move(weights));
}

}  // namespace dpnqcrb
