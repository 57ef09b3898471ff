#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace dpnqcrb {

/// Occupation pattern of photons over modes, mode 0 first.
///
/// Used both for Fock basis labels k = (k_0, ..., k_m) and for loss
/// patterns l (photons lost per mode).
class Composition {
public:
    Composition() = default;
    explicit Composition(std::vector<int> occupations);

    [[nodiscard]] std::size_t modes() const { return occupations_.size(); }
    [[nodiscard]] int total() const;
    [[nodiscard]] int operator[](std::size_t j) const { return occupations_[j]; }
    [[nodiscard]] const std::vector<int>& occupations() const { return occupations_; }

    /// Componentwise sum; mode counts must agree.
    [[nodiscard]] Composition operator+(const Composition& other) const;

    /// "(k0,k1,...,km)"
    [[nodiscard]] std::string to_string() const;
    /// Inverse of to_string. Throws std::invalid_argument on malformed text.
    static Composition parse(std::string_view text);

    friend auto operator<=>(const Composition&, const Composition&) = default;
    friend bool operator==(const Composition&, const Composition&) = default;

private:
    std::vector<int> occupations_;
};

/// All weak compositions of `total` into `modes` parts, in lexicographic
/// descending order (mode 0 most significant). Throws std::invalid_argument
/// if modes < 1 or total < 0.
std::vector<Composition> enumerate_compositions(int total, int modes);

/// N! / (k_0! ... k_m!) in exact integer arithmetic. Throws
/// std::overflow_error when the result does not fit in 64 bits.
std::uint64_t multinomial(const Composition& comp);

/// Binomial coefficient with overflow detection.
std::uint64_t binomial(int n, int k);

/// Materialized Fock basis of `photons` photons over `modes` modes.
class FockBasis {
public:
    FockBasis(int photons, int modes);

    static std::shared_ptr<const FockBasis> make(int photons, int modes) {
        return std::make_shared<const FockBasis>(photons, modes);
    }

    [[nodiscard]] int photons() const { return photons_; }
    [[nodiscard]] int modes() const { return modes_; }
    [[nodiscard]] std::size_t size() const { return elements_.size(); }
    [[nodiscard]] const std::vector<Composition>& elements() const { return elements_; }
    [[nodiscard]] const Composition& operator[](std::size_t i) const { return elements_[i]; }

    /// Position of `comp` in the basis. Throws std::out_of_range when `comp`
    /// has the wrong mode count or photon total.
    [[nodiscard]] std::size_t index_of(const Composition& comp) const;
    [[nodiscard]] bool contains(const Composition& comp) const;

private:
    int photons_;
    int modes_;
    std::vector<Composition> elements_;
    std::map<Composition, std::size_t> index_;
};

}  // namespace dpnqcrb
