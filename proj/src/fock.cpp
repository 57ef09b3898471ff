#include "dpnqcrb/fock.hpp"

#include <charconv>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dpnqcrb {

Composition::Composition(std::vector<int> occupations) : occupations_(std::move(occupations)) {
    for (int k : occupations_) {
        if (k < 0) {
            throw std::invalid_argument("composition entries must be non-negative");
        }
    }
}

int Composition::total() const {
    return std::accumulate(occupations_.begin(), occupations_.end(), 0);
}

Composition Composition::operator+(const Composition& other) const {
    if (other.modes() != modes()) {
        throw std::invalid_argument("composition mode counts differ");
    }
    std::vector<int> sum(occupations_);
    for (std::size_t j = 0; j < sum.size(); ++j) {
        sum[j] += other.occupations_[j];
    }
    return Composition(std::move(sum));
}

std::string Composition::to_string() const {
    std::string out = "(";
    for (std::size_t j = 0; j < occupations_.size(); ++j) {
        if (j > 0) {
            out += ',';
        }
        out += std::to_string(occupations_[j]);
    }
    out += ')';
    return out;
}

Composition Composition::parse(std::string_view text) {
    auto fail = [&] {
        throw std::invalid_argument("malformed composition '" + std::string(text) + "'");
    };
    if (text.size() < 3 || text.front() != '(' || text.back() != ')') {
        fail();
    }
    std::vector<int> occ;
    const char* p = text.data() + 1;
    const char* end = text.data() + text.size() - 1;
    while (p < end) {
        while (p < end && *p == ' ') {
            ++p;
        }
        int value = 0;
        auto [next, ec] = std::from_chars(p, end, value);
        if (ec != std::errc{} || value < 0) {
            fail();
        }
        occ.push_back(value);
        p = next;
        while (p < end && *p == ' ') {
            ++p;
        }
        if (p < end) {
            if (*p != ',') {
                fail();
            }
            ++p;
            if (p == end) {
                fail();
            }
        }
    }
    if (occ.empty()) {
        fail();
    }
    return Composition(std::move(occ));
}

namespace {

__extension__ typedef unsigned __int128 uint128;

void fill_compositions(int remaining, std::size_t mode, std::vector<int>& current,
                       std::vector<Composition>& out) {
    if (mode + 1 == current.size()) {
        current[mode] = remaining;
        out.emplace_back(current);
        return;
    }
    for (int k = remaining; k >= 0; --k) {
        current[mode] = k;
        fill_compositions(remaining - k, mode + 1, current, out);
    }
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw std::overflow_error("multinomial coefficient exceeds 64-bit range");
    }
    return r;
}

}  // namespace

std::vector<Composition> enumerate_compositions(int total, int modes) {
    if (modes < 1) {
        throw std::invalid_argument("at least one mode is required");
    }
    if (total < 0) {
        throw std::invalid_argument("photon number must be non-negative");
    }
    std::vector<Composition> out;
    std::vector<int> current(static_cast<std::size_t>(modes), 0);
    fill_compositions(total, 0, current, out);
    return out;
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    // r_i = C(n - k + i, i) stays integral at every step; 128-bit
    // intermediates keep the product exact before division.
    uint128 r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if (r > std::numeric_limits<std::uint64_t>::max()) {
            throw std::overflow_error("binomial coefficient exceeds 64-bit range");
        }
    }
    return static_cast<std::uint64_t>(r);
}

std::uint64_t multinomial(const Composition& comp) {
    std::uint64_t result = 1;
    int running = 0;
    for (int k : comp.occupations()) {
        running += k;
        result = checked_mul(result, binomial(running, k));
    }
    return result;
}

FockBasis::FockBasis(int photons, int modes)
    : photons_(photons), modes_(modes), elements_(enumerate_compositions(photons, modes)) {
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        index_.emplace(elements_[i], i);
    }
}

std::size_t FockBasis::index_of(const Composition& comp) const {
    auto it = index_.find(comp);
    if (it == index_.end()) {
        throw std::out_of_range("composition " + comp.to_string() + " is not in the " +
                                std::to_string(photons_) + "-photon, " + std::to_string(modes_) +
                                "-mode basis");
    }
    return it->second;
}

bool FockBasis::contains(const Composition& comp) const {
    return index_.count(comp) != 0;
}

}  // namespace dpnqcrb
