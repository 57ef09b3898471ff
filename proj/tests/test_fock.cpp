#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "dpnqcrb/fock.hpp"
#include "test_support.hpp"

using namespace dpnqcrb;

TEST_CASE("two photons in two modes enumerate in descending order") {
    const auto comps = enumerate_compositions(2, 2);
    REQUIRE(comps.size() == 3);
    CHECK(comps[0] == Composition({2, 0}));
    CHECK(comps[1] == Composition({1, 1}));
    CHECK(comps[2] == Composition({0, 2}));
}

TEST_CASE("four modes, two photons: NOON components lead") {
    FockBasis basis(2, 4);
    REQUIRE(basis.size() == 10);
    CHECK(basis[0].to_string() == "(2,0,0,0)");
    CHECK(basis[1].to_string() == "(1,1,0,0)");
    CHECK(basis[9].to_string() == "(0,0,0,2)");
}

TEST_CASE("enumeration matches brute force for N <= 6, modes <= 6") {
    for (int n = 0; n <= 6; ++n) {
        for (int modes = 1; modes <= 6; ++modes) {
            FockBasis basis(n, modes);
            const auto expected = test::brute_force_compositions(n, modes);
            REQUIRE(basis.size() == expected.size());
            CHECK(basis.size() == binomial(n + modes - 1, modes - 1));
            std::set<Composition> seen;
            for (std::size_t i = 0; i < basis.size(); ++i) {
                CHECK(basis[i].occupations() == expected[i]);
                CHECK(basis.index_of(basis[i]) == i);
                seen.insert(basis[i]);
            }
            CHECK(seen.size() == basis.size());
        }
    }
}

TEST_CASE("index_of rejects compositions from another basis") {
    FockBasis basis(2, 3);
    CHECK(basis.index_of(Composition({2, 0, 0})) == 0);
    CHECK_THROWS_AS((void)basis.index_of(Composition({1, 0, 0})), std::out_of_range);
    CHECK_THROWS_AS((void)basis.index_of(Composition({1, 1})), std::out_of_range);
    CHECK_FALSE(basis.contains(Composition({3, 0, 0})));
}

TEST_CASE("multinomial and binomial values") {
    CHECK(multinomial(Composition({2, 0, 0, 0})) == 1);
    CHECK(multinomial(Composition({1, 1, 0, 0})) == 2);
    CHECK(multinomial(Composition({2, 1, 1})) == 12);
    CHECK(multinomial(Composition({0, 0})) == 1);
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(5, 0) == 1);
    CHECK(binomial(3, 4) == 0);
    CHECK(binomial(60, 30) == 118264581564861424ULL);
    CHECK_THROWS_AS((void)binomial(200, 100), std::overflow_error);
    CHECK_THROWS_AS((void)multinomial(Composition({40, 40, 40})), std::overflow_error);
}

TEST_CASE("multinomial theorem holds to 1e-12") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + trial % 6;
        const int modes = 2 + trial % 4;
        std::vector<double> u(static_cast<std::size_t>(modes));
        double norm2 = 0.0;
        for (double& x : u) {
            x = uni(rng);
            norm2 += x * x;
        }
        double sum = 0.0;
        for (const Composition& k : enumerate_compositions(n, modes)) {
            double term = static_cast<double>(multinomial(k));
            for (int j = 0; j < modes; ++j) {
                term *= std::pow(u[static_cast<std::size_t>(j)], 2 * k[static_cast<std::size_t>(j)]);
            }
            sum += term;
        }
        CHECK(std::abs(sum - std::pow(norm2, n)) <= 1e-12 * std::max(1.0, std::pow(norm2, n)));
    }
}

TEST_CASE("composition text round trip and errors") {
    const Composition c({3, 0, 12});
    CHECK(c.to_string() == "(3,0,12)");
    CHECK(Composition::parse("(3,0,12)") == c);
    CHECK(Composition::parse("( 1 , 2 )") == Composition({1, 2}));
    CHECK_THROWS_AS(Composition::parse("3,0"), std::invalid_argument);
    CHECK_THROWS_AS(Composition::parse("(1,-1)"), std::invalid_argument);
    CHECK_THROWS_AS(Composition::parse("(1,x)"), std::invalid_argument);
    CHECK_THROWS_AS(Composition::parse("()"), std::invalid_argument);
    CHECK((Composition({1, 0}) + Composition({0, 2})) == Composition({1, 2}));
    CHECK_THROWS((void)(Composition({1, 0}) + Composition({1})));
}

TEST_CASE("invalid enumeration arguments") {
    CHECK_THROWS_AS(enumerate_compositions(-1, 2), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_compositions(2, 0), std::invalid_argument);
    CHECK(enumerate_compositions(0, 3).size() == 1);
}
