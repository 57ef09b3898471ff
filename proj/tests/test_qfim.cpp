#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "dpnqcrb/qfim.hpp"
#include "test_support.hpp"

using namespace dpnqcrb;

namespace {

double max_abs(const Eigen::MatrixXd& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

QfimConfig spectral_config() {
    QfimConfig cfg;
    cfg.method = QfimMethod::spectral;
    return cfg;
}

}  // namespace

TEST_CASE("two-mode NOON without loss has F = N^2") {
    auto basis = FockBasis::make(2, 2);
    const DpnState noon(basis, {0.5, 0.0, 0.5});
    for (const QfimConfig& cfg : {QfimConfig{}, spectral_config()}) {
        const QfimResult r = total_qfim(noon, LossRates::uniform(2, 0.0), PhaseVector::zeros(1), cfg);
        CHECK(r.matrix(0, 0) == doctest::Approx(4.0).epsilon(1e-8));
        CHECK(r.qcrb == doctest::Approx(0.25).epsilon(1e-8));
    }
}

TEST_CASE("total loss leaves only the phase-free vacuum") {
    std::mt19937_64 rng(2);
    const DpnState s = test::random_state(rng, 2, 3);
    const QfimResult r = total_qfim(s, LossRates::uniform(3, 1.0), PhaseVector::zeros(2));
    REQUIRE(r.per_block.size() == 1);
    CHECK(max_abs(r.matrix) == 0.0);
    CHECK(std::isinf(r.qcrb));
}

TEST_CASE("balanced single photon: F = 1 - gamma") {
    auto basis = FockBasis::make(1, 2);
    const DpnState s(basis, {0.5, 0.5});
    for (double g : {0.0, 0.25, 0.5, 0.9}) {
        for (const QfimConfig& cfg : {QfimConfig{}, spectral_config()}) {
            const QfimResult r = total_qfim(s, LossRates::uniform(2, g), PhaseVector::zeros(1), cfg);
            CHECK(r.matrix(0, 0) == doctest::Approx(1.0 - g).epsilon(1e-8));
            CHECK(r.qcrb == doctest::Approx(1.0 / (1.0 - g)).epsilon(1e-8));
        }
    }
}

TEST_CASE("single photon QCRB matches the closed form for any split") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> uni(0.05, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const int modes = 2 + trial % 4;
        std::vector<double> u(static_cast<std::size_t>(modes));
        double norm = 0.0;
        for (double& x : u) {
            x = uni(rng);
            norm += x * x;
        }
        for (double& x : u) {
            x /= std::sqrt(norm);
        }
        const LossRates g = test::random_rates(rng, modes);
        const double expected = test::single_photon_qcrb(u, g);
        const double got = total_qfim(fock_bs_state(1, u), g, PhaseVector::zeros(modes - 1)).qcrb;
        CHECK(std::abs(got - expected) <= 1e-8 * expected);
    }
}

TEST_CASE("rank-1 no-loss block equals the weighted pure-state formula") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + trial % 3;
        const int modes = 2 + trial % 3;
        const DpnState s = test::random_state(rng, n, modes, 0.2);
        const LossRates g = test::random_rates(rng, modes);
        const int m = modes - 1;

        const auto comps = test::brute_force_compositions(n, modes);
        Eigen::VectorXcd v(static_cast<Eigen::Index>(comps.size()));
        for (std::size_t r = 0; r < comps.size(); ++r) {
            double amp2 = s.weights()[r];
            for (int j = 0; j < modes; ++j) {
                amp2 *= std::pow(1.0 - g[static_cast<std::size_t>(j)], comps[r][static_cast<std::size_t>(j)]);
            }
            v[static_cast<Eigen::Index>(r)] = std::sqrt(amp2);
        }
        const double w = v.squaredNorm();
        if (w < 1e-12) {
            continue;
        }
        v /= std::sqrt(w);
        const Eigen::MatrixXd expected = test::weighted_pure_qfim(w, v, comps, m);

        const QfimResult r = total_qfim(s, g, PhaseVector::zeros(m));
        REQUIRE(r.block_photons_lost.front() == 0);
        CHECK(max_abs(r.per_block.front() - expected) <= 1e-8 * std::max(1.0, max_abs(expected)));
    }
}

TEST_CASE("Liouville and spectral routes agree") {
    std::mt19937_64 rng(37);
    const QfimConfig liouville;
    const QfimConfig spectral = spectral_config();
    int cases = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const DpnState s = test::random_state(rng, 1 + trial % 3, 2 + trial % 3, 0.3);
        const LossRates g = test::random_rates(rng, s.modes());
        for (const Block& b : lossy_blocks(s, g, test::random_phases(rng, s.phases()))) {
            CHECK(max_abs(block_qfim(b, liouville) - block_qfim_spectral(b, spectral)) <= 1e-7);
            ++cases;
        }
    }
    CHECK(cases >= 100);
}

TEST_CASE("qcrb_of examples") {
    CHECK(qcrb_of(Eigen::MatrixXd::Identity(3, 3)) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(qcrb_of(Eigen::MatrixXd::Constant(1, 1, 4.0)) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(std::isinf(qcrb_of(Eigen::Vector3d(2.0, 0.0, 1.0).asDiagonal().toDenseMatrix())));
    Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(2, 2);
    asym(0, 1) = 1e-3;
    CHECK_THROWS_AS((void)qcrb_of(asym), std::invalid_argument);
}

TEST_CASE("QCRB never improves when one mode gets lossier") {
    std::mt19937_64 rng(41);
    const std::vector<double> grid = {0.0, 0.2, 0.4, 0.6, 0.8};
    for (int trial = 0; trial < 15; ++trial) {
        const DpnState s = test::random_state(rng, 1 + trial % 3, 2 + trial % 3);
        const LossRates base = test::random_rates(rng, s.modes(), 0.5);
        for (int j = 0; j < s.modes(); ++j) {
            double previous = 0.0;
            for (double gj : grid) {
                LossRates g = base;
                g.rates[static_cast<std::size_t>(j)] = gj;
                const double q = total_qfim(s, g, PhaseVector::zeros(s.phases())).qcrb;
                CHECK(q >= previous * (1.0 - 1e-9));
                previous = q;
            }
        }
    }
}

TEST_CASE("halving the regularization barely moves the QCRB") {
    std::mt19937_64 rng(43);
    QfimConfig halved;
    halved.regularization = 0.5 * QfimConfig{}.regularization;
    for (int trial = 0; trial < 30; ++trial) {
        const DpnState s = test::random_state(rng, 1 + trial % 3, 2 + trial % 3);
        const LossRates g = test::random_rates(rng, s.modes());
        const PhaseVector phi = test::random_phases(rng, s.phases());
        const double a = total_qfim(s, g, phi).qcrb;
        const double b = total_qfim(s, g, phi, halved).qcrb;
        CHECK(std::abs(a - b) <= 1e-6 * b);
    }
}

TEST_CASE("total QFIM is the sum of its blocks") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 20; ++trial) {
        const DpnState s = test::random_state(rng, 2, 4, 0.3);
        const QfimResult r = total_qfim(s, test::random_rates(rng, 4), PhaseVector::zeros(3));
        Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(3, 3);
        double trace = 0.0;
        for (std::size_t b = 0; b < r.per_block.size(); ++b) {
            sum += r.per_block[b];
            trace += r.block_traces[b];
        }
        CHECK((sum - r.matrix).cwiseAbs().maxCoeff() == 0.0);
        CHECK(std::abs(trace - 1.0) <= 1e-10);
    }
}

TEST_CASE("configuration and serialization") {
    QfimConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.regularization = 1e-3;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.regularization = -1e-12;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    auto basis = FockBasis::make(1, 3);
    const DpnState s(basis, {1.0, 0.0, 0.0});
    const nlohmann::json j = to_json(total_qfim(s, LossRates::uniform(3, 0.0), PhaseVector::zeros(2)));
    CHECK(j["qcrb"] == "inf");
    CHECK(j["matrix"].size() == 2);
    CHECK(j["blocks"].size() == 1);
}
