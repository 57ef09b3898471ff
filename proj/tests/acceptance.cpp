// Acceptance suite: one PASS/FAIL line per primary criterion. Exit status is
// zero only when every line passes. An optional directory argument receives
// the CSVs of the sweeps evaluated along the way.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dpnqcrb/benchmark.hpp"
#include "dpnqcrb/loss.hpp"
#include "dpnqcrb/parallel.hpp"
#include "dpnqcrb/qfim.hpp"
#include "dpnqcrb/sweep.hpp"
#include "dpnqcrb/verify.hpp"

using namespace dpnqcrb;

namespace {

int failures = 0;

void report(const std::string& name, bool passed, const std::string& detail) {
    std::printf("%s %s: %s\n", passed ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    failures += passed ? 0 : 1;
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

class Sweeps {
public:
    explicit Sweeps(std::filesystem::path out_dir) : out_dir_(std::move(out_dir)) {
        for (const char* id : {"fig2", "fig3", "fig4"}) {
            for (SweepSpec& spec : figure_specs(id)) {
                specs_[spec.output_path] = std::move(spec);
            }
        }
    }

    const SweepTable& get(const std::string& name) {
        auto it = tables_.find(name);
        if (it == tables_.end()) {
            const auto start = std::chrono::steady_clock::now();
            it = tables_.emplace(name, run_sweep(specs_.at(name), default_thread_count())).first;
            const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
            std::fprintf(stderr, "[sweep] %s: %zu points in %.1f s\n", name.c_str(), it->second.rows.size(),
                         took.count());
            if (!out_dir_.empty()) {
                write_csv(it->second, out_dir_ / name);
            }
        }
        return it->second;
    }

private:
    std::filesystem::path out_dir_;
    std::map<std::string, SweepSpec> specs_;
    std::map<std::string, SweepTable> tables_;
};

double weight_of(const SweepTable& t, const SweepRow& row, const char* comp) {
    return row.weights[t.basis->index_of(Composition::parse(comp))];
}

void lossless_advantage(Sweeps& sweeps) {
    const SweepTable& t = sweeps.get("fig2_dpn.csv");
    const SweepRow& row = t.rows.front();
    const bool ok = row.gamma == 0.0 && std::abs(row.r_qa - 0.5) <= 0.005 && std::abs(row.qcrb - 1.3995) <= 0.005 &&
                    std::abs(row.sql - 2.79904) <= 1e-5;
    report("lossless_advantage", ok,
           fmt("gamma=0: qcrb=%.6f (1.3995 +- 0.005), sql=%.6f (2.79904), r_QA=%.6f (0.50 +- 0.005)", row.qcrb,
               row.sql, row.r_qa));
}

void persistence(Sweeps& sweeps) {
    const SweepTable& t = sweeps.get("fig2_dpn.csv");
    bool ok = t.rows.size() == 10;
    double min_r = INFINITY;
    double worst_excess = -INFINITY;
    for (const SweepRow& row : t.rows) {
        ok = ok && row.r_qa > 0.0 && row.qcrb <= row.sql + 1e-6;
        min_r = std::min(min_r, row.r_qa);
        worst_excess = std::max(worst_excess, row.qcrb - row.sql);
    }
    report("persistence", ok,
           fmt("%zu equal-loss points, min r_QA=%.6g (> 0), max qcrb-sql=%.6g (<= 1e-6)", t.rows.size(), min_r,
               worst_excess));
}

void noon_crossover(Sweeps& sweeps) {
    const SweepTable& noon = sweeps.get("fig2_noon.csv");
    double r04 = NAN;
    double r06 = NAN;
    for (const SweepRow& row : noon.rows) {
        if (std::abs(row.gamma - 0.4) < 1e-9) {
            r04 = row.r_qa;
        }
        if (std::abs(row.gamma - 0.6) < 1e-9) {
            r06 = row.r_qa;
        }
    }
    const bool sign_change = r04 > 0.0 && r06 < 0.0;

    const SweepTable& dpn = sweeps.get("fig2_dpn.csv");
    const SupportMask noon_mask = noon_support(*dpn.basis);
    double worst_outside = 0.0;
    for (const SweepRow& row : dpn.rows) {
        if (row.gamma > 0.3 + 1e-9) {
            continue;
        }
        double inside = 0.0;
        for (std::size_t i : noon_mask.allowed) {
            inside += row.weights[i];
        }
        worst_outside = std::max(worst_outside, 1.0 - inside);
    }
    report("noon_crossover", sign_change && worst_outside < 0.05,
           fmt("NOON r_QA(0.4)=%.6f, r_QA(0.6)=%.6f (sign change); max non-NOON weight for gamma<=0.3 = %.3g (< 0.05)",
               r04, r06, worst_outside));
}

void weight_symmetry(Sweeps& sweeps) {
    const SweepTable& t = sweeps.get("fig2_dpn.csv");
    const std::vector<std::vector<const char*>> classes = {
        {"(0,2,0,0)", "(0,0,2,0)", "(0,0,0,2)"},
        {"(1,1,0,0)", "(1,0,1,0)", "(1,0,0,1)"},
        {"(0,1,1,0)", "(0,1,0,1)", "(0,0,1,1)"},
    };
    double worst = 0.0;
    double worst_gamma = 0.0;
    for (const SweepRow& row : t.rows) {
        for (const auto& cls : classes) {
            double lo = INFINITY;
            double hi = -INFINITY;
            for (const char* comp : cls) {
                lo = std::min(lo, weight_of(t, row, comp));
                hi = std::max(hi, weight_of(t, row, comp));
            }
            if (hi - lo > worst) {
                worst = hi - lo;
                worst_gamma = row.gamma;
            }
        }
    }
    report("weight_symmetry", worst <= 1e-3,
           fmt("max spread within a symmetry class = %.3g at gamma=%.2f (<= 1e-3)", worst, worst_gamma));
}

void reference_sensitivity(Sweeps& sweeps) {
    const SweepTable& ref = sweeps.get("fig3_dpn_reference.csv");
    const SweepTable& mode1 = sweeps.get("fig3_dpn_mode1.csv");
    bool ok = ref.rows.size() == mode1.rows.size();
    double min_gap = INFINITY;
    int points = 0;
    for (std::size_t i = 0; ok && i < ref.rows.size(); ++i) {
        const double g = ref.rows[i].gamma;
        if (g < 0.1 - 1e-9 || g > 0.8 + 1e-9) {
            continue;
        }
        const double gap = mode1.rows[i].r_qa - ref.rows[i].r_qa;
        ok = ok && gap > 0.0;
        min_gap = std::min(min_gap, gap);
        ++points;
    }
    ok = ok && points == 8;
    report("reference_sensitivity", ok,
           fmt("%d points in [0.1, 0.8], min r_QA(mode 1 only) - r_QA(reference only) = %.6g (> 0)", points,
               min_gap));
}

void energy_crossing(Sweeps& sweeps) {
    const SweepTable& mode1 = sweeps.get("fig4_mode1_only.csv");
    std::vector<double> crossings;
    for (std::size_t i = 1; i < mode1.rows.size(); ++i) {
        const auto& a = mode1.rows[i - 1];
        const auto& b = mode1.rows[i];
        const double da = a.mode_energies[1] - a.mode_energies[0];
        const double db = b.mode_energies[1] - b.mode_energies[0];
        if ((da < 0.0) != (db < 0.0)) {
            crossings.push_back(a.gamma + (b.gamma - a.gamma) * da / (da - db));
        }
    }
    const bool crossing_ok = crossings.size() == 1 && std::abs(crossings.front() - 0.45) <= 0.07;

    const SweepTable& equal = sweeps.get("fig4_all_equal.csv");
    double worst_variation = 0.0;
    for (int j = 0; j <= equal.spec.m; ++j) {
        double lo = INFINITY;
        double hi = -INFINITY;
        for (const SweepRow& row : equal.rows) {
            lo = std::min(lo, row.mode_energies[static_cast<std::size_t>(j)]);
            hi = std::max(hi, row.mode_energies[static_cast<std::size_t>(j)]);
        }
        worst_variation = std::max(worst_variation, hi - lo);
    }
    report("energy_crossing", crossing_ok && worst_variation < 0.02,
           fmt("mode-1 loss: %zu sign change(s) of <n1>-<n0>, first at gamma=%.4f (0.45 +- 0.07); "
               "equal loss: max <n_j> variation = %.3g (< 0.02)",
               crossings.size(), crossings.empty() ? NAN : crossings.front(), worst_variation));
}

void sql_equivalence() {
    double worst = 0.0;
    int cases = 0;
    for (auto [m, n] : {std::pair{1, 1}, {1, 2}, {3, 1}, {3, 2}}) {
        std::vector<LossRates> grid;
        for (double g : {0.0, 0.3, 0.6, 0.9}) {
            grid.push_back(LossRates::uniform(m + 1, g));
        }
        grid.push_back(LossRates::single_mode(m + 1, 0, 0.5));
        grid.push_back(LossRates::single_mode(m + 1, 1, 0.5));
        for (const LossRates& g : grid) {
            const double reference = sql(m, n, g);
            const double got = optimize_bs_ratios(m, n, g).qcrb;
            worst = std::max(worst, std::abs(got - reference) / reference);
            ++cases;
        }
    }
    report("sql_equivalence", worst <= 1e-4,
           fmt("%d (m, N, gamma) cases, max relative |qcrb_bs - sql| / sql = %.3g (<= 1e-4)", cases, worst));
}

const CheckResult& find_check(const std::vector<CheckResult>& checks, const std::string& name) {
    return *std::find_if(checks.begin(), checks.end(), [&](const CheckResult& c) { return c.name == name; });
}

// Single-mode loss sweeps on fixed random probes; the QCRB may never drop.
double loss_monotonicity_violation(int& cases) {
    std::mt19937_64 rng(2024);
    std::exponential_distribution<double> exp1(1.0);
    std::uniform_real_distribution<double> base(0.0, 0.5);
    const std::vector<double> grid = {0.0, 0.2, 0.4, 0.6, 0.8};
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + trial % 3;
        const int modes = 2 + trial % 3;
        auto basis = FockBasis::make(n, modes);
        std::vector<double> w(basis->size());
        double sum = 0.0;
        for (double& x : w) {
            x = exp1(rng);
            sum += x;
        }
        for (double& x : w) {
            x /= sum;
        }
        const DpnState state(basis, w);
        LossRates rates;
        for (int j = 0; j < modes; ++j) {
            rates.rates.push_back(base(rng));
        }
        for (int j = 0; j < modes; ++j) {
            double previous = 0.0;
            for (double gj : grid) {
                LossRates g = rates;
                g.rates[static_cast<std::size_t>(j)] = gj;
                const double q = total_qfim(state, g, PhaseVector::zeros(modes - 1)).qcrb;
                worst = std::max(worst, (previous - q) / q);
                previous = q;
                ++cases;
            }
        }
    }
    return worst;
}

}  // namespace

int main(int argc, char** argv) {
    std::filesystem::path out_dir;
    if (argc > 1) {
        out_dir = argv[1];
        std::filesystem::create_directories(out_dir);
    }
    Sweeps sweeps(out_dir);

    lossless_advantage(sweeps);
    persistence(sweeps);
    noon_crossover(sweeps);
    weight_symmetry(sweeps);
    reference_sensitivity(sweeps);
    energy_crossing(sweeps);
    sql_equivalence();

    VerifyOptions options;
    options.instances = 100;
    const auto checks = run_property_suites(options);
    const CheckResult& oracle = find_check(checks, "oracle_equivalence");
    report("oracle_equivalence", oracle.passed && oracle.cases >= 100,
           fmt("%d blocks from %d random instances, max |F_liouville - F_spectral| = %.3g (<= 1e-7)", oracle.cases,
               options.instances, oracle.worst));

    const CheckResult& trace = find_check(checks, "trace_preservation");
    const CheckResult& phase = find_check(checks, "phase_invariance");
    const CheckResult& deriv = find_check(checks, "derivative_consistency");
    int mono_cases = 0;
    const double mono = loss_monotonicity_violation(mono_cases);
    report("physics_invariants", trace.passed && phase.passed && deriv.passed && mono <= 1e-9,
           fmt("|sum w_l - 1| = %.3g (<= 1e-10), phase invariance %.3g (<= 1e-8), "
               "dsigma vs finite difference %.3g (<= 1e-7), loss monotonicity max relative drop %.3g over %d points",
               trace.worst, phase.worst, deriv.worst, std::max(mono, 0.0), mono_cases));

    std::printf("%s: %d criterion(s) failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
    return failures == 0 ? 0 : 1;
}
