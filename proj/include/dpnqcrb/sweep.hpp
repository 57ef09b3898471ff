#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dpnqcrb/optimize.hpp"
#include "dpnqcrb/qfim.hpp"
#include "dpnqcrb/state.hpp"

namespace dpnqcrb {

enum class GammaMode { all_equal, reference_only, mode1_only, explicit_rates };
enum class SupportKind { dpn, noon, fock_bs };

/// A loss-rate sweep: one optimization per grid point.
///
/// JSON form:
///   {"m": 3, "N": 2, "gamma_mode": "all_equal", "gamma_grid": [0.0, 0.1],
///    "support": "dpn", "phi": [0, 0, 0],
///    "optim": {"starts": 16, "max_evals": 20000, "f_tol": 1e-9, "seed": 0,
///              "penalty": 1e9, "method": "spectral"},
///    "qfim": {"regularization": 1e-10, "support_cut": 1e-12, "method": "liouville"},
///    "output_path": "sweep.csv"}
/// gamma_mode "explicit" additionally takes "gamma_rates": one rate vector of
/// length m+1 per grid point. Every field except m, N and gamma_grid has a
/// default.
struct SweepSpec {
    int m = 3;
    int photons = 2;
    GammaMode gamma_mode = GammaMode::all_equal;
    std::vector<double> gamma_grid;
    std::vector<LossRates> explicit_rates;
    SupportKind support = SupportKind::dpn;
    PhaseVector phi;
    OptimConfig optim;
    /// Used to re-evaluate the reported QCRB of each optimum at `phi`.
    QfimConfig qfim;
    std::string output_path = "sweep.csv";

    /// Rates at grid point i.
    [[nodiscard]] LossRates rates_at(std::size_t i) const;
    /// Throws std::invalid_argument on an empty, unsorted or out-of-range
    /// grid, a bad phase vector, or invalid optimizer/QFIM settings.
    void validate() const;
};

struct SweepRow {
    double gamma = 0.0;
    LossRates rates;
    double sql = 0.0;
    double qcrb = 0.0;
    double r_qa = 0.0;
    std::vector<double> mode_energies;
    std::vector<double> weights;
    bool converged = false;
};

struct SweepTable {
    SweepSpec spec;
    std::shared_ptr<const FockBasis> basis;
    std::vector<SweepRow> rows;
};

std::string to_string(GammaMode mode);
std::string to_string(SupportKind kind);
GammaMode parse_gamma_mode(const std::string& text);
SupportKind parse_support(const std::string& text);

nlohmann::json to_json(const SweepSpec& spec);
SweepSpec sweep_spec_from_json(const nlohmann::json& j);

/// Evaluates every grid point, distributing points over `threads` workers.
/// Rows come back in grid order.
SweepTable run_sweep(const SweepSpec& spec, int threads = 1);

/// One optimization of the spec's support family at the given rates.
OptimResult optimize_support(const SweepSpec& spec, const LossRates& rates);

/// CSV with a leading "# config: {...}" line, a header
///   gamma,sql,qcrb,r_qa,n_mean_0..n_mean_m,"(k0,...,km)",...
/// and one row per grid point, numbers at 12 significant digits.
void write_csv(const SweepTable& table, std::ostream& out);
/// Throws std::system_error if the file cannot be written.
void write_csv(const SweepTable& table, const std::filesystem::path& path);

/// Canonical figure recipes: "fig2" (dpn and noon, equal loss), "fig3"
/// (dpn and noon with loss on the reference mode or on mode 1) and "fig4"
/// (dpn energies under equal, reference-only and mode-1-only loss). Output
/// paths are bare file names. Throws std::invalid_argument on other ids.
std::vector<SweepSpec> figure_specs(const std::string& figure_id);

/// Evenly spaced grid start, start + step, ... up to and including stop.
std::vector<double> make_grid(double start, double stop, double step);

/// printf("%.12g"), with "inf" / "-inf" for infinities.
std::string format_number(double value);

}  // namespace dpnqcrb
