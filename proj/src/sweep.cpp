#include "dpnqcrb/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <system_error>

#include "dpnqcrb/benchmark.hpp"
#include "dpnqcrb/parallel.hpp"

namespace dpnqcrb {

std::string to_string(GammaMode mode) {
    switch (mode) {
        case GammaMode::all_equal: return "all_equal";
        case GammaMode::reference_only: return "reference_only";
        case GammaMode::mode1_only: return "mode1_only";
        case GammaMode::explicit_rates: return "explicit";
    }
    return "?";
}

std::string to_string(SupportKind kind) {
    switch (kind) {
        case SupportKind::dpn: return "dpn";
        case SupportKind::noon: return "noon";
        case SupportKind::fock_bs: return "fock_bs";
    }
    return "?";
}

GammaMode parse_gamma_mode(const std::string& text) {
    for (GammaMode m : {GammaMode::all_equal, GammaMode::reference_only, GammaMode::mode1_only,
                        GammaMode::explicit_rates}) {
        if (text == to_string(m)) {
            return m;
        }
    }
    throw std::invalid_argument("unknown gamma_mode '" + text +
                                "' (expected all_equal, reference_only, mode1_only or explicit)");
}

SupportKind parse_support(const std::string& text) {
    for (SupportKind k : {SupportKind::dpn, SupportKind::noon, SupportKind::fock_bs}) {
        if (text == to_string(k)) {
            return k;
        }
    }
    throw std::invalid_argument("unknown support '" + text + "' (expected dpn, noon or fock_bs)");
}

namespace {

std::string method_name(QfimMethod m) {
    return m == QfimMethod::spectral ? "spectral" : "liouville";
}

QfimMethod parse_method(const std::string& text) {
    if (text == "spectral") {
        return QfimMethod::spectral;
    }
    if (text == "liouville") {
        return QfimMethod::liouville;
    }
    throw std::invalid_argument("unknown QFIM method '" + text + "' (expected liouville or spectral)");
}

// Typed field access that names the offending field on failure.
template <typename T>
T field(const nlohmann::json& j, const char* name, const std::string& where) {
    try {
        return j.at(name).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("field '" + where + name + "': " + e.what());
    }
}

template <typename T>
void optional_field(const nlohmann::json& j, const char* name, const std::string& where, T& out) {
    if (j.contains(name)) {
        out = field<T>(j, name, where);
    }
}

}  // namespace

LossRates SweepSpec::rates_at(std::size_t i) const {
    const int modes = m + 1;
    const double g = gamma_grid.at(i);
    switch (gamma_mode) {
        case GammaMode::all_equal: return LossRates::uniform(modes, g);
        case GammaMode::reference_only: return LossRates::single_mode(modes, 0, g);
        case GammaMode::mode1_only: return LossRates::single_mode(modes, 1, g);
        case GammaMode::explicit_rates: return explicit_rates.at(i);
    }
    throw std::logic_error("unhandled gamma mode");
}

void SweepSpec::validate() const {
    if (m < 1 || photons < 1) {
        throw std::invalid_argument("sweep needs m >= 1 and N >= 1");
    }
    if (gamma_grid.empty()) {
        throw std::invalid_argument("gamma_grid is empty");
    }
    for (std::size_t i = 0; i < gamma_grid.size(); ++i) {
        const double g = gamma_grid[i];
        if (!(g >= 0.0 && g < 1.0)) {
            throw std::invalid_argument("gamma_grid entries must lie in [0, 1)");
        }
        if (i > 0 && !(g > gamma_grid[i - 1])) {
            throw std::invalid_argument("gamma_grid must be strictly increasing");
        }
    }
    if (gamma_mode == GammaMode::explicit_rates) {
        if (explicit_rates.size() != gamma_grid.size()) {
            throw std::invalid_argument("explicit gamma_rates must have one entry per grid point");
        }
        for (const LossRates& r : explicit_rates) {
            r.validate(m + 1);
            for (double g : r.rates) {
                if (g >= 1.0) {
                    throw std::invalid_argument("explicit loss rates must be below 1");
                }
            }
        }
    }
    phi.validate(m);
    optim.validate();
    qfim.validate();
    optim.qfim.validate();
}

nlohmann::json to_json(const SweepSpec& spec) {
    nlohmann::json j = {
        {"m", spec.m},
        {"N", spec.photons},
        {"gamma_mode", to_string(spec.gamma_mode)},
        {"gamma_grid", spec.gamma_grid},
        {"support", to_string(spec.support)},
        {"phi", spec.phi.phases},
        {"optim",
         {{"starts", spec.optim.starts},
          {"max_evals", spec.optim.max_evals},
          {"f_tol", spec.optim.f_tol},
          {"seed", spec.optim.seed},
          {"penalty", spec.optim.penalty},
          {"method", method_name(spec.optim.qfim.method)},
          {"regularization", spec.optim.qfim.regularization},
          {"support_cut", spec.optim.qfim.support_cut}}},
        {"qfim",
         {{"regularization", spec.qfim.regularization},
          {"support_cut", spec.qfim.support_cut},
          {"method", method_name(spec.qfim.method)}}},
        {"output_path", spec.output_path},
    };
    if (spec.gamma_mode == GammaMode::explicit_rates) {
        nlohmann::json rates = nlohmann::json::array();
        for (const LossRates& r : spec.explicit_rates) {
            rates.push_back(r.rates);
        }
        j["gamma_rates"] = rates;
    }
    return j;
}

SweepSpec sweep_spec_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw std::invalid_argument("sweep spec must be a JSON object");
    }
    SweepSpec spec;
    spec.m = field<int>(j, "m", "");
    spec.photons = field<int>(j, "N", "");
    spec.gamma_grid = field<std::vector<double>>(j, "gamma_grid", "");
    if (j.contains("gamma_mode")) {
        spec.gamma_mode = parse_gamma_mode(field<std::string>(j, "gamma_mode", ""));
    }
    if (j.contains("gamma_rates")) {
        for (auto& r : field<std::vector<std::vector<double>>>(j, "gamma_rates", "")) {
            spec.explicit_rates.push_back(LossRates{std::move(r)});
        }
    }
    if (j.contains("support")) {
        spec.support = parse_support(field<std::string>(j, "support", ""));
    }
    spec.phi = j.contains("phi") ? PhaseVector{field<std::vector<double>>(j, "phi", "")}
                                 : PhaseVector::zeros(spec.m);
    if (j.contains("optim")) {
        const auto& o = j["optim"];
        if (!o.is_object()) {
            throw std::invalid_argument("field 'optim' must be an object");
        }
        optional_field(o, "starts", "optim.", spec.optim.starts);
        optional_field(o, "max_evals", "optim.", spec.optim.max_evals);
        optional_field(o, "f_tol", "optim.", spec.optim.f_tol);
        optional_field(o, "seed", "optim.", spec.optim.seed);
        optional_field(o, "penalty", "optim.", spec.optim.penalty);
        optional_field(o, "regularization", "optim.", spec.optim.qfim.regularization);
        optional_field(o, "support_cut", "optim.", spec.optim.qfim.support_cut);
        if (o.contains("method")) {
            spec.optim.qfim.method = parse_method(field<std::string>(o, "method", "optim."));
        }
    }
    if (j.contains("qfim")) {
        const auto& q = j["qfim"];
        if (!q.is_object()) {
            throw std::invalid_argument("field 'qfim' must be an object");
        }
        optional_field(q, "regularization", "qfim.", spec.qfim.regularization);
        optional_field(q, "support_cut", "qfim.", spec.qfim.support_cut);
        if (q.contains("method")) {
            spec.qfim.method = parse_method(field<std::string>(q, "method", "qfim."));
        }
    }
    optional_field(j, "output_path", "", spec.output_path);
    spec.validate();
    return spec;
}

OptimResult optimize_support(const SweepSpec& spec, const LossRates& rates) {
    switch (spec.support) {
        case SupportKind::dpn: {
            const FockBasis basis(spec.photons, spec.m + 1);
            return optimize_weights(spec.m, spec.photons, rates, SupportMask::full(basis), spec.optim);
        }
        case SupportKind::noon: return noon_optimal(spec.m, spec.photons, rates, spec.optim);
        case SupportKind::fock_bs: return optimize_bs_ratios(spec.m, spec.photons, rates, spec.optim);
    }
    throw std::logic_error("unhandled support kind");
}

SweepTable run_sweep(const SweepSpec& spec, int threads) {
    spec.validate();
    SweepTable table;
    table.spec = spec;
    table.basis = FockBasis::make(spec.photons, spec.m + 1);
    table.rows.resize(spec.gamma_grid.size());

    SweepSpec inner = spec;
    inner.optim.threads = 1;
    parallel_for(spec.gamma_grid.size(), threads, [&](std::size_t i) {
        SweepRow& row = table.rows[i];
        row.gamma = spec.gamma_grid[i];
        row.rates = spec.rates_at(i);
        const OptimResult opt = optimize_support(inner, row.rates);
        const DpnState state = opt.state();
        row.sql = sql(spec.m, spec.photons, row.rates);
        row.qcrb = total_qfim(state, row.rates, spec.phi, spec.qfim).qcrb;
        row.r_qa = quantum_advantage(row.qcrb, row.sql);
        row.mode_energies = mode_energies(state);
        row.weights = opt.weights;
        row.converged = opt.converged;
    });
    return table;
}

std::string format_number(double value) {
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

void write_csv(const SweepTable& table, std::ostream& out) {
    out << "# config: " << to_json(table.spec).dump() << '\n';
    out << "gamma,sql,qcrb,r_qa";
    for (int j = 0; j <= table.spec.m; ++j) {
        out << ",n_mean_" << j;
    }
    for (const Composition& k : table.basis->elements()) {
        out << ",\"" << k.to_string() << '"';
    }
    out << '\n';
    for (const SweepRow& row : table.rows) {
        out << format_number(row.gamma) << ',' << format_number(row.sql) << ',' << format_number(row.qcrb)
            << ',' << format_number(row.r_qa);
        for (double n : row.mode_energies) {
            out << ',' << format_number(n);
        }
        for (double w : row.weights) {
            out << ',' << format_number(w);
        }
        out << '\n';
    }
}

void write_csv(const SweepTable& table, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::system_error(std::make_error_code(std::errc::io_error),
                                "cannot open '" + path.string() + "' for writing");
    }
    write_csv(table, out);
    out.flush();
    if (!out) {
        throw std::system_error(std::make_error_code(std::errc::io_error),
                                "failed writing '" + path.string() + "'");
    }
}

std::vector<double> make_grid(double start, double stop, double step) {
    if (!(step > 0.0) || stop < start) {
        throw std::invalid_argument("grid needs step > 0 and stop >= start");
    }
    std::vector<double> grid;
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= count; ++i) {
        // Round to 12 digits so that 0.1 * 3 prints as 0.3.
        grid.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
    }
    return grid;
}

std::vector<SweepSpec> figure_specs(const std::string& figure_id) {
    auto base = [](GammaMode mode, SupportKind support, std::vector<double> grid, std::string name) {
        SweepSpec s;
        s.m = 3;
        s.photons = 2;
        s.gamma_mode = mode;
        s.support = support;
        s.gamma_grid = std::move(grid);
        s.phi = PhaseVector::zeros(3);
        s.output_path = std::move(name);
        return s;
    };
    const std::vector<double> coarse = make_grid(0.0, 0.9, 0.1);
    if (figure_id == "fig2") {
        return {base(GammaMode::all_equal, SupportKind::dpn, coarse, "fig2_dpn.csv"),
                base(GammaMode::all_equal, SupportKind::noon, coarse, "fig2_noon.csv")};
    }
    if (figure_id == "fig3") {
        return {base(GammaMode::reference_only, SupportKind::dpn, coarse, "fig3_dpn_reference.csv"),
                base(GammaMode::reference_only, SupportKind::noon, coarse, "fig3_noon_reference.csv"),
                base(GammaMode::mode1_only, SupportKind::dpn, coarse, "fig3_dpn_mode1.csv"),
                base(GammaMode::mode1_only, SupportKind::noon, coarse, "fig3_noon_mode1.csv")};
    }
    if (figure_id == "fig4") {
        const std::vector<double> fine = make_grid(0.0, 0.9, 0.05);
        return {base(GammaMode::all_equal, SupportKind::dpn, fine, "fig4_all_equal.csv"),
                base(GammaMode::reference_only, SupportKind::dpn, fine, "fig4_reference_only.csv"),
                base(GammaMode::mode1_only, SupportKind::dpn, fine, "fig4_mode1_only.csv")};
    }
    throw std::invalid_argument("unknown figure '" + figure_id + "' (expected fig2, fig3 or fig4)");
}

}  // namespace dpnqcrb
