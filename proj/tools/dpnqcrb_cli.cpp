// Command-line front end: single-point QCRB evaluation, optimization, loss
// sweeps and figure reproduction.
//
// Exit codes: 0 success, 1 verification failure or internal error,
// 2 invalid input, 3 unwritable output.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "CLI11.hpp"

#include "dpnqcrb/benchmark.hpp"
#include "dpnqcrb/io.hpp"
#include "dpnqcrb/optimize.hpp"
#include "dpnqcrb/parallel.hpp"
#include "dpnqcrb/qfim.hpp"
#include "dpnqcrb/state.hpp"
#include "dpnqcrb/sweep.hpp"
#include "dpnqcrb/verify.hpp"

namespace fs = std::filesystem;
using namespace dpnqcrb;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitUnwritable = 3;

struct InvalidInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Unwritable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// "0.1,0.2" -> {0.1, 0.2}
std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw InvalidInput(std::string("cannot parse ") + what + " entry '" + item + "'");
        }
    }
    if (out.empty()) {
        throw InvalidInput(std::string("empty ") + what);
    }
    return out;
}

// A single value is broadcast to every mode.
LossRates parse_rates(const std::string& text, int modes) {
    std::vector<double> v = parse_list(text, "gamma");
    if (v.size() == 1) {
        v.assign(static_cast<std::size_t>(modes), v.front());
    }
    LossRates r{std::move(v)};
    r.validate(modes);
    return r;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out || !(out << text << '\n') || !out.flush()) {
        throw Unwritable("cannot write '" + out_path + "'");
    }
}

void write_table(const SweepTable& table, const fs::path& path) {
    try {
        write_csv(table, path);
    } catch (const std::system_error& e) {
        throw Unwritable(e.what());
    }
}

QfimMethod parse_method(const std::string& text) {
    if (text == "liouville") {
        return QfimMethod::liouville;
    }
    if (text == "spectral") {
        return QfimMethod::spectral;
    }
    throw InvalidInput("unknown method '" + text + "'");
}

nlohmann::json load(const std::string& path) {
    try {
        return read_json_file(path);
    } catch (const std::system_error& e) {
        throw InvalidInput(e.what());
    } catch (const std::invalid_argument& e) {
        throw InvalidInput(e.what());
    }
}

struct CommonFlags {
    std::string out;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    double nu = QfimConfig{}.regularization;
    bool nu_set = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--out", f.out, "Output path");
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&f](std::uint64_t s) { f.seed = s, f.seed_set = true; }, "Optimizer seed");
    cmd->add_option("--threads", f.threads, "Worker threads (default: $DPNQCRB_THREADS or all cores)");
    cmd->add_option_function<double>(
        "--nu", [&f](double v) { f.nu = v, f.nu_set = true; }, "QFIM regularization");
}

int cmd_qcrb(const std::string& state_path, const std::string& gamma_text, const std::string& phi_text,
             const std::string& method, const CommonFlags& flags) {
    const nlohmann::json doc = load(state_path);
    DpnState state = [&] {
        try {
            return state_from_json(doc);
        } catch (const std::invalid_argument& e) {
            throw InvalidInput(state_path + ": " + e.what());
        } catch (const std::out_of_range& e) {
            throw InvalidInput(state_path + ": " + e.what());
        }
    }();
    const int m = state.phases();
    QfimConfig cfg;
    cfg.regularization = flags.nu;
    cfg.method = parse_method(method);
    const LossRates gamma = gamma_text.empty() ? LossRates::uniform(state.modes(), 0.0)
                                               : parse_rates(gamma_text, state.modes());
    const PhaseVector phi = phi_text.empty() ? PhaseVector::zeros(m) : PhaseVector{parse_list(phi_text, "phi")};
    try {
        cfg.validate();
        phi.validate(m);
    } catch (const std::invalid_argument& e) {
        throw InvalidInput(e.what());
    }
    const QfimResult result = total_qfim(state, gamma, phi, cfg);
    nlohmann::json report = to_json(result);
    report["gamma"] = gamma.rates;
    report["phi"] = phi.phases;
    if (m >= 1 && state.photons() >= 1 && std::all_of(gamma.rates.begin(), gamma.rates.end(), [](double g) { return g < 1.0; })) {
        const double s = sql(m, state.photons(), gamma);
        report["sql"] = s;
        const double adv = quantum_advantage(result.qcrb, s);
        report["r_qa"] = std::isfinite(adv) ? nlohmann::json(adv) : nlohmann::json("-inf");
    }
    emit(report.dump(2), flags.out);
    return 0;
}

int cmd_optimize(int m, int photons, const std::string& gamma_text, const std::string& support,
                 int starts, const CommonFlags& flags) {
    SweepSpec spec;
    spec.m = m;
    spec.photons = photons;
    spec.gamma_grid = {0.0};
    spec.phi = PhaseVector::zeros(m);
    try {
        spec.support = parse_support(support);
    } catch (const std::invalid_argument& e) {
        throw InvalidInput(e.what());
    }
    spec.optim.starts = starts;
    spec.optim.seed = flags.seed;
    spec.optim.threads = flags.threads;
    spec.optim.qfim.regularization = flags.nu;
    spec.qfim.regularization = flags.nu;
    LossRates gamma;
    try {
        spec.validate();
        gamma = parse_rates(gamma_text, m + 1);
        for (double g : gamma.rates) {
            if (g >= 1.0) {
                throw std::invalid_argument("loss rates must be below 1");
            }
        }
    } catch (const std::invalid_argument& e) {
        throw InvalidInput(e.what());
    }
    const OptimResult result = optimize_support(spec, gamma);
    nlohmann::json report = to_json(result);
    report["gamma"] = gamma.rates;
    report["support"] = support;
    report["mode_energies"] = mode_energies(result.state());
    emit(report.dump(2), flags.out);
    return 0;
}

void apply_overrides(SweepSpec& spec, const CommonFlags& flags) {
    if (flags.seed_set) {
        spec.optim.seed = flags.seed;
    }
    if (flags.nu_set) {
        spec.qfim.regularization = flags.nu;
        spec.optim.qfim.regularization = flags.nu;
    }
}

int cmd_sweep(const std::string& spec_path, const CommonFlags& flags) {
    const nlohmann::json doc = load(spec_path);
    SweepSpec spec;
    try {
        spec = sweep_spec_from_json(doc);
        apply_overrides(spec, flags);
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw InvalidInput(spec_path + ": " + e.what());
    }
    if (!flags.out.empty()) {
        spec.output_path = flags.out;
    }
    // Fail before the long computation if the destination is unusable.
    {
        std::ofstream probe(spec.output_path, std::ios::app);
        if (!probe) {
            throw Unwritable("cannot write '" + spec.output_path + "'");
        }
    }
    const SweepTable table = run_sweep(spec, flags.threads);
    write_table(table, spec.output_path);
    std::cerr << "wrote " << table.rows.size() << " rows to " << spec.output_path << '\n';
    return 0;
}

int cmd_reproduce(const std::string& figure, const CommonFlags& flags) {
    std::vector<SweepSpec> specs;
    try {
        specs = figure_specs(figure);
        for (SweepSpec& s : specs) {
            apply_overrides(s, flags);
            s.validate();
        }
    } catch (const std::invalid_argument& e) {
        throw InvalidInput(e.what());
    }
    const fs::path dir = flags.out.empty() ? fs::path(".") : fs::path(flags.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw Unwritable("cannot create output directory '" + dir.string() + "'");
    }
    for (SweepSpec& spec : specs) {
        spec.output_path = (dir / spec.output_path).string();
        const SweepTable table = run_sweep(spec, flags.threads);
        write_table(table, spec.output_path);
        std::cerr << "wrote " << spec.output_path << '\n';
    }
    return 0;
}

int cmd_verify(int instances, const CommonFlags& flags) {
    VerifyOptions options;
    options.seed = flags.seed_set ? flags.seed : options.seed;
    options.regularization = flags.nu;
    options.instances = instances;
    const auto checks = run_property_suites(options);
    const nlohmann::json summary = to_json(checks, options);
    emit(summary.dump(2), flags.out);
    return summary["passed"].get<bool>() ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum Cramer-Rao bounds for lossy definite-photon-number probes"};
    app.require_subcommand(1);

    CommonFlags flags;

    auto* qcrb = app.add_subcommand("qcrb", "Evaluate the QFIM and QCRB of a state file");
    std::string state_path, gamma_text, phi_text, method = "liouville";
    qcrb->add_option("--state", state_path, "State JSON file")->required();
    qcrb->add_option("--gamma", gamma_text, "Loss rates, comma separated (one value broadcasts)");
    qcrb->add_option("--phi", phi_text, "Relative phases, comma separated");
    qcrb->add_option("--method", method, "liouville or spectral");
    add_common(qcrb, flags);

    auto* optimize = app.add_subcommand("optimize", "Optimize probe weights at one loss point");
    int m = 3, photons = 2, starts = OptimConfig{}.starts;
    std::string opt_gamma = "0", support = "dpn";
    optimize->add_option("--m", m, "Number of relative phases");
    optimize->add_option("--N", photons, "Photon number");
    optimize->add_option("--gamma", opt_gamma, "Loss rates, comma separated (one value broadcasts)");
    optimize->add_option("--support", support, "dpn, noon or fock_bs");
    optimize->add_option("--starts", starts, "Optimizer restarts");
    add_common(optimize, flags);

    auto* sweep = app.add_subcommand("sweep", "Run a loss sweep described by a spec file");
    std::string spec_path;
    sweep->add_option("--spec", spec_path, "Sweep spec JSON file")->required();
    add_common(sweep, flags);

    auto* reproduce = app.add_subcommand("reproduce", "Write the CSV sweeps behind a figure");
    std::string figure;
    reproduce->add_option("figure", figure, "fig2, fig3 or fig4")->required();
    add_common(reproduce, flags);

    auto* verify = app.add_subcommand("verify", "Run the randomized property suites");
    int instances = VerifyOptions{}.instances;
    verify->add_option("--instances", instances, "Random instances per check");
    add_common(verify, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalidInput;
    }

    try {
        if (*qcrb) {
            return cmd_qcrb(state_path, gamma_text, phi_text, method, flags);
        }
        if (*optimize) {
            return cmd_optimize(m, photons, opt_gamma, support, starts, flags);
        }
        if (*sweep) {
            return cmd_sweep(spec_path, flags);
        }
        if (*reproduce) {
            return cmd_reproduce(figure, flags);
        }
        if (*verify) {
            return cmd_verify(instances, flags);
        }
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const Unwritable& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUnwritable;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitFailure;
}
