#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dpnqcrb/benchmark.hpp"
#include "dpnqcrb/optimize.hpp"
#include "dpnqcrb/qfim.hpp"
#include "dpnqcrb/state.hpp"
#include "dpnqcrb/sweep.hpp"
#include "dpnqcrb/verify.hpp"

namespace py = pybind11;
using namespace dpnqcrb;

namespace {

// Python objects cross the boundary as JSON so that dicts read the same as
// the CLI's state, spec and result files.
nlohmann::json to_cpp(const py::object& obj) {
    const auto text = py::module_::import("json").attr("dumps")(obj).cast<std::string>();
    return nlohmann::json::parse(text);
}

py::object to_py(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

LossRates rates_or_lossless(const std::optional<std::vector<double>>& gamma, int modes) {
    LossRates r = gamma ? LossRates{*gamma} : LossRates::uniform(modes, 0.0);
    if (r.size() == 1 && modes > 1) {
        r = LossRates::uniform(modes, r[0]);
    }
    r.validate(modes);
    return r;
}

QfimMethod parse_method(const std::string& text) {
    if (text == "liouville") {
        return QfimMethod::liouville;
    }
    if (text == "spectral") {
        return QfimMethod::spectral;
    }
    throw std::invalid_argument("unknown method '" + text + "' (expected liouville or spectral)");
}

py::object qcrb(const py::object& state_obj, const std::optional<std::vector<double>>& gamma,
                const std::optional<std::vector<double>>& phi, const std::string& method, double regularization) {
    const DpnState state = state_from_json(to_cpp(state_obj));
    const LossRates rates = rates_or_lossless(gamma, state.modes());
    const PhaseVector phases = phi ? PhaseVector{*phi} : PhaseVector::zeros(state.phases());
    QfimConfig cfg;
    cfg.method = parse_method(method);
    cfg.regularization = regularization;
    cfg.validate();
    QfimResult result;
    {
        py::gil_scoped_release release;
        result = total_qfim(state, rates, phases, cfg);
    }
    return to_py(to_json(result));
}

py::object optimize(int m, int photons, const std::vector<double>& gamma, const std::string& support, int starts,
                    std::uint64_t seed, long max_evals, int threads) {
    SweepSpec spec;
    spec.m = m;
    spec.photons = photons;
    spec.support = parse_support(support);
    spec.optim.starts = starts;
    spec.optim.seed = seed;
    spec.optim.max_evals = max_evals;
    spec.optim.threads = threads;
    const LossRates rates = rates_or_lossless(gamma, m + 1);
    OptimResult result;
    {
        py::gil_scoped_release release;
        result = optimize_support(spec, rates);
    }
    return to_py(to_json(result));
}

std::string sweep_csv(const py::object& spec_obj, int threads) {
    const SweepSpec spec = sweep_spec_from_json(to_cpp(spec_obj));
    std::ostringstream out;
    {
        py::gil_scoped_release release;
        write_csv(run_sweep(spec, threads), out);
    }
    return out.str();
}

py::object verify(int instances, std::uint64_t seed, double regularization) {
    VerifyOptions options;
    options.instances = instances;
    options.seed = seed;
    options.regularization = regularization;
    std::vector<CheckResult> checks;
    {
        py::gil_scoped_release release;
        checks = run_property_suites(options);
    }
    return to_py(to_json(checks, options));
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "QCRB of lossy definite-photon-number probes";

    mod.def(
        "compositions",
        [](int photons, int modes) {
            std::vector<std::string> out;
            for (const Composition& c : enumerate_compositions(photons, modes)) {
                out.push_back(c.to_string());
            }
            return out;
        },
        py::arg("photons"), py::arg("modes"), "Canonical basis labels \"(k0,...,km)\".");

    mod.def(
        "sql", [](int m, int photons, const std::vector<double>& gamma) { return sql(m, photons, LossRates{gamma}); },
        py::arg("m"), py::arg("photons"), py::arg("gamma"), "Classical benchmark for m phases and N photons.");
    mod.def("quantum_advantage", &quantum_advantage, py::arg("qcrb"), py::arg("sql"));

    mod.def(
        "fock_bs_state", [](int photons, const std::vector<double>& u) { return to_py(to_json(fock_bs_state(photons, u))); },
        py::arg("photons"), py::arg("u"), "State dict for N photons split by a beam splitter with amplitudes u.");
    mod.def(
        "mode_energies", [](const py::object& state) { return mode_energies(state_from_json(to_cpp(state))); },
        py::arg("state"));

    mod.def("qcrb", &qcrb, py::arg("state"), py::arg("gamma") = py::none(), py::arg("phi") = py::none(),
            py::arg("method") = "liouville", py::arg("regularization") = QfimConfig{}.regularization,
            "QFIM and QCRB of a state dict under per-mode loss.");
    mod.def("optimize", &optimize, py::arg("m"), py::arg("photons"), py::arg("gamma"), py::arg("support") = "dpn",
            py::arg("starts") = OptimConfig{}.starts, py::arg("seed") = 0, py::arg("max_evals") = OptimConfig{}.max_evals,
            py::arg("threads") = 1, "Optimal probe of the given support family at one loss point.");
    mod.def("sweep_csv", &sweep_csv, py::arg("spec"), py::arg("threads") = 1,
            "Runs a sweep spec dict and returns the CSV text.");
    mod.def("verify", &verify, py::arg("instances") = 100, py::arg("seed") = 1,
            py::arg("regularization") = QfimConfig{}.regularization, "Randomized property suites.");
}
