#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "tpg/baselines/baselines.hpp"
#include "tpg/errors.hpp"
#include "tpg/experiments/config.hpp"
#include "tpg/experiments/figures.hpp"
#include "tpg/gaussian/covariance.hpp"
#include "tpg/ng/measures.hpp"

namespace py = pybind11;
using namespace tpg;

namespace {

ExperimentConfig make_config(const std::string &config_json, const std::string &out, int threads, bool use_cache) {
    auto cfg = config_json.empty() ? ExperimentConfig{} : config_from_json(nlohmann::json::parse(config_json, nullptr, true, true));
    if(!out.empty()) cfg.out = out;
    cfg.threads   = threads;
    cfg.use_cache = use_cache;
    cfg.validate();
    return cfg;
}

py::dict tps_measures(double xi, double alpha_p, int mode_cutoff) {
    ExperimentConfig cfg;
    cfg.alpha_p     = alpha_p;
    cfg.mode_cutoff = mode_cutoff;
    const auto spec   = cfg.tps_spec();
    const auto layout = cfg.tps_layout();
    const auto h      = build_hamiltonian(spec, layout);
    const double grid[] = {xi};
    const auto run    = evolve(h, initial_state(spec, layout, cfg.pump_tail_tolerance), grid, cfg.evolve_options());
    const auto &psi   = run.states.at(0);
    const auto chain  = qre_chain_residual(psi);
    const ModeSet abc{Mode::A, Mode::B, Mode::C};
    const auto rho    = partial_trace(psi, abc);
    const auto stats  = photon_statistics(partial_trace(psi, {Mode::A}));
    py::dict d;
    d["xi"]             = xi;
    d["qre_abc"]        = chain.delta_abc;
    d["qre_ab"]         = chain.delta_ab;
    d["qre_a"]          = chain.delta_a;
    d["log_negativity"] = log_negativity(rho, {Mode::A});
    d["log_negativity_ab"] = log_negativity(partial_trace(psi, {Mode::A, Mode::B}), {Mode::A});
    d["nu_minus"]       = ppt_min_symplectic(covariance_of(psi, abc), {Mode::A});
    d["mean_n"]         = stats.mean_n;
    d["mandel_q"]       = stats.mandel_q ? py::cast(*stats.mandel_q) : py::none();
    d["photon_distribution"] = stats.pn;
    d["warnings"]       = run.warnings;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc()               = "Truncated-Fock-space simulator of triple-photon generation";
    m.attr("__version__") = TPG_VERSION;

    static py::exception<TruncationError> truncation(m, "TruncationError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if(p) std::rethrow_exception(p);
        } catch(const TruncationError &e) {
            py::set_error(truncation, e.what());
        } catch(const ConfigurationError &e) {
            py::set_error(PyExc_ValueError, e.what());
        } catch(const UsageError &e) {
            py::set_error(PyExc_ValueError, e.what());
        }
    });

    m.def("default_config", [] { return ExperimentConfig{}.to_json().dump(2); }, "Default experiment config as JSON text.");
    m.def("config_hash", [](const std::string &config_json) { return make_config(config_json, "", 1, false).hash(); }, py::arg("config_json") = "");

    m.def(
        "run_figure",
        [](const std::string &figure, const std::string &config_json, const std::string &out, int threads, bool use_cache) {
            Experiment ex(make_config(config_json, out, threads, use_cache));
            py::gil_scoped_release release;
            std::vector<std::string> manifests;
            auto add = [&](const FigureReport &r) { manifests.push_back(r.manifest.string()); };
            if(figure == "all")
                for(const auto &r : ex.all()) add(r);
            else if(figure == "figure1") add(ex.figure1());
            else if(figure == "figure2") add(ex.figure2());
            else if(figure == "figure3") add(ex.figure3());
            else if(figure == "figure4") add(ex.figure4());
            else if(figure == "evolve") add(ex.evolution());
            else throw UsageError("unknown figure '" + figure + "'");
            return manifests;
        },
        py::arg("figure"), py::arg("config_json") = "", py::arg("out") = "out", py::arg("threads") = 1, py::arg("use_cache") = true,
        "Runs a figure job and returns the written manifest paths.");

    m.def(
        "verify_outputs",
        [](const std::string &dir) {
            const auto r = verify_outputs(dir);
            py::dict   d;
            d["ok"]        = r.ok();
            d["manifests"] = r.manifests;
            d["files"]     = r.files;
            d["problems"]  = r.problems;
            return d;
        },
        py::arg("dir"));

    m.def("tps_measures", &tps_measures, py::arg("xi"), py::arg("alpha_p") = 4.0, py::arg("mode_cutoff") = 0,
          "Evolves the quantized-pump triple-photon state to xi and returns its scalar measures.");

    m.def("tmsv_entropy", &tmsv_entropy, py::arg("xi"));
    m.def("tmsv_log_negativity", &tmsv_log_negativity, py::arg("xi"));
    m.def("tmsv_mean_photons", &tmsv_mean_photons, py::arg("xi"));
    m.def("tmsv_photon_dist", &tmsv_photon_dist, py::arg("xi"), py::arg("n"));
}
