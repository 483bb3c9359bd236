#include "tpg/experiments/figures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "tpg/baselines/baselines.hpp"
#include "tpg/conditioning/homodyne.hpp"
#include "tpg/errors.hpp"
#include "tpg/experiments/output.hpp"
#include "tpg/gaussian/covariance.hpp"
#include "tpg/ng/measures.hpp"
#include "tpg/ng/wigner.hpp"
#include "tpg/util/sha256.hpp"

namespace tpg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::string xi_tag(double xi) { return fmt::format("{:.2f}", xi); }
std::string xc_tag(double x) { return fmt::format("{:g}", x); }

json audit_json(const CutoffAuditReport &r) {
    json modes = json::array();
    for(const auto &e : r.modes)
        modes.push_back({{"mode", std::string(1, to_char(e.mode))}, {"cutoff", e.cutoff}, {"top_two_mass", e.top_mass}, {"pass", e.pass},
                         {"suggested_cutoff", e.suggested_cutoff}});
    return {{"xi_max", r.xi_max}, {"threshold", r.threshold}, {"pass", r.pass}, {"modes", modes}};
}

// Correlation coefficient of the two slice coordinates under W as a (signed) weight.
double slice_correlation(const WignerGrid &w) {
    double s = 0, su = 0, sv = 0, suu = 0, svv = 0, suv = 0;
    for(std::size_t i = 0; i < w.axis0.size(); ++i)
        for(std::size_t j = 0; j < w.axis1.size(); ++j) {
            const double f = w.values(static_cast<index_t>(i), static_cast<index_t>(j)), u = w.axis0[i], v = w.axis1[j];
            s += f;
            su += f * u;
            sv += f * v;
            suu += f * u * u;
            svv += f * v * v;
            suv += f * u * v;
        }
    const double mu = su / s, mv = sv / s;
    const double cuu = suu / s - mu * mu, cvv = svv / s - mv * mv, cuv = suv / s - mu * mv;
    return cuv / std::sqrt(cuu * cvv);
}

std::string wigner_csv(const WignerGrid &w, const std::string &hash) {
    std::string out = fmt::format("{}\\{}", w.axis_names[0], w.axis_names[1]);
    for(double v : w.axis1) out += "," + csv_number(v);
    out += ",config_hash\n";
    for(std::size_t i = 0; i < w.axis0.size(); ++i) {
        out += csv_number(w.axis0[i]);
        for(std::size_t j = 0; j < w.axis1.size(); ++j) out += "," + csv_number(w.values(static_cast<index_t>(i), static_cast<index_t>(j)));
        out += "," + hash + "\n";
    }
    return out;
}

std::string mode_pair(const ModeSet &left, const ModeSet &right) { return to_string(left) + "|" + to_string(right); }

} // namespace

Experiment::Experiment(ExperimentConfig config) : config_(std::move(config)) {
    config_.validate();
    hash_ = config_.hash();
}

std::vector<double> Experiment::xi_needed() const {
    auto xi = config_.xi.values();
    for(double x : config_.xi_panels) xi.push_back(x);
    for(double x : config_.chain_xi) xi.push_back(x);
    xi.push_back(config_.xi_conditioning);
    xi.push_back(config_.xi_joint);
    std::sort(xi.begin(), xi.end());
    return xi;
}

const EvolutionRun &Experiment::tps() {
    if(!tps_) {
        const auto cache = config_.use_cache ? config_.resolved_cache_dir() : fs::path{};
        tps_ = std::make_unique<EvolutionRun>(
            cached_evolution(config_.tps_spec(), config_.tps_layout(), xi_needed(), config_.evolve_options(), config_.pump_tail_tolerance, cache));
    }
    return *tps_;
}

const EvolutionRun &Experiment::sodc() {
    if(!sodc_) {
        const auto cache = config_.use_cache ? config_.resolved_cache_dir() : fs::path{};
        sodc_ = std::make_unique<EvolutionRun>(
            cached_evolution(config_.sodc_spec(), config_.sodc_layout(), xi_needed(), config_.evolve_options(), config_.pump_tail_tolerance, cache));
    }
    return *sodc_;
}

json Experiment::audit() {
    if(!audit_.is_null()) return audit_;
    const double xi_max = xi_needed().back();
    json         out;
    for(const auto &[name, spec, layout] : {std::tuple{"TPG", config_.tps_spec(), config_.tps_layout()},
                                            std::tuple{"SODC", config_.sodc_spec(), config_.sodc_layout()}}) {
        const auto rep = cutoff_audit(spec, xi_max, layout, config_.tail_threshold);
        out[name]      = audit_json(rep);
        if(!rep.pass) {
            for(const auto &e : rep.modes)
                if(!e.pass)
                    throw TruncationError(fmt::format("{} cutoff audit failed: mode {} top-two-level mass {:.3e} > {:.1e} at cutoff {}; "
                                                      "suggested cutoff {}",
                                                      name, to_char(e.mode), e.top_mass, rep.threshold, e.cutoff, e.suggested_cutoff),
                                          e.suggested_cutoff);
        }
    }
    audit_ = out;
    return audit_;
}

json Experiment::base_manifest() const {
    return {{"config_hash", hash_},
            {"config", config_.to_json()},
            {"layouts", {{"TPG", config_.tps_layout().describe()}, {"SODC", config_.sodc_layout().describe()}}}};
}

void Experiment::stamp(json &manifest) {
    const auto base = base_manifest();
    for(const auto &[k, v] : base.items()) manifest[k] = v;
    manifest["audit"] = audit();
    json evo          = json::array();
    json warnings     = json::array();
    if(tps_) {
        evo.push_back({{"process", "TPG"}, {"engine", to_string(config_.engine)}, {"key", tps_->key}, {"cached", tps_->cached}});
        for(const auto &w : tps_->warnings) warnings.push_back("TPG: " + w);
    }
    if(sodc_) {
        evo.push_back({{"process", "SODC"}, {"engine", "classical"}, {"key", sodc_->key}, {"cached", sodc_->cached}});
        for(const auto &w : sodc_->warnings) warnings.push_back("SODC: " + w);
    }
    manifest["evolutions"] = evo;
    manifest["warnings"]   = warnings;
}

FigureReport Experiment::figure1() {
    audit();
    const auto  &cfg = config_;
    FigureOutput out(cfg.out / "figure1", "figure1");
    const auto  &t = tps();
    const auto  &s = sodc();
    json         summary;

    {
        const auto g  = cfg.joint_grid.values();
        const auto jd = joint_quadrature_density(t.at(cfg.xi_joint), g, g, g);
        CsvTable   tab({"xi", "x_a", "x_b", "x_c", "density"}, hash_);
        double     total = 0;
        const auto n     = g.size();
        for(std::size_t i = 0; i < n; ++i)
            for(std::size_t j = 0; j < n; ++j)
                for(std::size_t k = 0; k < n; ++k) {
                    const double v = jd[(i * n + j) * n + k];
                    total += v;
                    tab.add({csv_number(cfg.xi_joint), csv_number(g[i]), csv_number(g[j]), csv_number(g[k]), csv_number(v)});
                }
        summary["joint_density_integral"] = total * std::pow(cfg.joint_grid.step, 3);
        out.write("fig1a_joint_density.csv", tab);
    }
    {
        CsvTable tab({"process", "xi", "n", "probability", "log_probability"}, hash_);
        for(double xi : cfg.xi_panels)
            for(const auto &[name, run] : {std::pair{"TPG", &t}, std::pair{"SODC", &s}}) {
                const auto st = photon_statistics(partial_trace(run->at(xi), {Mode::A}));
                for(std::size_t n = 0; n < st.pn.size(); ++n)
                    tab.add({name, csv_number(xi), std::to_string(n), csv_number(st.pn[n]), csv_number(st.pn[n] > 0 ? std::log(st.pn[n]) : nan)});
            }
        out.write("fig1bcd_photon_distribution.csv", tab);
    }
    {
        const auto g = cfg.marginal_grid.values();
        CsvTable   tab({"xi", "x", "tpg", "sodc", "tpg_gaussian_reference"}, hash_);
        json       kurt = json::object();
        for(double xi : cfg.xi_panels) {
            const auto ra  = partial_trace(t.at(xi), {Mode::A});
            const auto mt  = quadrature_marginal(ra, g);
            const auto ms  = quadrature_marginal(partial_trace(s.at(xi), {Mode::A}), g);
            const auto var = covariance_of(ra, {Mode::A}).sigma(0, 0);
            double     m2 = 0, m4 = 0;
            for(std::size_t i = 0; i < g.size(); ++i) {
                const double ref = std::exp(-g[i] * g[i] / (2 * var)) / std::sqrt(2 * pi * var);
                tab.add({csv_number(xi), csv_number(g[i]), csv_number(mt[i]), csv_number(ms[i]), csv_number(ref)});
                m2 += g[i] * g[i] * mt[i];
                m4 += std::pow(g[i], 4) * mt[i];
            }
            kurt[xi_tag(xi)] = m4 * cfg.marginal_grid.step / std::pow(m2 * cfg.marginal_grid.step, 2) - 3;
        }
        summary["tpg_marginal_excess_kurtosis"] = kurt;
        out.write("fig1fgh_marginals.csv", tab);
    }
    {
        CsvTable mean({"xi", "mean_n_tpg", "mean_n_sodc", "mean_n_sodc_closed_form"}, hash_);
        CsvTable mandel({"xi", "mandel_q_tpg", "mandel_q_sodc"}, hash_);
        for(double xi : cfg.xi.values()) {
            const auto a = photon_statistics(partial_trace(t.at(xi), {Mode::A}));
            const auto b = photon_statistics(partial_trace(s.at(xi), {Mode::A}));
            mean.add({csv_number(xi), csv_number(a.mean_n), csv_number(b.mean_n), csv_number(tmsv_mean_photons(xi))});
            mandel.add({csv_number(xi), csv_number(a.mandel_q.value_or(nan)), csv_number(b.mandel_q.value_or(nan))});
        }
        out.write("fig1e_mean_photon.csv", mean);
        out.write("fig1i_mandel_q.csv", mandel);
    }
    {
        const auto g = cfg.wigner_grid.values();
        for(double xi : cfg.xi_panels) {
            const auto w = wigner_single(partial_trace(t.at(xi), {Mode::A}), g, g);
            out.write(fmt::format("fig1_wigner_xi{}.csv", xi_tag(xi)), wigner_csv(w, hash_), w.axis0.size());
            summary["wigner_integral"][xi_tag(xi)] = w.integral();
        }
    }
    stamp(out.manifest());
    out.manifest()["summary"] = summary;
    return {"figure1", out.dir(), out.finish(), summary};
}

FigureReport Experiment::figure2() {
    audit();
    const auto  &cfg = config_;
    FigureOutput out(cfg.out / "figure2", "figure2");
    const auto  &t = tps();
    const auto  &s = sodc();
    const auto   engine = to_string(cfg.engine);
    CsvTable     tab({"process", "engine", "xi", "measure", "bipartition", "value"}, hash_);
    const ModeSet abc{Mode::A, Mode::B, Mode::C}, ab{Mode::A, Mode::B};

    for(double xi : cfg.xi.values()) {
        const auto &psi = t.at(xi);
        auto        row = [&](const char *proc, const std::string &eng, const char *measure, const std::string &part, double v) {
            tab.add({proc, eng, csv_number(xi), measure, part, csv_number(v)});
        };
        const auto chain = qre_chain_residual(psi);
        row("TPG", engine, "qre", "ABC", chain.delta_abc);
        row("TPG", engine, "qre", "AB", chain.delta_ab);
        row("TPG", engine, "qre", "A", chain.delta_a);
        row("TPG", engine, "qre_chain_lhs", "ABC-AB", chain.lhs);
        row("TPG", engine, "qre_chain_rhs", "AB-A", chain.rhs);
        row("TPG", engine, "qre_chain_residual", "ABC-AB|AB-A", chain.residual);

        const auto rho_abc = partial_trace(psi, abc);
        const auto cov     = covariance_of(psi, abc);
        double     nu_min  = std::numeric_limits<double>::infinity();
        for(auto m : abc) {
            ModeSet rest;
            for(auto o : abc)
                if(o != m) rest.push_back(o);
            const std::string part = mode_pair({m}, rest);
            row("TPG", engine, "log_negativity", part, log_negativity(rho_abc, {m}));
            const double nu = ppt_min_symplectic(cov, {m});
            nu_min          = std::min(nu_min, nu);
            row("TPG", engine, "nu_minus", part, nu);
        }
        row("TPG", engine, "nu_minus", "min", nu_min);
        row("TPG", engine, "log_negativity", "A|B (C traced)", log_negativity(partial_trace(psi, ab), {Mode::A}));

        const auto &phi    = s.at(xi);
        const auto  rho_ab = partial_trace(phi, ab);
        row("SODC", "classical", "qre", "AB", qre(phi, ab));
        row("SODC", "classical", "qre", "A", qre(phi, {Mode::A}));
        row("SODC", "classical", "log_negativity", "A|B", log_negativity(rho_ab, {Mode::A}));
        row("SODC", "classical", "nu_minus", "A|B", ppt_min_symplectic(covariance_of(phi, ab), {Mode::A}));
        row("SODC", "classical", "entropy", "A", von_neumann_entropy(partial_trace(phi, {Mode::A})));
        row("TMSV", "analytic", "entropy", "A", tmsv_entropy(xi));
        row("TMSV", "analytic", "log_negativity", "A|B", tmsv_log_negativity(xi));
    }
    out.write("fig2_measures.csv", tab);

    json chain = json::array();
    for(double xi : cfg.chain_xi) {
        const auto c = qre_chain_residual(t.at(xi));
        chain.push_back({{"xi", xi}, {"delta_abc", c.delta_abc}, {"delta_ab", c.delta_ab}, {"delta_a", c.delta_a}, {"lhs", c.lhs},
                         {"rhs", c.rhs}, {"residual", c.residual}});
    }
    json pert = json::array();
    for(double xi : {0.05, 0.1, 0.2, 0.3}) {
        const auto r = perturbative_variance_report(xi);
        pert.push_back({{"xi", xi}, {"variance", r.variance}, {"mean_photons", r.mean_photons}, {"lambda", r.lambda_quoted}, {"ratio", r.ratio}});
    }
    json summary{{"qre_chain", chain},
                 {"perturbative_variance",
                  {{"points", pert}, {"best_fit_scale_lambda_over_mean_n", perturbative_best_fit_scale({0.05, 0.1, 0.2, 0.3})}}}};
    stamp(out.manifest());
    out.manifest()["summary"] = summary;
    return {"figure2", out.dir(), out.finish(), summary};
}

FigureReport Experiment::figure3() {
    audit();
    const auto  &cfg = config_;
    FigureOutput out(cfg.out / "figure3", "figure3");
    const auto  &t = tps();
    json         summary;

    {
        const auto xs   = cfg.xc.values();
        const auto rows = conditional_sweep(t.at(cfg.xi_conditioning), xs, {}, cfg.threads);
        CsvTable   tab({"xi", "x_c", "density", "qre2", "qre1", "log_negativity", "steering_R", "flags"}, hash_);
        for(const auto &r : rows)
            tab.add({csv_number(cfg.xi_conditioning), csv_number(r.x_c), csv_number(r.density), csv_number(r.qre2), csv_number(r.qre1),
                     csv_number(r.log_negativity), csv_number(r.steering_R), r.flags});
        out.write("fig3_conditional_sweep.csv", tab);
    }
    {
        CsvTable tab({"xi", "x_c", "density", "qre2", "log_negativity", "steering_R", "flags"}, hash_);
        const SweepMeasures m{true, false, true, true};
        for(double xi : cfg.xi.values()) {
            const auto rows = conditional_sweep(t.at(xi), cfg.xc_panels, m, cfg.threads);
            for(const auto &r : rows)
                tab.add({csv_number(xi), csv_number(r.x_c), csv_number(r.density), csv_number(r.qre2), csv_number(r.log_negativity),
                         csv_number(r.steering_R), r.flags});
        }
        out.write("fig3_vs_xi.csv", tab);
    }
    {
        const auto g = cfg.wigner_grid.values();
        for(double x : cfg.xc_panels) {
            const auto c = homodyne_project(t.at(cfg.xi_conditioning), x);
            const auto w = wigner_single(partial_trace(c.state_ab, {Mode::A}), g, g);
            out.write(fmt::format("fig3_wigner_A_xc{}.csv", xc_tag(x)), wigner_csv(w, hash_), w.axis0.size());
            summary["wigner_A_min"][xc_tag(x)] = w.values.minCoeff();
        }
    }
    stamp(out.manifest());
    out.manifest()["summary"] = summary;
    return {"figure3", out.dir(), out.finish(), summary};
}

FigureReport Experiment::figure4() {
    audit();
    const auto  &cfg = config_;
    FigureOutput out(cfg.out / "figure4", "figure4");
    const auto  &t = tps();
    const auto   g = cfg.slice_grid.values();
    CsvTable     stats({"xi", "x_c", "plane", "min", "max", "correlation"}, hash_);
    json         summary;

    auto emit = [&](double x, const DensityOperator &rho, PhaseAxis a, PhaseAxis b, const char *tag) {
        const auto w = wigner_slice(rho, {a, b, {0, 0, 0, 0}}, g, g, cfg.threads);
        out.write(fmt::format("fig4_wigner_{}_xc{}.csv", tag, xc_tag(x)), wigner_csv(w, hash_), w.axis0.size());
        const double corr = slice_correlation(w);
        stats.add({csv_number(cfg.xi_conditioning), csv_number(x), tag, csv_number(w.values.minCoeff()), csv_number(w.values.maxCoeff()),
                   csv_number(corr)});
        summary[tag][xc_tag(x)] = {{"min", w.values.minCoeff()}, {"max", w.values.maxCoeff()}, {"correlation", corr}};
    };
    for(double x : cfg.xc_panels) {
        const auto c = homodyne_project(t.at(cfg.xi_conditioning), x);
        emit(x, c.state_ab, PhaseAxis::XA, PhaseAxis::XB, "XAXB");
        emit(x, c.state_ab, PhaseAxis::PA, PhaseAxis::PB, "PAPB");
    }
    if(!cfg.xc_panels.empty()) {
        const double x = cfg.xc_panels.back();
        emit(x, homodyne_project(t.at(cfg.xi_conditioning), x).state_ab, PhaseAxis::XA, PhaseAxis::PA, "XAPA");
    }
    out.write("fig4_slice_stats.csv", stats);
    stamp(out.manifest());
    out.manifest()["summary"] = summary;
    return {"figure4", out.dir(), out.finish(), summary};
}

std::vector<FigureReport> Experiment::all() { return {figure1(), figure2(), figure3(), figure4()}; }

FigureReport Experiment::evolution() {
    audit();
    FigureOutput out(config_.out / "evolve", "evolve");
    CsvTable     tab({"process", "xi", "norm", "mode", "mean_n", "top_two_mass"}, hash_);
    for(const auto &[name, run] : {std::pair{"TPG", &tps()}, std::pair{"SODC", &sodc()}})
        for(std::size_t i = 0; i < run->xi.size(); ++i) {
            const auto &psi = run->states[i];
            for(const auto &m : psi.layout().modes()) {
                const auto pn   = psi.level_distribution(m.label);
                double     mean = 0;
                for(std::size_t n = 0; n < pn.size(); ++n) mean += static_cast<double>(n) * pn[n];
                tab.add({name, csv_number(run->xi[i]), csv_number(psi.norm()), std::string(1, to_char(m.label)), csv_number(mean),
                         csv_number(psi.top_level_mass(m.label, 2))});
            }
        }
    out.write("evolution.csv", tab);
    stamp(out.manifest());
    return {"evolve", out.dir(), out.finish(), {}};
}

VerifyReport verify_outputs(const fs::path &dir) {
    VerifyReport rep;
    if(!fs::is_directory(dir)) {
        rep.problems.push_back(fmt::format("{} is not a directory", dir.string()));
        return rep;
    }
    for(const auto &entry : fs::recursive_directory_iterator(dir)) {
        if(entry.path().filename() != "manifest.json") continue;
        ++rep.manifests;
        json m;
        try {
            std::ifstream in(entry.path());
            m = json::parse(in);
        } catch(const std::exception &e) {
            rep.problems.push_back(fmt::format("{}: {}", entry.path().string(), e.what()));
            continue;
        }
        const auto hash = m.value("config_hash", std::string{});
        for(const auto &info : m.value("files", json::array())) {
            ++rep.files;
            const auto path = entry.path().parent_path() / info.value("name", std::string{});
            if(!fs::exists(path)) {
                rep.problems.push_back(fmt::format("{}: missing", path.string()));
                continue;
            }
            if(util::sha256_file(path) != info.value("sha256", std::string{})) rep.problems.push_back(fmt::format("{}: checksum mismatch", path.string()));
            if(path.extension() != ".csv") continue;
            std::ifstream in(path);
            std::string   line;
            std::getline(in, line);
            for(std::size_t row = 2; std::getline(in, line); ++row)
                if(line.size() < hash.size() || line.compare(line.size() - hash.size(), hash.size(), hash) != 0) {
                    rep.problems.push_back(fmt::format("{}:{}: row lacks config hash", path.string(), row));
                    break;
                }
        }
    }
    if(rep.manifests == 0) rep.problems.push_back(fmt::format("no manifest.json under {}", dir.string()));
    return rep;
}

} // namespace tpg
