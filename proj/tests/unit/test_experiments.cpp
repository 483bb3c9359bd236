#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tpg/baselines/baselines.hpp"
#include "tpg/errors.hpp"
#include "tpg/experiments/cache.hpp"
#include "tpg/experiments/config.hpp"
#include "tpg/experiments/figures.hpp"
#include "tpg/experiments/output.hpp"
#include "tpg/util/sha256.hpp"

using namespace tpg;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
    const auto p = fs::temp_directory_path() / ("tpg_unit_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path &p) {
    std::ifstream     in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool identical(const StateVector &x, const StateVector &y) {
    if(x.nonzeros() != y.nonzeros()) return false;
    for(std::size_t i = 0; i < x.nonzeros(); ++i)
        if(x.entries()[i].index != y.entries()[i].index || x.entries()[i].amplitude != y.entries()[i].amplitude) return false;
    return true;
}

std::vector<std::vector<std::string>> read_csv(const fs::path &p) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream                         in(p);
    for(std::string line; std::getline(in, line);) {
        std::vector<std::string> cells;
        std::stringstream        ss(line);
        for(std::string c; std::getline(ss, c, ',');) cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

ExperimentConfig small_config(const fs::path &out) {
    ExperimentConfig c;
    c.xi              = {0.0, 0.3, 0.1};
    c.xi_panels       = {0.3};
    c.chain_xi        = {0.1, 0.3};
    c.xi_conditioning = 0.3;
    c.xi_joint        = 0.3;
    c.xc              = {-1.0, 1.0, 0.5};
    c.xc_panels       = {0.0, 3.0};
    c.joint_grid      = {-3.0, 3.0, 0.5};
    c.wigner_grid     = {-2.5, 2.5, 0.1};
    c.slice_grid      = {-2.5, 2.5, 0.1};
    c.out             = out;
    c.use_cache       = false;
    return c;
}

} // namespace

TEST_CASE("grid values include the endpoint and reject bad grids") {
    const auto v = GridSpec{0.0, 0.7, 0.02}.values();
    CHECK(v.size() == 36);
    CHECK(v.back() == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(v[15] == 0.3);
    CHECK_THROWS_AS((void)GridSpec({1.0, 0.0, 0.1}).values(), ConfigurationError);
    CHECK_THROWS_AS((void)GridSpec({0.0, 1.0, 0.0}).values(), ConfigurationError);
}

TEST_CASE("config json round trip preserves the hash") {
    ExperimentConfig a;
    a.alpha_p     = 3.0;
    a.xc_panels   = {0.0, 2.0};
    const auto b  = config_from_json(a.to_json());
    CHECK(a.hash() == b.hash());
    CHECK(a.hash() != ExperimentConfig{}.hash());

    ExperimentConfig c;
    c.out       = "elsewhere";
    c.threads   = 7;
    c.use_cache = false;
    CHECK(c.hash() == ExperimentConfig{}.hash());

    CHECK_THROWS_AS(config_from_json({{"unknown", 1}}), ConfigurationError);
    CHECK_THROWS_AS(config_from_json({{"xi", {0.0, 1.0}}}), ConfigurationError);
    ExperimentConfig bad;
    bad.norm_tolerance = -1;
    CHECK_THROWS_AS(bad.validate(), ConfigurationError);
    bad                = {};
    bad.xi_panels      = {0.5, 0.3};
    CHECK_THROWS_AS(bad.validate(), ConfigurationError);
}

TEST_CASE("config file accepts comments") {
    const auto dir = scratch("config");
    std::ofstream(dir / "c.json") << "// comment\n{\"alpha_p\": 3.0, \"seed\": 5}\n";
    const auto c = load_config(dir / "c.json");
    CHECK(std::abs(c.alpha_p - cplx{3.0}) < 1e-15);
    CHECK(c.seed == 5);
}

TEST_CASE("csv table rows carry the config hash and LF endings") {
    CsvTable t({"a", "b"}, "HASH");
    t.add({csv_number(0.1), csv_number(std::nan(""))});
    CHECK(t.str() == "a,b,config_hash\n0.1,,HASH\n");
    CHECK(csv_number(1e-300) == "1e-300");
}

TEST_CASE("figure output manifest lists every file with its checksum") {
    const auto   dir = scratch("output");
    FigureOutput out(dir / "fig", "fig");
    out.write("x.csv", "h\n1\n", 1);
    const auto manifest = out.finish();
    const auto m        = nlohmann::json::parse(slurp(manifest));
    REQUIRE(m["files"].size() == 1);
    CHECK(m["files"][0]["sha256"] == util::sha256_file(dir / "fig" / "x.csv"));
    CHECK(m["files"][0]["rows"] == 1);
    CHECK(m.contains("created_utc"));
}

TEST_CASE("evolution cache hits, and recomputes after corruption") {
    const auto                 dir = scratch("cache");
    const HamiltonianSpec      spec{Process::SODC, PumpTreatment::Classical, cplx{1.0}, 1.0};
    const auto                 layout = process_layout(spec, 20);
    const std::vector<double>  xi{0.2, 0.0, 0.1, 0.2};
    const auto                 first = cached_evolution(spec, layout, xi, {}, 1e-12, dir);
    CHECK_FALSE(first.cached);
    CHECK(first.xi == std::vector<double>{0.0, 0.1, 0.2});
    const auto second = cached_evolution(spec, layout, xi, {}, 1e-12, dir);
    CHECK(second.cached);
    CHECK(second.key == first.key);
    for(double x : first.xi) CHECK(identical(second.at(x), first.at(x)));

    for(const auto &e : fs::recursive_directory_iterator(dir))
        if(e.path().extension() == ".tpgs") {
            std::fstream f(e.path(), std::ios::in | std::ios::out | std::ios::binary);
            f.seekp(-3, std::ios::end);
            f.put('\x7f');
            break;
        }
    const auto third = cached_evolution(spec, layout, xi, {}, 1e-12, dir);
    CHECK_FALSE(third.cached);
    CHECK(identical(third.at(0.2), first.at(0.2)));
    CHECK(cached_evolution(spec, layout, xi, {}, 1e-12, dir).cached);

    CHECK_THROWS_AS((void)first.at(0.15), UsageError);
}

TEST_CASE("cutoff audit scales xi by the coupling rate") {
    const HamiltonianSpec sodc{Process::SODC, PumpTreatment::Classical, cplx{4.0}, 1.0};
    const auto            rep = cutoff_audit(sodc, 0.7, process_layout(sodc, 40));
    CHECK(rep.pass);
    for(const auto &m : rep.modes) CHECK(m.top_mass < 1e-12);

    const HamiltonianSpec tpg{Process::TPG, PumpTreatment::Classical, cplx{4.0}, 1.0};
    const auto            bad = cutoff_audit(tpg, 0.7, process_layout(tpg, 4));
    CHECK_FALSE(bad.pass);
    CHECK(bad.modes[0].suggested_cutoff > 4);
}

TEST_CASE("figure runners on a short sweep") {
    const auto dir = scratch("figures");
    Experiment ex(small_config(dir));

    const auto f1 = ex.figure1();
    int        csv = 0;
    for(const auto &e : fs::directory_iterator(f1.dir)) csv += e.path().extension() == ".csv";
    CHECK(csv == 6); // one Wigner panel in this config
    CHECK(f1.summary["joint_density_integral"].get<double>() == doctest::Approx(1.0).epsilon(2e-3));

    SUBCASE("down-conversion log-probabilities are affine in n") {
        const auto rows = read_csv(f1.dir / "fig1bcd_photon_distribution.csv");
        std::vector<double> lp;
        for(std::size_t i = 1; i < rows.size(); ++i)
            if(rows[i][0] == "SODC" && std::stoi(rows[i][2]) < 12) lp.push_back(std::stod(rows[i][4]));
        REQUIRE(lp.size() == 12);
        for(std::size_t n = 1; n + 1 < lp.size(); ++n) CHECK(std::abs(lp[n + 1] - 2 * lp[n] + lp[n - 1]) < 1e-4);
    }

    const auto f2 = ex.figure2();
    CHECK(f2.summary["qre_chain"].size() == 2);
    const auto m2 = nlohmann::json::parse(slurp(f2.manifest));
    CHECK(m2["config_hash"] == ex.config_hash());
    CHECK(m2["evolutions"].size() == 2);
    CHECK(m2.contains("audit"));
    for(const auto &row : read_csv(f2.dir / "fig2_measures.csv"))
        if(row[0] == "SODC" && row[3] == "qre") CHECK(std::stod(row[5]) <= 1e-6);

    (void)ex.figure3();
    const auto f4 = ex.figure4();
    CHECK(f4.summary["PAPB"]["3"]["min"].get<double>() < 0);
    CHECK(f4.summary["XAXB"]["3"]["correlation"].get<double>() > 0);
    CHECK(f4.summary["PAPB"]["3"]["correlation"].get<double>() < 0);

    const auto rep = verify_outputs(dir);
    CHECK(rep.ok());
    CHECK(rep.manifests == 4);
}

TEST_CASE("figure csv output is identical across reruns and thread counts") {
    auto run = [](const std::string &name, int threads) {
        const auto dir = scratch(name);
        auto       cfg = small_config(dir);
        cfg.threads    = threads;
        Experiment ex(cfg);
        (void)ex.figure3();
        (void)ex.figure4();
        std::map<std::string, std::string> sums;
        for(const auto &e : fs::recursive_directory_iterator(dir))
            if(e.path().extension() == ".csv") sums[fs::relative(e.path(), dir).string()] = util::sha256_file(e.path());
        return sums;
    };
    const auto a = run("det1", 1);
    CHECK(a.size() == 10);
    CHECK(a == run("det2", 1));
    CHECK(a == run("det3", 3));
}

TEST_CASE("verify_outputs flags tampering") {
    const auto   dir = scratch("verify");
    FigureOutput out(dir / "f", "f");
    CsvTable     t({"a"}, "H");
    t.add({"1"});
    out.write("t.csv", t);
    out.manifest()["config_hash"] = "H";
    (void)out.finish();
    CHECK(verify_outputs(dir).ok());
    std::ofstream(dir / "f" / "t.csv", std::ios::app) << "2\n";
    const auto rep = verify_outputs(dir);
    CHECK_FALSE(rep.ok());
    CHECK(rep.problems.size() == 2);
    CHECK_FALSE(verify_outputs(dir / "missing").ok());
}
