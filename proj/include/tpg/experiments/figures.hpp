#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tpg/experiments/cache.hpp"
#include "tpg/experiments/config.hpp"

namespace tpg {

struct FigureReport {
    std::string           figure;
    std::filesystem::path dir;
    std::filesystem::path manifest;
    nlohmann::json        summary;
};

/// Shared state of one experiment run: the config plus lazily evolved (and cached)
/// triple-photon and down-conversion trajectories.
class Experiment {
  public:
    explicit Experiment(ExperimentConfig config);

    [[nodiscard]] const ExperimentConfig &config() const { return config_; }
    [[nodiscard]] const std::string      &config_hash() const { return hash_; }

    /// Evolution over the union of every xi the figures need.
    const EvolutionRun &tps();
    const EvolutionRun &sodc();

    /// Audits both processes at the largest xi; throws TruncationError naming the
    /// failing mode and a suggested cutoff.
    nlohmann::json audit();

    FigureReport figure1();
    FigureReport figure2();
    FigureReport figure3();
    FigureReport figure4();
    std::vector<FigureReport> all();
    /// Per-xi norms, mean photon numbers and top-level masses of both evolutions.
    FigureReport evolution();

  private:
    [[nodiscard]] std::vector<double> xi_needed() const;
    nlohmann::json                    base_manifest() const;
    void                              stamp(nlohmann::json &manifest);

    ExperimentConfig                config_;
    std::string                     hash_;
    std::unique_ptr<EvolutionRun>   tps_, sodc_;
    nlohmann::json                  audit_;
};

struct VerifyReport {
    std::size_t              manifests = 0;
    std::size_t              files     = 0;
    std::vector<std::string> problems;
    [[nodiscard]] bool ok() const { return manifests > 0 && problems.empty(); }
};

/// Checks every manifest.json below dir: listed files exist and match their checksums,
/// and every CSV row ends with the manifest's config hash.
VerifyReport verify_outputs(const std::filesystem::path &dir);

} // namespace tpg
