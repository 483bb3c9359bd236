#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace tpg {

/// Shortest round-trip decimal; NaN becomes an empty cell.
std::string csv_number(double v);

/// CSV table whose every row ends with the producing config hash.
class CsvTable {
  public:
    CsvTable(std::vector<std::string> header, std::string config_hash);
    void                      add(std::vector<std::string> cells);
    [[nodiscard]] std::size_t rows() const { return rows_.size(); }
    [[nodiscard]] std::string str() const;

  private:
    std::vector<std::string>              header_;
    std::vector<std::vector<std::string>> rows_;
    std::string                           hash_;
};

/// Output directory of one figure; every file written through it is listed in the manifest.
class FigureOutput {
  public:
    FigureOutput(std::filesystem::path dir, std::string figure);
    void write(const std::string &name, const std::string &content, std::size_t rows);
    void write(const std::string &name, const CsvTable &table) { write(name, table.str(), table.rows()); }

    nlohmann::json &manifest() { return manifest_; }
    /// Writes manifest.json and returns its path.
    std::filesystem::path finish();
    [[nodiscard]] const std::filesystem::path &dir() const { return dir_; }

  private:
    std::filesystem::path dir_;
    nlohmann::json        manifest_;
};

/// Atomic write through a temporary file in the same directory.
void write_file_atomic(const std::filesystem::path &path, const std::string &content);

} // namespace tpg
