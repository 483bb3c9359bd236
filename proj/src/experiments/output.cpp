#include "tpg/experiments/output.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "tpg/errors.hpp"
#include "tpg/util/sha256.hpp"

namespace tpg {

namespace fs = std::filesystem;

std::string csv_number(double v) { return std::isnan(v) ? std::string{} : fmt::format("{}", v); }

CsvTable::CsvTable(std::vector<std::string> header, std::string config_hash) : header_(std::move(header)), hash_(std::move(config_hash)) {
    header_.push_back("config_hash");
}

void CsvTable::add(std::vector<std::string> cells) {
    if(cells.size() + 1 != header_.size()) throw UsageError(fmt::format("CSV row has {} cells, header has {}", cells.size() + 1, header_.size()));
    cells.push_back(hash_);
    rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
    std::string out;
    auto        line = [&](const std::vector<std::string> &cells) {
        for(std::size_t i = 0; i < cells.size(); ++i) {
            if(i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(header_);
    for(const auto &r : rows_) line(r);
    return out;
}

void write_file_atomic(const fs::path &path, const std::string &content) {
    const auto tmp = fs::path(path.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary);
        if(!out) throw Error(fmt::format("cannot write {}", tmp.string()));
        out << content;
        if(!out) throw Error(fmt::format("write failed for {}", tmp.string()));
    }
    fs::rename(tmp, path);
}

FigureOutput::FigureOutput(fs::path dir, std::string figure) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
    manifest_ = {{"figure", figure}, {"library_version", TPG_VERSION}, {"files", nlohmann::json::array()}};
}

void FigureOutput::write(const std::string &name, const std::string &content, std::size_t rows) {
    write_file_atomic(dir_ / name, content);
    manifest_["files"].push_back({{"name", name}, {"sha256", util::sha256_hex(content)}, {"rows", rows}, {"bytes", content.size()}});
}

fs::path FigureOutput::finish() {
    manifest_["created_utc"] = fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(std::chrono::system_clock::now())));
    const auto path          = dir_ / "manifest.json";
    write_file_atomic(path, manifest_.dump(2) + "\n");
    return path;
}

} // namespace tpg
