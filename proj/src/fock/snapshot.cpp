#include "tpg/fock/snapshot.hpp"

#include <bit>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "tpg/errors.hpp"
#include "tpg/util/sha256.hpp"

namespace tpg {

namespace fs = std::filesystem;

namespace {

template<class UInt>
void put(std::string &buf, UInt v) {
    for(std::size_t i = 0; i < sizeof(UInt); ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
void put_f64(std::string &buf, double x) { put(buf, std::bit_cast<std::uint64_t>(x)); }

class Reader {
  public:
    explicit Reader(std::string data) : data_(std::move(data)) {}
    template<class UInt>
    UInt get() {
        if(pos_ + sizeof(UInt) > data_.size()) throw CorruptDataError("snapshot truncated");
        UInt v = 0;
        for(std::size_t i = 0; i < sizeof(UInt); ++i) v |= static_cast<UInt>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += sizeof(UInt);
        return v;
    }
    double get_f64() { return std::bit_cast<double>(get<std::uint64_t>()); }
    bool   exhausted() const { return pos_ == data_.size(); }
    std::string_view take(std::size_t n) {
        if(pos_ + n > data_.size()) throw CorruptDataError("snapshot truncated");
        auto s = std::string_view(data_).substr(pos_, n);
        pos_ += n;
        return s;
    }

  private:
    std::string data_;
    std::size_t pos_ = 0;
};

std::string slurp(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if(!in) throw Error(fmt::format("cannot open {}", path.string()));
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

fs::path snapshot_sidecar(const fs::path &path) { return fs::path(path.string() + ".json"); }

void write_snapshot(const fs::path &path, const StateVector &psi, const nlohmann::json &parameters, SnapshotEncoding encoding) {
    const auto &layout = psi.layout();
    const auto  dense_bytes  = static_cast<double>(layout.dimension()) * 16.0;
    const auto  sparse_bytes = 8.0 + static_cast<double>(psi.nonzeros()) * 24.0;
    const bool  dense = encoding == SnapshotEncoding::Dense || (encoding == SnapshotEncoding::Auto && dense_bytes <= sparse_bytes);

    std::string buf = "TPGS";
    put<std::uint16_t>(buf, dense ? snapshot_dense_version : snapshot_sparse_version);
    put<std::uint16_t>(buf, static_cast<std::uint16_t>(layout.size()));
    for(const auto &m : layout.modes()) put<std::uint32_t>(buf, static_cast<std::uint32_t>(m.cutoff));
    if(dense) {
        auto   entries = psi.entries();
        size_t k       = 0;
        for(index_t i = 0; i < layout.dimension(); ++i) {
            cplx a{};
            if(k < entries.size() && entries[k].index == i) a = entries[k++].amplitude;
            put_f64(buf, a.real());
            put_f64(buf, a.imag());
        }
    } else {
        put<std::uint64_t>(buf, psi.nonzeros());
        for(const auto &e : psi.entries()) {
            put<std::uint64_t>(buf, static_cast<std::uint64_t>(e.index));
            put_f64(buf, e.amplitude.real());
            put_f64(buf, e.amplitude.imag());
        }
    }

    fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if(!out) throw Error(fmt::format("cannot write {}", tmp.string()));
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
    fs::rename(tmp, path);

    nlohmann::json side;
    side["format"]         = "TPGS";
    side["format_version"] = dense ? snapshot_dense_version : snapshot_sparse_version;
    side["modes"]          = to_string(layout.labels());
    side["cutoffs"]        = nlohmann::json::array();
    for(const auto &m : layout.modes()) side["cutoffs"].push_back(m.cutoff);
    side["nonzeros"]   = psi.nonzeros();
    side["norm"]       = psi.norm();
    side["sha256"]     = util::sha256_hex(std::string_view(buf));
    side["parameters"] = parameters;
    const fs::path side_path = snapshot_sidecar(path);
    const fs::path side_tmp  = side_path.string() + ".tmp";
    {
        std::ofstream out(side_tmp, std::ios::trunc);
        out << side.dump(2) << '\n';
    }
    fs::rename(side_tmp, side_path);
}

nlohmann::json read_snapshot_manifest(const fs::path &path) {
    const auto side = snapshot_sidecar(path);
    if(!fs::exists(side)) return nlohmann::json::object();
    try {
        return nlohmann::json::parse(slurp(side));
    } catch(const nlohmann::json::exception &e) {
        throw CorruptDataError(fmt::format("snapshot manifest {} unreadable: {}", side.string(), e.what()));
    }
}

StateVector read_snapshot(const fs::path &path) {
    std::string    raw  = slurp(path);
    nlohmann::json side = read_snapshot_manifest(path);
    if(side.contains("sha256") && side["sha256"].get<std::string>() != util::sha256_hex(std::string_view(raw)))
        throw CorruptDataError(fmt::format("snapshot {} does not match its recorded checksum", path.string()));

    Reader r(std::move(raw));
    if(r.take(4) != "TPGS") throw CorruptDataError(fmt::format("{} is not a TPGS snapshot", path.string()));
    const auto version = r.get<std::uint16_t>();
    const auto count   = r.get<std::uint16_t>();
    if(count > 4) throw CorruptDataError("snapshot declares more than four modes");

    std::string labels;
    if(side.contains("modes")) labels = side["modes"].get<std::string>();
    else labels = std::string("ABCP").substr(0, count);
    if(labels.size() != count) throw CorruptDataError("snapshot mode labels do not match mode count");

    std::vector<ModeSpec> specs;
    for(std::uint16_t i = 0; i < count; ++i) {
        const auto d = r.get<std::uint32_t>();
        specs.push_back({parse_mode(labels[i]), static_cast<int>(d)});
    }
    ModeLayout                      layout(std::move(specs));
    std::vector<StateVector::Entry> entries;
    if(version == snapshot_dense_version) {
        for(index_t i = 0; i < layout.dimension(); ++i) {
            const double re = r.get_f64(), im = r.get_f64();
            if(re != 0 || im != 0) entries.push_back({i, {re, im}});
        }
    } else if(version == snapshot_sparse_version) {
        const auto nnz = r.get<std::uint64_t>();
        for(std::uint64_t k = 0; k < nnz; ++k) {
            const auto   idx = static_cast<index_t>(r.get<std::uint64_t>());
            const double re = r.get_f64(), im = r.get_f64();
            if(idx < 0 || idx >= layout.dimension()) throw CorruptDataError("snapshot index outside layout");
            entries.push_back({idx, {re, im}});
        }
    } else {
        throw CorruptDataError(fmt::format("unsupported TPGS version {}", version));
    }
    if(!r.exhausted()) throw CorruptDataError("trailing bytes after snapshot payload");
    return StateVector(std::move(layout), std::move(entries));
}

} // namespace tpg
