#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>

#include "tpg/fock/state.hpp"

namespace tpg {

/// Binary state container "TPGS".
///   magic "TPGS" | u16 version | u16 mode count | u32 cutoff per mode | payload
/// version 1 payload: f64 (re, im) pairs for every basis index in order.
/// version 2 payload: u64 nonzero count, then (u64 index, f64 re, f64 im) per nonzero.
/// All integers and floats little-endian. A sidecar "<file>.json" records labels,
/// parameters, norm and the SHA-256 of the binary file.
enum class SnapshotEncoding { Auto, Dense, Sparse };

inline constexpr std::uint16_t snapshot_dense_version  = 1;
inline constexpr std::uint16_t snapshot_sparse_version = 2;

std::filesystem::path snapshot_sidecar(const std::filesystem::path &path);

void write_snapshot(const std::filesystem::path &path, const StateVector &psi, const nlohmann::json &parameters = nlohmann::json::object(),
                    SnapshotEncoding encoding = SnapshotEncoding::Auto);

/// Reads a snapshot; verifies the sidecar checksum when the sidecar exists and
/// throws CorruptDataError on any mismatch.
StateVector read_snapshot(const std::filesystem::path &path);

/// Sidecar contents (empty object when absent).
nlohmann::json read_snapshot_manifest(const std::filesystem::path &path);

} // namespace tpg
