#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cavmem {

inline constexpr const char* kToolVersion = "1.0.0";

std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

// Machine-readable record of one command invocation: what ran, on which
// configuration (by content hash), what it wrote (by content hash), and the
// convergence settings that shaped the numbers. Output hashes are bit-stable
// for identical config + version; the timestamp is the only varying field.
struct RunManifest {
    std::string command;
    std::string config_path;
    std::string config_hash;
    std::string tool_version = kToolVersion;
    std::string timestamp;  // UTC, ISO 8601
    std::vector<std::pair<std::string, std::string>> outputs;  // (path, hash)
    std::optional<double> dt;           // s
    std::optional<std::uint64_t> bins_m;
    std::optional<double> truncation_p;
    std::optional<double> imbalance;    // ledger imbalance / input energy
    std::vector<std::string> warnings;
};

std::string utc_timestamp_now();

// Serialize with a fixed field order (deterministic apart from timestamp).
std::string manifest_json(const RunManifest& m);

}  // namespace cavmem
