#include "cavmem/manifest.hpp"

#include <cstdio>
#include <ctime>

#include <json.hpp>

#include "cavmem/csv.hpp"

namespace cavmem {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fnv1a64_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

std::string utc_timestamp_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string manifest_json(const RunManifest& m) {
    nlohmann::ordered_json j;
    j["command"] = m.command;
    j["config_path"] = m.config_path;
    j["config_hash"] = m.config_hash;
    j["tool_version"] = m.tool_version;
    j["timestamp"] = m.timestamp;
    nlohmann::ordered_json outs = nlohmann::ordered_json::array();
    for (const auto& [path, hash] : m.outputs) {
        nlohmann::ordered_json o;
        o["path"] = path;
        o["hash"] = hash;
        outs.push_back(o);
    }
    j["outputs"] = outs;
    nlohmann::ordered_json diag = nlohmann::ordered_json::object();
    if (m.dt) diag["dt"] = format_double(*m.dt);
    if (m.bins_m) diag["bins_m"] = *m.bins_m;
    if (m.truncation_p) diag["truncation_p"] = format_double(*m.truncation_p);
    if (m.imbalance) diag["imbalance"] = format_double(*m.imbalance);
    j["diagnostics"] = diag;
    j["warnings"] = m.warnings;
    return j.dump(2) + "\n";
}

}  // namespace cavmem
