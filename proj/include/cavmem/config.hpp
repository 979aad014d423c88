#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cavmem/model.hpp"
#include "cavmem/protocol.hpp"
#include "cavmem/units.hpp"

namespace cavmem {

// Line-based `key = value` configuration, `#` comments, dotted section
// prefixes (`ensemble.gamma_inh_mhz = 10`). Keys with an `_mhz` suffix are
// frequencies in MHz interpreted per `units.angular` (true: value is an
// angular rate, Mrad/s; false: cycle MHz, multiplied by 2 pi). Keys with an
// `_us` suffix are times in microseconds. Parse errors carry line numbers.
struct ConfigMap {
    struct Entry {
        std::string value;
        int line = -1;
    };
    std::map<std::string, Entry> entries;
    std::string source_text;  // the raw bytes, for hashing

    bool has(const std::string& key) const;
    int line_of(const std::string& key) const;  // -1 when absent

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key) const;
    long long get_int(const std::string& key, long long fallback) const;
    bool get_bool(const std::string& key) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_double_list(const std::string& key) const;  // comma-split
};

ConfigMap parse_config_text(const std::string& text);
ConfigMap load_config(const std::filesystem::path& path);

// The frequency convention declared by `units.angular` (default true).
FrequencyConvention config_convention(const ConfigMap& cm);

// Builders for the domain structures; each throws ConfigError (with the
// offending key's line when there is one) for missing or inconsistent keys.
EnsembleParams ensemble_from_config(const ConfigMap& cm);
CavityParams cavity_from_config(const ConfigMap& cm);
ProtocolConfig protocol_from_config(const ConfigMap& cm);

struct SpectrumGrid {
    std::vector<double> omegas;  // rad/s
    std::vector<double> kappas;  // rad/s
};
SpectrumGrid spectrum_grid_from_config(const ConfigMap& cm);

struct SweepSpec {
    SweepVariable variable = SweepVariable::Kappa;
    std::vector<double> values;  // internal units (rad/s for rates)
};
SweepSpec sweep_from_config(const ConfigMap& cm);

struct DesignInputs {
    EnsembleParams ensemble;
    double pulse_duration = 0.0;  // s
    double tau1 = 0.0, tau2 = 0.0;
    double t1 = 0.0;
    double phase_velocity = 0.0;            // m/s
    std::optional<double> length;           // m
    std::optional<double> wavelength;       // m
    std::optional<double> finesse_override; // measured finesse, replaces pi*c/(2 L kappa)
};
DesignInputs design_from_config(const ConfigMap& cm);

}  // namespace cavmem
