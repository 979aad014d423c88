#include "cavmem/config.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cavmem/errors.hpp"

namespace cavmem {

namespace {

const std::array<const char*, 47> kKnownKeys = {
    "units.angular",
    "ensemble.g_mhz",
    "ensemble.collective_g_mhz",
    "ensemble.n_spins",
    "ensemble.gamma_inh_mhz",
    "ensemble.gamma_h_mhz",
    "ensemble.distribution",
    "ensemble.center_offset_mhz",
    "cavity.kappa_mhz",
    "cavity.kappa_int_mhz",
    "cavity.omega_r_mhz",
    "cavity.length_m",
    "cavity.phase_velocity_m_per_s",
    "cavity.wavelength_m",
    "bins.m",
    "bins.p",
    "protocol.pulse_duration_us",
    "protocol.pulse_amplitude",
    "protocol.tau1_us",
    "protocol.tau2_us",
    "protocol.delta_mhz",
    "protocol.detune_on_us",
    "protocol.detune_off_us",
    "protocol.echo_window_halfwidth_us",
    "protocol.dt_us",
    "protocol.t1_us",
    "protocol.t2_us",
    "protocol.finesse",
    "spectrum.omega_min_mhz",
    "spectrum.omega_max_mhz",
    "spectrum.omega_points",
    "spectrum.kappa_min_mhz",
    "spectrum.kappa_max_mhz",
    "spectrum.kappa_points",
    "spectrum.kappa_list_mhz",
    "sweep.variable",
    "sweep.values",
    "sweep.min",
    "sweep.max",
    "sweep.points",
    "design.pulse_duration_us",
    "design.tau1_us",
    "design.tau2_us",
    "design.t1_us",
    "design.finesse",
    "validate.strict",  // reserved; accepted and ignored
    "protocol.jobs",    // reserved; accepted and ignored (--jobs is the knob)
};

constexpr double kDefaultPhaseVelocity = 2.998e8;  // m/s

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool known_key(const std::string& key) {
    return std::find_if(kKnownKeys.begin(), kKnownKeys.end(), [&](const char* k) {
               return key == k;
           }) != kKnownKeys.end();
}

double parse_double(const std::string& key, const std::string& value, int line) {
    double out = 0.0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    const auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc() || res.ptr != last || !std::isfinite(out))
        throw ConfigError("key '" + key + "': not a finite number: '" + value + "'",
                          line);
    return out;
}

long long parse_int(const std::string& key, const std::string& value, int line) {
    long long out = 0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    const auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc() || res.ptr != last)
        throw ConfigError("key '" + key + "': not an integer: '" + value + "'", line);
    return out;
}

[[noreturn]] void missing(const std::string& key) {
    throw ConfigError("missing required key '" + key + "'");
}

}  // namespace

bool ConfigMap::has(const std::string& key) const {
    return entries.count(key) != 0;
}

int ConfigMap::line_of(const std::string& key) const {
    const auto it = entries.find(key);
    return it == entries.end() ? -1 : it->second.line;
}

std::string ConfigMap::get_string(const std::string& key) const {
    const auto it = entries.find(key);
    if (it == entries.end()) missing(key);
    return it->second.value;
}

std::string ConfigMap::get_string(const std::string& key,
                                  const std::string& fallback) const {
    const auto it = entries.find(key);
    return it == entries.end() ? fallback : it->second.value;
}

double ConfigMap::get_double(const std::string& key) const {
    const auto it = entries.find(key);
    if (it == entries.end()) missing(key);
    return parse_double(key, it->second.value, it->second.line);
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
    const auto it = entries.find(key);
    if (it == entries.end()) return fallback;
    return parse_double(key, it->second.value, it->second.line);
}

long long ConfigMap::get_int(const std::string& key) const {
    const auto it = entries.find(key);
    if (it == entries.end()) missing(key);
    return parse_int(key, it->second.value, it->second.line);
}

long long ConfigMap::get_int(const std::string& key, long long fallback) const {
    const auto it = entries.find(key);
    if (it == entries.end()) return fallback;
    return parse_int(key, it->second.value, it->second.line);
}

bool ConfigMap::get_bool(const std::string& key) const {
    const auto it = entries.find(key);
    if (it == entries.end()) missing(key);
    if (it->second.value == "true") return true;
    if (it->second.value == "false") return false;
    throw ConfigError("key '" + key + "': expected true or false, got '" +
                          it->second.value + "'",
                      it->second.line);
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
    return has(key) ? get_bool(key) : fallback;
}

std::vector<double> ConfigMap::get_double_list(const std::string& key) const {
    const auto it = entries.find(key);
    if (it == entries.end()) missing(key);
    const std::string& value = it->second.value;
    const int line = it->second.line;
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= value.size()) {
        const std::size_t comma = value.find(',', pos);
        const std::string item =
            trim(comma == std::string::npos ? value.substr(pos)
                                            : value.substr(pos, comma - pos));
        if (item.empty())
            throw ConfigError("key '" + key + "': empty list element", line);
        out.push_back(parse_double(key, item, line));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

ConfigMap parse_config_text(const std::string& text) {
    ConfigMap cm;
    cm.source_text = text;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string line = nl == std::string::npos ? text.substr(pos)
                                                   : text.substr(pos, nl - pos);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (!line.empty()) {
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("expected 'key = value'", line_no);
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw ConfigError("empty key", line_no);
            if (value.empty())
                throw ConfigError("key '" + key + "': empty value", line_no);
            if (key.find_first_not_of(
                    "abcdefghijklmnopqrstuvwxyz"
                    "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_.") != std::string::npos)
                throw ConfigError("key '" + key + "': invalid character", line_no);
            if (!known_key(key))
                throw ConfigError("unknown key '" + key + "'", line_no);
            if (cm.entries.count(key))
                throw ConfigError("duplicate key '" + key + "'", line_no);
            cm.entries.emplace(key, ConfigMap::Entry{value, line_no});
        }
        if (nl == std::string::npos) break;
        pos = nl + 1;
    }
    return cm;
}

ConfigMap load_config(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read config file: " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

FrequencyConvention config_convention(const ConfigMap& cm) {
    FrequencyConvention conv;
    conv.unit = cm.get_bool("units.angular", true)
                    ? FrequencyUnit::AngularRadPerSec
                    : FrequencyUnit::CyclesHzTimes2Pi;
    return conv;
}

EnsembleParams ensemble_from_config(const ConfigMap& cm) {
    const auto conv = config_convention(cm);
    EnsembleParams e;
    if (!cm.has("ensemble.n_spins")) missing("ensemble.n_spins");
    e.n_spins = cm.get_double("ensemble.n_spins");
    const bool has_g = cm.has("ensemble.g_mhz");
    const bool has_gn = cm.has("ensemble.collective_g_mhz");
    if (has_g == has_gn)
        throw ConfigError(
            "specify exactly one of ensemble.g_mhz and ensemble.collective_g_mhz");
    if (has_g) {
        e.g = conv.to_internal(cm.get_double("ensemble.g_mhz"));
    } else {
        if (!(e.n_spins > 0.0))
            throw ConfigError("ensemble.n_spins must be > 0",
                              cm.line_of("ensemble.n_spins"));
        e.g = conv.to_internal(cm.get_double("ensemble.collective_g_mhz")) /
              std::sqrt(e.n_spins);
    }
    if (!cm.has("ensemble.gamma_inh_mhz")) missing("ensemble.gamma_inh_mhz");
    e.gamma_inh = conv.to_internal(cm.get_double("ensemble.gamma_inh_mhz"));
    e.gamma_h = conv.to_internal(cm.get_double("ensemble.gamma_h_mhz", 0.0));
    e.center_offset = conv.to_internal(cm.get_double("ensemble.center_offset_mhz", 0.0));
    const std::string dist = cm.get_string("ensemble.distribution", "lorentzian");
    if (dist == "lorentzian") {
        e.dist_kind = DistKind::Lorentzian;
    } else if (dist == "gaussian") {
        e.dist_kind = DistKind::Gaussian;
    } else {
        throw ConfigError("ensemble.distribution: expected lorentzian or gaussian, got '" +
                              dist + "'",
                          cm.line_of("ensemble.distribution"));
    }
    return e;
}

CavityParams cavity_from_config(const ConfigMap& cm) {
    const auto conv = config_convention(cm);
    CavityParams c;
    if (!cm.has("cavity.kappa_mhz")) missing("cavity.kappa_mhz");
    c.kappa = conv.to_internal(cm.get_double("cavity.kappa_mhz"));
    c.kappa_int = conv.to_internal(cm.get_double("cavity.kappa_int_mhz", 0.0));
    c.omega_r = conv.to_internal(cm.get_double("cavity.omega_r_mhz", 0.0));
    const bool has_len = cm.has("cavity.length_m");
    const bool has_wl = cm.has("cavity.wavelength_m");
    if (has_wl && !has_len)
        throw ConfigError("cavity.wavelength_m requires cavity.length_m",
                          cm.line_of("cavity.wavelength_m"));
    if (has_len) {
        CavityGeometry geo;
        geo.length = cm.get_double("cavity.length_m");
        geo.phase_velocity =
            cm.get_double("cavity.phase_velocity_m_per_s", kDefaultPhaseVelocity);
        if (has_wl) geo.wavelength = cm.get_double("cavity.wavelength_m");
        c.geometry = geo;
    }
    return c;
}

ProtocolConfig protocol_from_config(const ConfigMap& cm) {
    const auto conv = config_convention(cm);
    ProtocolConfig p;
    p.ensemble = ensemble_from_config(cm);
    p.cavity = cavity_from_config(cm);
    const long long m = cm.get_int("bins.m", 2000);
    if (m < 1) throw ConfigError("bins.m must be >= 1", cm.line_of("bins.m"));
    p.bins_m = static_cast<std::size_t>(m);
    p.truncation_p = cm.get_double("bins.p", 0.01);
    if (!cm.has("protocol.pulse_duration_us")) missing("protocol.pulse_duration_us");
    p.pulse_duration =
        microseconds_to_seconds(cm.get_double("protocol.pulse_duration_us"));
    p.pulse_amplitude = cm.get_double("protocol.pulse_amplitude", 1.0);
    if (!cm.has("protocol.tau1_us")) missing("protocol.tau1_us");
    p.tau1 = microseconds_to_seconds(cm.get_double("protocol.tau1_us"));
    if (!cm.has("protocol.tau2_us")) missing("protocol.tau2_us");
    p.tau2 = microseconds_to_seconds(cm.get_double("protocol.tau2_us"));
    p.detune_delta = conv.to_internal(cm.get_double("protocol.delta_mhz", 0.0));
    const bool has_on = cm.has("protocol.detune_on_us");
    const bool has_off = cm.has("protocol.detune_off_us");
    if (has_on != has_off)
        throw ConfigError(
            "protocol.detune_on_us and protocol.detune_off_us must appear together");
    if (has_on)
        p.detune_window = std::pair<double, double>{
            microseconds_to_seconds(cm.get_double("protocol.detune_on_us")),
            microseconds_to_seconds(cm.get_double("protocol.detune_off_us"))};
    p.echo_window_halfwidth = microseconds_to_seconds(
        cm.get_double("protocol.echo_window_halfwidth_us", 0.0));
    p.dt = microseconds_to_seconds(cm.get_double("protocol.dt_us", 0.0));
    if (cm.has("protocol.t1_us"))
        p.t1 = microseconds_to_seconds(cm.get_double("protocol.t1_us"));
    if (cm.has("protocol.t2_us"))
        p.t2 = microseconds_to_seconds(cm.get_double("protocol.t2_us"));
    if (cm.has("protocol.finesse")) p.finesse = cm.get_double("protocol.finesse");
    return p;
}

namespace {
std::vector<double> linspace(double lo, double hi, long long n,
                             const std::string& what, int line) {
    if (n < 1) throw ConfigError(what + ": points must be >= 1", line);
    if (n > 1 && !(hi > lo))
        throw ConfigError(what + ": max must exceed min", line);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    if (n == 1) {
        out.push_back(lo);
        return out;
    }
    for (long long i = 0; i < n; ++i)
        out.push_back(lo + (hi - lo) * static_cast<double>(i) /
                               static_cast<double>(n - 1));
    return out;
}
}  // namespace

SpectrumGrid spectrum_grid_from_config(const ConfigMap& cm) {
    const auto conv = config_convention(cm);
    SpectrumGrid grid;
    if (!cm.has("spectrum.omega_min_mhz")) missing("spectrum.omega_min_mhz");
    if (!cm.has("spectrum.omega_max_mhz")) missing("spectrum.omega_max_mhz");
    if (!cm.has("spectrum.omega_points")) missing("spectrum.omega_points");
    const auto omegas_mhz = linspace(cm.get_double("spectrum.omega_min_mhz"),
                                     cm.get_double("spectrum.omega_max_mhz"),
                                     cm.get_int("spectrum.omega_points"), "spectrum",
                                     cm.line_of("spectrum.omega_points"));
    for (double w : omegas_mhz) grid.omegas.push_back(conv.to_internal(w));

    const bool has_list = cm.has("spectrum.kappa_list_mhz");
    const bool has_range = cm.has("spectrum.kappa_min_mhz") ||
                           cm.has("spectrum.kappa_max_mhz") ||
                           cm.has("spectrum.kappa_points");
    if (has_list && has_range)
        throw ConfigError(
            "spectrum.kappa_list_mhz conflicts with the kappa range keys",
            cm.line_of("spectrum.kappa_list_mhz"));
    if (has_list) {
        for (double k : cm.get_double_list("spectrum.kappa_list_mhz"))
            grid.kappas.push_back(conv.to_internal(k));
    } else if (has_range) {
        if (!cm.has("spectrum.kappa_min_mhz")) missing("spectrum.kappa_min_mhz");
        if (!cm.has("spectrum.kappa_max_mhz")) missing("spectrum.kappa_max_mhz");
        if (!cm.has("spectrum.kappa_points")) missing("spectrum.kappa_points");
        const auto kappas_mhz = linspace(cm.get_double("spectrum.kappa_min_mhz"),
                                         cm.get_double("spectrum.kappa_max_mhz"),
                                         cm.get_int("spectrum.kappa_points"),
                                         "spectrum kappa",
                                         cm.line_of("spectrum.kappa_points"));
        for (double k : kappas_mhz) grid.kappas.push_back(conv.to_internal(k));
    } else {
        if (!cm.has("cavity.kappa_mhz")) missing("cavity.kappa_mhz");
        grid.kappas.push_back(conv.to_internal(cm.get_double("cavity.kappa_mhz")));
    }
    return grid;
}

SweepSpec sweep_from_config(const ConfigMap& cm) {
    const auto conv = config_convention(cm);
    SweepSpec spec;
    const std::string var = cm.get_string("sweep.variable");
    bool rate_like = true;
    if (var == "kappa") {
        spec.variable = SweepVariable::Kappa;
    } else if (var == "C" || var == "c") {
        spec.variable = SweepVariable::Cooperativity;
        rate_like = false;
    } else if (var == "delta") {
        spec.variable = SweepVariable::Delta;
    } else if (var == "gamma_h") {
        spec.variable = SweepVariable::GammaH;
    } else {
        throw ConfigError("sweep.variable: unknown variable '" + var +
                              "' (expected kappa, C, delta, or gamma_h)",
                          cm.line_of("sweep.variable"));
    }
    const bool has_values = cm.has("sweep.values");
    const bool has_range =
        cm.has("sweep.min") || cm.has("sweep.max") || cm.has("sweep.points");
    if (has_values == has_range)
        throw ConfigError(
            "specify exactly one of sweep.values and the sweep.min/max/points range");
    std::vector<double> raw;
    if (has_values) {
        raw = cm.get_double_list("sweep.values");
    } else {
        if (!cm.has("sweep.min")) missing("sweep.min");
        if (!cm.has("sweep.max")) missing("sweep.max");
        if (!cm.has("sweep.points")) missing("sweep.points");
        raw = linspace(cm.get_double("sweep.min"), cm.get_double("sweep.max"),
                       cm.get_int("sweep.points"), "sweep",
                       cm.line_of("sweep.points"));
    }
    for (double v : raw)
        spec.values.push_back(rate_like ? conv.to_internal(v) : v);
    return spec;
}

DesignInputs design_from_config(const ConfigMap& cm) {
    DesignInputs d;
    d.ensemble = ensemble_from_config(cm);
    if (!cm.has("design.pulse_duration_us")) missing("design.pulse_duration_us");
    d.pulse_duration =
        microseconds_to_seconds(cm.get_double("design.pulse_duration_us"));
    if (!cm.has("design.tau1_us")) missing("design.tau1_us");
    d.tau1 = microseconds_to_seconds(cm.get_double("design.tau1_us"));
    if (!cm.has("design.tau2_us")) missing("design.tau2_us");
    d.tau2 = microseconds_to_seconds(cm.get_double("design.tau2_us"));
    if (!cm.has("design.t1_us")) missing("design.t1_us");
    d.t1 = microseconds_to_seconds(cm.get_double("design.t1_us"));
    d.phase_velocity =
        cm.get_double("cavity.phase_velocity_m_per_s", kDefaultPhaseVelocity);
    if (cm.has("cavity.length_m")) d.length = cm.get_double("cavity.length_m");
    if (cm.has("cavity.wavelength_m"))
        d.wavelength = cm.get_double("cavity.wavelength_m");
    if (!d.length && !d.wavelength)
        throw ConfigError(
            "design requires cavity.wavelength_m or cavity.length_m");
    if (cm.has("design.finesse")) d.finesse_override = cm.get_double("design.finesse");
    return d;
}

}  // namespace cavmem
