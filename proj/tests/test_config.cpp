#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "cavmem/config.hpp"
#include "cavmem/errors.hpp"
#include "cavmem/units.hpp"
#include "doctest.h"

using namespace cavmem;

namespace {

int error_line(const std::string& text) {
    try {
        parse_config_text(text);
    } catch (const ConfigError& e) {
        return e.line;
    }
    return -2;
}

std::string error_message(const std::string& text) {
    try {
        parse_config_text(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

template <typename Fn>
std::string builder_error(const std::string& text, Fn&& build) {
    try {
        build(parse_config_text(text));
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

const std::string kEnsembleBlock =
    "ensemble.g_mhz = 0.9\n"
    "ensemble.n_spins = 100\n"
    "ensemble.gamma_inh_mhz = 27\n";

}  // namespace

TEST_CASE("parser: comments, blanks, sections, line numbers") {
    const std::string text =
        "# full-line comment\n"
        "\n"
        "  units.angular = true   # trailing comment\n"
        "bins.m = 500\r\n"
        "bins.p = 0.02\n";
    auto cm = parse_config_text(text);
    CHECK(cm.entries.size() == 3);
    CHECK(cm.source_text == text);
    CHECK(cm.has("bins.m"));
    CHECK_FALSE(cm.has("bins.q"));
    CHECK(cm.line_of("units.angular") == 3);
    CHECK(cm.line_of("bins.m") == 4);
    CHECK(cm.line_of("missing") == -1);
    CHECK(cm.get_int("bins.m") == 500);  // CR stripped before parsing
    CHECK(cm.get_double("bins.p") == 0.02);
    CHECK(cm.get_bool("units.angular") == true);
}

TEST_CASE("parser: malformed lines carry their line number") {
    CHECK(error_line("bins.m = 5\nbins.m = 6\n") == 2);
    CHECK(error_message("bins.m = 5\nbins.m = 6\n").find("duplicate") !=
          std::string::npos);
    CHECK(error_message("bins.m = 5\nbins.m = 6\n").find("line 2") !=
          std::string::npos);

    CHECK(error_message("no.such.key = 1\n").find("unknown key") != std::string::npos);
    CHECK(error_line("\njust words\n") == 2);
    CHECK(error_message("just words\n").find("key = value") != std::string::npos);
    CHECK(error_message("bins.m =\n").find("empty value") != std::string::npos);
    CHECK(error_message("bad key = 1\n").find("invalid character") !=
          std::string::npos);
    CHECK(error_message("= 5\n").find("empty key") != std::string::npos);
}

TEST_CASE("typed accessors reject malformed values with the key's line") {
    auto cm = parse_config_text("units.angular = yes\nbins.m = 2.5\nbins.p = abc\n");
    CHECK_THROWS_WITH_AS(cm.get_bool("units.angular"),
                         doctest::Contains("expected true or false"), ConfigError);
    CHECK_THROWS_WITH_AS(cm.get_int("bins.m"), doctest::Contains("not an integer"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(cm.get_double("bins.p"),
                         doctest::Contains("not a finite number"), ConfigError);
    try {
        cm.get_double("bins.p");
    } catch (const ConfigError& e) {
        CHECK(e.line == 3);
    }
    CHECK_THROWS_WITH_AS(cm.get_double("absent"), doctest::Contains("missing"),
                         ConfigError);
    CHECK(cm.get_double("absent", 7.5) == 7.5);
    CHECK(cm.get_string("absent", "dflt") == "dflt");
}

TEST_CASE("list accessor splits on commas and rejects empty elements") {
    auto cm = parse_config_text("spectrum.kappa_list_mhz = 1, 2.5 ,3e1\n");
    const auto v = cm.get_double_list("spectrum.kappa_list_mhz");
    REQUIRE(v.size() == 3);
    CHECK(v[0] == 1.0);
    CHECK(v[1] == 2.5);
    CHECK(v[2] == 30.0);
    auto bad = parse_config_text("spectrum.kappa_list_mhz = 1,,2\n");
    CHECK_THROWS_WITH_AS(bad.get_double_list("spectrum.kappa_list_mhz"),
                         doctest::Contains("empty list element"), ConfigError);
}

TEST_CASE("frequency convention: angular rates vs cycle MHz") {
    const std::string body = kEnsembleBlock + "cavity.kappa_mhz = 3\n";
    auto angular = parse_config_text("units.angular = true\n" + body);
    auto cycles = parse_config_text("units.angular = false\n" + body);
    auto dflt = parse_config_text(body);  // default: angular

    CHECK(ensemble_from_config(angular).gamma_inh == 27.0 * 1e6);
    CHECK(ensemble_from_config(dflt).gamma_inh == 27.0 * 1e6);
    CHECK(ensemble_from_config(cycles).gamma_inh ==
          27.0 * 2.0 * std::numbers::pi * 1e6);
    CHECK(cavity_from_config(cycles).kappa == 3.0 * 2.0 * std::numbers::pi * 1e6);
    CHECK(config_convention(cycles).from_internal(
              config_convention(cycles).to_internal(27.0)) ==
          doctest::Approx(27.0).epsilon(1e-14));
}

TEST_CASE("ensemble: direct vs collective coupling, exclusively") {
    auto direct = parse_config_text(kEnsembleBlock);
    CHECK(ensemble_from_config(direct).g == 0.9 * 1e6);

    auto collective = parse_config_text(
        "ensemble.collective_g_mhz = 7\n"
        "ensemble.n_spins = 100\n"
        "ensemble.gamma_inh_mhz = 10\n");
    const auto e = ensemble_from_config(collective);
    CHECK(e.g == 7.0 * 1e6 / 10.0);  // g sqrt(N) preserved
    CHECK(e.g * e.g * e.n_spins == doctest::Approx(49e12).epsilon(1e-14));

    const auto both_err = builder_error(
        kEnsembleBlock + "ensemble.collective_g_mhz = 7\n",
        [](const ConfigMap& cm) { return ensemble_from_config(cm); });
    CHECK(both_err.find("exactly one") != std::string::npos);
    const auto neither_err = builder_error(
        "ensemble.n_spins = 100\nensemble.gamma_inh_mhz = 10\n",
        [](const ConfigMap& cm) { return ensemble_from_config(cm); });
    CHECK(neither_err.find("exactly one") != std::string::npos);
}

TEST_CASE("ensemble: distribution names and defaults") {
    auto cm = parse_config_text(kEnsembleBlock +
                                "ensemble.gamma_h_mhz = 0.005\n"
                                "ensemble.center_offset_mhz = 0.1\n"
                                "ensemble.distribution = gaussian\n");
    const auto e = ensemble_from_config(cm);
    CHECK(e.dist_kind == DistKind::Gaussian);
    CHECK(e.gamma_h == 0.005 * 1e6);
    CHECK(e.center_offset == 0.1 * 1e6);

    auto dflt = ensemble_from_config(parse_config_text(kEnsembleBlock));
    CHECK(dflt.dist_kind == DistKind::Lorentzian);
    CHECK(dflt.gamma_h == 0.0);
    CHECK(dflt.center_offset == 0.0);

    const auto err = builder_error(
        kEnsembleBlock + "ensemble.distribution = cauchy\n",
        [](const ConfigMap& cm) { return ensemble_from_config(cm); });
    CHECK(err.find("lorentzian or gaussian") != std::string::npos);
}

TEST_CASE("cavity: geometry keys and wavelength dependency") {
    auto cm = parse_config_text(
        "cavity.kappa_mhz = 4.9\n"
        "cavity.kappa_int_mhz = 0.2\n"
        "cavity.omega_r_mhz = 1.5\n"
        "cavity.length_m = 0.02\n"
        "cavity.wavelength_m = 0.03\n");
    const auto c = cavity_from_config(cm);
    CHECK(c.kappa == 4.9 * 1e6);
    CHECK(c.kappa_int == 0.2 * 1e6);
    CHECK(c.omega_r == 1.5 * 1e6);
    REQUIRE(c.geometry.has_value());
    CHECK(c.geometry->length == 0.02);
    CHECK(c.geometry->phase_velocity == 2.998e8);  // default
    REQUIRE(c.geometry->wavelength.has_value());
    CHECK(*c.geometry->wavelength == 0.03);

    const auto err = builder_error(
        "cavity.kappa_mhz = 4.9\ncavity.wavelength_m = 0.03\n",
        [](const ConfigMap& cm2) { return cavity_from_config(cm2); });
    CHECK(err.find("length") != std::string::npos);
}

TEST_CASE("protocol: every key lands in the right field and unit") {
    auto cm = parse_config_text(kEnsembleBlock +
                                "cavity.kappa_mhz = 3\n"
                                "bins.m = 1234\n"
                                "bins.p = 0.02\n"
                                "protocol.pulse_duration_us = 3.5\n"
                                "protocol.pulse_amplitude = 2\n"
                                "protocol.tau1_us = 26\n"
                                "protocol.tau2_us = 27\n"
                                "protocol.delta_mhz = 300\n"
                                "protocol.detune_on_us = 37\n"
                                "protocol.detune_off_us = 69\n"
                                "protocol.echo_window_halfwidth_us = 9\n"
                                "protocol.dt_us = 0.001\n"
                                "protocol.t1_us = 10000\n"
                                "protocol.t2_us = 20000\n"
                                "protocol.finesse = 5000\n");
    const auto p = protocol_from_config(cm);
    CHECK(p.ensemble.g == 0.9 * 1e6);
    CHECK(p.cavity.kappa == 3.0 * 1e6);
    CHECK(p.bins_m == 1234);
    CHECK(p.truncation_p == 0.02);
    CHECK(p.pulse_duration == microseconds_to_seconds(3.5));
    CHECK(p.pulse_amplitude == 2.0);
    CHECK(p.tau1 == microseconds_to_seconds(26.0));
    CHECK(p.tau2 == microseconds_to_seconds(27.0));
    CHECK(p.detune_delta == 300.0 * 1e6);
    REQUIRE(p.detune_window.has_value());
    CHECK(p.detune_window->first == microseconds_to_seconds(37.0));
    CHECK(p.detune_window->second == microseconds_to_seconds(69.0));
    CHECK(p.echo_window_halfwidth == microseconds_to_seconds(9.0));
    CHECK(p.dt == microseconds_to_seconds(0.001));
    REQUIRE(p.t1.has_value());
    CHECK(*p.t1 == microseconds_to_seconds(10000.0));
    REQUIRE(p.t2.has_value());
    CHECK(*p.t2 == microseconds_to_seconds(20000.0));
    REQUIRE(p.finesse.has_value());
    CHECK(*p.finesse == 5000.0);
    CHECK(microseconds_to_seconds(1.0) == 1e-6);
}

TEST_CASE("protocol: defaults and paired detune keys") {
    auto cm = parse_config_text(kEnsembleBlock +
                                "cavity.kappa_mhz = 3\n"
                                "protocol.pulse_duration_us = 1\n"
                                "protocol.tau1_us = 10\n"
                                "protocol.tau2_us = 10\n");
    const auto p = protocol_from_config(cm);
    CHECK(p.bins_m == 2000);
    CHECK(p.truncation_p == 0.01);
    CHECK(p.pulse_amplitude == 1.0);
    CHECK(p.detune_delta == 0.0);
    CHECK_FALSE(p.detune_window.has_value());
    CHECK(p.echo_window_halfwidth == 0.0);
    CHECK(p.dt == 0.0);
    CHECK_FALSE(p.t1.has_value());
    CHECK_FALSE(p.t2.has_value());
    CHECK_FALSE(p.finesse.has_value());

    const auto err = builder_error(
        kEnsembleBlock +
            "cavity.kappa_mhz = 3\n"
            "protocol.pulse_duration_us = 1\n"
            "protocol.tau1_us = 10\n"
            "protocol.tau2_us = 10\n"
            "protocol.detune_on_us = 12\n",
        [](const ConfigMap& cm2) { return protocol_from_config(cm2); });
    CHECK(err.find("together") != std::string::npos);

    const auto miss = builder_error(
        kEnsembleBlock + "cavity.kappa_mhz = 3\nprotocol.tau1_us = 10\n",
        [](const ConfigMap& cm2) { return protocol_from_config(cm2); });
    CHECK(miss.find("pulse_duration_us") != std::string::npos);
}

TEST_CASE("spectrum grid: inclusive endpoints, lists, conflicts") {
    auto cm = parse_config_text(
        "spectrum.omega_min_mhz = -40\n"
        "spectrum.omega_max_mhz = 40\n"
        "spectrum.omega_points = 2001\n"
        "spectrum.kappa_list_mhz = 4.9, 10, 360\n");
    const auto grid = spectrum_grid_from_config(cm);
    REQUIRE(grid.omegas.size() == 2001);
    CHECK(grid.omegas.front() == -40.0 * 1e6);
    CHECK(grid.omegas.back() == 40.0 * 1e6);
    CHECK(grid.omegas[1000] == 0.0);  // exact midpoint
    REQUIRE(grid.kappas.size() == 3);
    CHECK(grid.kappas[0] == 4.9 * 1e6);
    CHECK(grid.kappas[1] == 10.0 * 1e6);
    CHECK(grid.kappas[2] == 360.0 * 1e6);

    auto single = parse_config_text(
        "spectrum.omega_min_mhz = 5\n"
        "spectrum.omega_max_mhz = 9\n"
        "spectrum.omega_points = 1\n"
        "cavity.kappa_mhz = 2\n");
    const auto g1 = spectrum_grid_from_config(single);
    REQUIRE(g1.omegas.size() == 1);
    CHECK(g1.omegas[0] == 5.0 * 1e6);
    REQUIRE(g1.kappas.size() == 1);  // falls back to the cavity linewidth
    CHECK(g1.kappas[0] == 2.0 * 1e6);

    const auto zero = builder_error(
        "spectrum.omega_min_mhz = -1\n"
        "spectrum.omega_max_mhz = 1\n"
        "spectrum.omega_points = 0\n",
        [](const ConfigMap& cm2) { return spectrum_grid_from_config(cm2); });
    CHECK(zero.find(">= 1") != std::string::npos);

    const auto inverted = builder_error(
        "spectrum.omega_min_mhz = 1\n"
        "spectrum.omega_max_mhz = -1\n"
        "spectrum.omega_points = 5\n",
        [](const ConfigMap& cm2) { return spectrum_grid_from_config(cm2); });
    CHECK(inverted.find("max must exceed min") != std::string::npos);

    const auto conflict = builder_error(
        "spectrum.omega_min_mhz = -1\n"
        "spectrum.omega_max_mhz = 1\n"
        "spectrum.omega_points = 3\n"
        "spectrum.kappa_list_mhz = 1, 2\n"
        "spectrum.kappa_points = 4\n",
        [](const ConfigMap& cm2) { return spectrum_grid_from_config(cm2); });
    CHECK(conflict.find("conflicts") != std::string::npos);

    auto range = parse_config_text(
        "spectrum.omega_min_mhz = 0\n"
        "spectrum.omega_max_mhz = 1\n"
        "spectrum.omega_points = 2\n"
        "spectrum.kappa_min_mhz = 1\n"
        "spectrum.kappa_max_mhz = 3\n"
        "spectrum.kappa_points = 3\n");
    const auto g2 = spectrum_grid_from_config(range);
    REQUIRE(g2.kappas.size() == 3);
    CHECK(g2.kappas[0] == 1.0 * 1e6);
    CHECK(g2.kappas[1] == 2.0 * 1e6);
    CHECK(g2.kappas[2] == 3.0 * 1e6);
}

TEST_CASE("sweep: variable names, unit handling, value forms") {
    auto k = sweep_from_config(
        parse_config_text("sweep.variable = kappa\nsweep.values = 4.9, 2\n"));
    CHECK(k.variable == SweepVariable::Kappa);
    REQUIRE(k.values.size() == 2);
    CHECK(k.values[0] == 4.9 * 1e6);  // rate-like: converted
    CHECK(k.values[1] == 2.0 * 1e6);

    auto c = sweep_from_config(
        parse_config_text("sweep.variable = C\nsweep.values = 0.25, 4\n"));
    CHECK(c.variable == SweepVariable::Cooperativity);
    CHECK(c.values[0] == 0.25);  // dimensionless: raw
    CHECK(c.values[1] == 4.0);
    auto c2 = sweep_from_config(
        parse_config_text("sweep.variable = c\nsweep.values = 1\n"));
    CHECK(c2.variable == SweepVariable::Cooperativity);

    auto d = sweep_from_config(parse_config_text(
        "sweep.variable = delta\nsweep.min = 0\nsweep.max = 300\nsweep.points = 3\n"));
    CHECK(d.variable == SweepVariable::Delta);
    REQUIRE(d.values.size() == 3);
    CHECK(d.values[0] == 0.0);
    CHECK(d.values[1] == 150.0 * 1e6);
    CHECK(d.values[2] == 300.0 * 1e6);

    auto gh = sweep_from_config(
        parse_config_text("sweep.variable = gamma_h\nsweep.values = 0.01\n"));
    CHECK(gh.variable == SweepVariable::GammaH);

    const auto unknown = builder_error(
        "sweep.variable = q\nsweep.values = 1\n",
        [](const ConfigMap& cm2) { return sweep_from_config(cm2); });
    CHECK(unknown.find("unknown variable") != std::string::npos);

    const auto both = builder_error(
        "sweep.variable = kappa\nsweep.values = 1\nsweep.points = 2\n",
        [](const ConfigMap& cm2) { return sweep_from_config(cm2); });
    CHECK(both.find("exactly one") != std::string::npos);
    const auto neither = builder_error(
        "sweep.variable = kappa\n",
        [](const ConfigMap& cm2) { return sweep_from_config(cm2); });
    CHECK(neither.find("exactly one") != std::string::npos);
}

TEST_CASE("design inputs: geometry requirement and finesse override") {
    const std::string base =
        "units.angular = false\n"
        "ensemble.collective_g_mhz = 4\n"
        "ensemble.n_spins = 1e10\n"
        "ensemble.gamma_inh_mhz = 75\n"
        "design.pulse_duration_us = 1\n"
        "design.tau1_us = 50\n"
        "design.tau2_us = 50\n"
        "design.t1_us = 200000\n";
    auto d = design_from_config(parse_config_text(base + "cavity.wavelength_m = 0.03\n"));
    CHECK(d.pulse_duration == microseconds_to_seconds(1.0));
    CHECK(d.tau1 == microseconds_to_seconds(50.0));
    CHECK(d.tau2 == microseconds_to_seconds(50.0));
    CHECK(d.t1 == microseconds_to_seconds(200000.0));
    CHECK(d.phase_velocity == 2.998e8);
    CHECK_FALSE(d.length.has_value());
    REQUIRE(d.wavelength.has_value());
    CHECK(*d.wavelength == 0.03);
    CHECK_FALSE(d.finesse_override.has_value());
    // Collective coupling expressed in cycle MHz: g sqrt(N) = 2 pi * 4e6 rad/s.
    const double gn = d.ensemble.collective_coupling();
    CHECK(gn == doctest::Approx(2.0 * std::numbers::pi * 4e6).epsilon(1e-12));

    auto d2 = design_from_config(parse_config_text(
        base + "cavity.length_m = 0.02\ndesign.finesse = 200\n"));
    REQUIRE(d2.length.has_value());
    CHECK(*d2.length == 0.02);
    REQUIRE(d2.finesse_override.has_value());
    CHECK(*d2.finesse_override == 200.0);

    const auto err = builder_error(
        base, [](const ConfigMap& cm2) { return design_from_config(cm2); });
    CHECK(err.find("wavelength_m or cavity.length_m") != std::string::npos);
}

TEST_CASE("load_config reads files and reports unreadable paths") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "cavmem_cfg_test";
    fs::create_directories(dir);
    const fs::path file = dir / "ok.cfg";
    {
        std::ofstream out(file);
        out << "bins.m = 77\n";
    }
    auto cm = load_config(file);
    CHECK(cm.get_int("bins.m") == 77);
    CHECK(cm.source_text == "bins.m = 77\n");
    CHECK_THROWS_WITH_AS(load_config(dir / "missing.cfg"),
                         doctest::Contains("cannot read"), ConfigError);
    fs::remove_all(dir);
}
