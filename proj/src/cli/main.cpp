#include <algorithm>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cavmem/analytic.hpp"
#include "cavmem/config.hpp"
#include "cavmem/csv.hpp"
#include "cavmem/errors.hpp"
#include "cavmem/manifest.hpp"
#include "cavmem/model.hpp"
#include "cavmem/noise.hpp"
#include "cavmem/protocol.hpp"

namespace fs = std::filesystem;
using namespace cavmem;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    int jobs = 0;  // 0 = available cores
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "configuration file (key = value)")
        ->required();
    cmd->add_option("--out", args.out_dir, "output directory (default: .)");
    cmd->add_option("--jobs", args.jobs, "worker threads for sweeps (0 = cores)");
}

// Accumulates output files, then writes them plus the manifest that lists them.
struct OutputSet {
    RunManifest manifest;
    fs::path dir;
    std::vector<std::pair<fs::path, std::string>> files;

    OutputSet(const std::string& command, const CommonArgs& args,
              const ConfigMap& cm) {
        manifest.command = command;
        manifest.config_path = args.config_path;
        manifest.config_hash = fnv1a64_hex(cm.source_text);
        manifest.timestamp = utc_timestamp_now();
        dir = args.out_dir;
    }

    void add(const std::string& name, std::string content) {
        files.emplace_back(dir / name, std::move(content));
    }

    void commit() {
        fs::create_directories(dir);
        for (const auto& [path, content] : files) {
            write_file(path, content);
            manifest.outputs.emplace_back(path.filename().string(),
                                          fnv1a64_hex(content));
            std::cout << "wrote " << path.string() << "\n";
        }
        const fs::path mpath = dir / "manifest.json";
        write_file(mpath, manifest_json(manifest));
        std::cout << "wrote " << mpath.string() << "\n";
    }
};

SweepRow row_from_result(const ProtocolConfig& cfg, const ProtocolResult& r) {
    SweepRow row;
    row.cooperativity =
        cfg.ensemble.g2n() / (cfg.cavity.kappa * cfg.ensemble.gamma_inh);
    row.variable_value = row.cooperativity;
    row.kappa = cfg.cavity.kappa;
    row.eta_measured = r.eta_measured;
    row.eta_predicted = r.eta_predicted;
    row.leakage = r.first_echo_leakage;
    row.fidelity = r.shape_fidelity;
    row.flags = r.flags;
    return row;
}

void run_spectrum(const CommonArgs& args) {
    const ConfigMap cm = load_config(args.config_path);
    const EnsembleParams ensemble = ensemble_from_config(cm);
    if (ensemble.dist_kind != DistKind::Lorentzian)
        throw ConfigError(
            "spectrum: the closed-form reflection needs a lorentzian line shape");
    const CavityParams cavity = cavity_from_config(cm);
    const SpectrumGrid grid = spectrum_grid_from_config(cm);

    std::vector<ReflectionSpectrum> spectra;
    spectra.reserve(grid.kappas.size());
    for (double kappa : grid.kappas) {
        CavityParams ck = cavity;
        ck.kappa = kappa;
        spectra.push_back(sample_spectrum(grid.omegas, ensemble, ck));
    }

    OutputSet out("spectrum", args, cm);
    out.add("spectrum.csv", spectrum_csv(grid.kappas, spectra));
    out.commit();
    std::cout << grid.kappas.size() << " kappa value(s) x " << grid.omegas.size()
              << " frequencies\n";
}

void run_protocol_cmd(const CommonArgs& args) {
    const ConfigMap cm = load_config(args.config_path);
    const ProtocolConfig cfg = protocol_from_config(cm);
    ProtocolResult res = run_protocol(cfg);

    OutputSet out("protocol", args, cm);
    out.add("result.csv", result_csv({row_from_result(cfg, res)}));
    out.add("trace.csv", trace_csv(res.trace));
    out.add("events.csv", events_csv(res.trace));
    if (res.noise_budget) out.add("budget.csv", budget_csv(*res.noise_budget));
    out.manifest.dt = res.trace.dt;
    out.manifest.bins_m = cfg.bins_m;
    out.manifest.truncation_p = cfg.truncation_p;
    out.manifest.imbalance = res.ledger.imbalance / res.input_energy;
    out.manifest.warnings = res.flags;
    out.commit();
    std::cout << "eta_measured = " << format_double(res.eta_measured)
              << "  eta_predicted = " << format_double(res.eta_predicted)
              << "  leakage = " << format_double(res.first_echo_leakage)
              << "  fidelity = " << format_double(res.shape_fidelity)
              << "  echo_peak_time = " << format_double(res.echo_peak_time) << "\n";
}

void run_sweep(const CommonArgs& args) {
    const ConfigMap cm = load_config(args.config_path);
    const ProtocolConfig base = protocol_from_config(cm);
    const SweepSpec spec = sweep_from_config(cm);
    const auto rows = sweep_protocol(base, spec.variable, spec.values, args.jobs);

    OutputSet out("sweep", args, cm);
    out.add("result.csv", result_csv(rows));
    out.manifest.bins_m = base.bins_m;
    out.manifest.truncation_p = base.truncation_p;
    for (const auto& row : rows)
        for (const auto& flag : row.flags)
            if (std::find(out.manifest.warnings.begin(), out.manifest.warnings.end(),
                          flag) == out.manifest.warnings.end())
                out.manifest.warnings.push_back(flag);
    out.commit();
    std::cout << rows.size() << " sweep point(s)\n";
}

void run_design(const CommonArgs& args) {
    const ConfigMap cm = load_config(args.config_path);
    const DesignInputs d = design_from_config(cm);
    validate(d.ensemble);
    if (!(d.pulse_duration > 0.0)) throw ConfigError("design.pulse_duration_us must be > 0");
    if (!(d.tau1 > 0.0)) throw ConfigError("design.tau1_us must be > 0");
    if (!(d.tau2 > 0.0)) throw ConfigError("design.tau2_us must be > 0");
    if (!(d.t1 > 0.0)) throw ConfigError("design.t1_us must be > 0");

    const double kappa_star = impedance_match_kappa(d.ensemble);
    const double alpha = absorption_coefficient(d.ensemble.g2n(),
                                                d.ensemble.gamma_inh,
                                                d.phase_velocity);
    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("kappa_star_rad_per_s", format_double(kappa_star));
    rows.emplace_back("alpha_per_m", format_double(alpha));
    if (d.wavelength) {
        const DesignQuality q = design_quality(alpha, *d.wavelength);
        rows.emplace_back("q_linewidth_2kappa", format_double(q.q_linewidth_2kappa));
        rows.emplace_back("q_linewidth_kappa", format_double(q.q_linewidth_kappa));
    }
    std::optional<double> finesse = d.finesse_override;
    if (!finesse && d.length)
        finesse = std::numbers::pi * d.phase_velocity / (2.0 * *d.length * kappa_star);
    if (finesse) rows.emplace_back("finesse", format_double(*finesse));
    if (d.length) rows.emplace_back("alpha_l", format_double(alpha * *d.length));
    const auto modes = multimode_capacity(kappa_star, d.ensemble.gamma_h);
    rows.emplace_back("multimode_capacity",
                      modes ? format_double(*modes) : std::string("unbounded"));
    if (finesse) {
        // Matched operating point: C = 1, kappa = kappa_star.
        const std::optional<double> t2 =
            d.ensemble.gamma_h > 0.0 ? std::optional<double>(1.0 / d.ensemble.gamma_h)
                                     : std::nullopt;
        const double eta = total_efficiency(1.0, d.tau1, d.tau2, t2);
        rows.emplace_back("eta_noise",
                          format_double(collective_noise_probability(
                              *finesse, 1.0, kappa_star, d.pulse_duration)));
        rows.emplace_back("snr_c", format_double(snr_collective(
                                       *finesse, 1.0, kappa_star, d.pulse_duration)));
        rows.emplace_back("ns_fraction",
                          format_double(spontaneous_fraction(d.tau1, d.tau2, d.t1)));
        rows.emplace_back("snr_s",
                          format_double(snr_spontaneous(eta, 1.0, d.tau1, d.tau2,
                                                        d.t1, kappa_star,
                                                        d.pulse_duration)));
    }

    OutputSet out("design", args, cm);
    out.add("design.csv", kv_csv(rows));
    out.commit();
}

void run_validate(const CommonArgs& args) {
    const ConfigMap cm = load_config(args.config_path);
    auto has_section = [&](const std::string& prefix) {
        for (const auto& [key, entry] : cm.entries)
            if (key.rfind(prefix, 0) == 0) return true;
        return false;
    };

    std::optional<EnsembleParams> ensemble;
    std::optional<CavityParams> cavity;
    if (has_section("ensemble.")) {
        ensemble = ensemble_from_config(cm);
        validate(*ensemble);
        std::cout << "ensemble: collective coupling = "
                  << format_double(ensemble->collective_coupling())
                  << " rad/s, inhomogeneous width = "
                  << format_double(ensemble->gamma_inh) << " rad/s\n";
    }
    if (has_section("cavity.")) {
        cavity = cavity_from_config(cm);
        validate(*cavity);
    }
    if (ensemble && cavity) {
        const DerivedQuantities dq = derive(*ensemble, *cavity);
        std::cout << "cooperativity = " << format_double(dq.cooperativity)
                  << ", regime = " << to_string(dq.regime) << "\n";
    }
    if (has_section("protocol.")) {
        const ProtocolConfig cfg = protocol_from_config(cm);
        cfg.validate();
        std::cout << "protocol: span = "
                  << format_double(cfg.t_end() - cfg.t_start()) << " s, echo at "
                  << format_double(cfg.echo_time()) << " s\n";
    }
    if (has_section("spectrum.")) {
        const SpectrumGrid grid = spectrum_grid_from_config(cm);
        std::cout << "spectrum grid: " << grid.kappas.size() << " x "
                  << grid.omegas.size() << " points\n";
    }
    if (has_section("sweep.")) {
        const SweepSpec spec = sweep_from_config(cm);
        std::cout << "sweep: " << spec.values.size() << " value(s)\n";
    }
    if (has_section("design.")) {
        design_from_config(cm);
        std::cout << "design block ok\n";
    }

    OutputSet out("validate", args, cm);
    out.commit();
    std::cout << "config ok\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "cavmem: spin-ensemble microwave memory analysis "
        "(reflection spectra, echo protocol simulation, noise budgets)"};
    app.require_subcommand(1);

    CommonArgs spectrum_args, protocol_args, sweep_args, design_args, validate_args;
    CLI::App* c_spectrum =
        app.add_subcommand("spectrum", "reflection spectrum over a frequency/kappa grid");
    add_common(c_spectrum, spectrum_args);
    CLI::App* c_protocol =
        app.add_subcommand("protocol", "run the storage/retrieval experiment once");
    add_common(c_protocol, protocol_args);
    CLI::App* c_sweep =
        app.add_subcommand("sweep", "protocol runs over a swept parameter");
    add_common(c_sweep, sweep_args);
    CLI::App* c_design =
        app.add_subcommand("design", "matched-cavity design figures and noise budget");
    add_common(c_design, design_args);
    CLI::App* c_validate =
        app.add_subcommand("validate", "parse and validate a configuration");
    add_common(c_validate, validate_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_spectrum->parsed()) run_spectrum(spectrum_args);
        if (c_protocol->parsed()) run_protocol_cmd(protocol_args);
        if (c_sweep->parsed()) run_sweep(sweep_args);
        if (c_design->parsed()) run_design(design_args);
        if (c_validate->parsed()) run_validate(validate_args);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const IntegratorError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
