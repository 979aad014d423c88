#include "cavmem/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace cavmem {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    if (res.ec != std::errc())
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

std::string join_flags(const std::vector<std::string>& flags) {
    std::string out;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        if (i) out += ';';
        out += flags[i];
    }
    return out;
}

std::string spectrum_csv(const std::vector<double>& kappas,
                         const std::vector<ReflectionSpectrum>& spectra) {
    std::string out = "kappa,omega,reflection\n";
    for (std::size_t k = 0; k < kappas.size(); ++k) {
        const auto& sp = spectra.at(k);
        const std::string kap = format_double(kappas[k]);
        for (std::size_t i = 0; i < sp.omegas.size(); ++i) {
            out += kap;
            out += ',';
            out += format_double(sp.omegas[i]);
            out += ',';
            out += format_double(sp.values[i]);
            out += '\n';
        }
    }
    return out;
}

std::string trace_csv(const SimTrace& trace) {
    std::string out =
        "t,e_in_re,e_in_im,e_cav_re,e_cav_im,e_out_re,e_out_im,spin_norm\n";
    for (std::size_t n = 0; n < trace.size(); ++n) {
        out += format_double(trace.time_at(n));
        out += ',';
        out += format_double(trace.e_in[n].real());
        out += ',';
        out += format_double(trace.e_in[n].imag());
        out += ',';
        out += format_double(trace.e_cav[n].real());
        out += ',';
        out += format_double(trace.e_cav[n].imag());
        out += ',';
        out += format_double(trace.e_out[n].real());
        out += ',';
        out += format_double(trace.e_out[n].imag());
        out += ',';
        out += format_double(trace.spin_norm[n]);
        out += '\n';
    }
    return out;
}

std::string events_csv(const SimTrace& trace) {
    std::string out = "t,event\n";
    for (const auto& [t, name] : trace.events) {
        out += format_double(t);
        out += ',';
        out += name;
        out += '\n';
    }
    return out;
}

std::string result_csv(const std::vector<SweepRow>& rows) {
    std::string out = "c,kappa,eta_measured,eta_predicted,leakage,fidelity,flags\n";
    for (const auto& r : rows) {
        out += format_double(r.cooperativity);
        out += ',';
        out += format_double(r.kappa);
        out += ',';
        out += format_double(r.eta_measured);
        out += ',';
        out += format_double(r.eta_predicted);
        out += ',';
        out += format_double(r.leakage);
        out += ',';
        out += format_double(r.fidelity);
        out += ',';
        out += join_flags(r.flags);
        out += '\n';
    }
    return out;
}

std::string budget_csv(const NoiseBudget& b) {
    std::string out = "alpha_l,eta_noise,snr_c,ns_fraction,snr_s,flags\n";
    out += format_double(b.alpha_l);
    out += ',';
    out += format_double(b.eta_noise);
    out += ',';
    out += format_double(b.snr_collective);
    out += ',';
    out += format_double(b.n_s_fraction);
    out += ',';
    out += format_double(b.snr_spontaneous);
    out += ',';
    out += join_flags(b.flags);
    out += '\n';
    return out;
}

std::string kv_csv(const std::vector<std::pair<std::string, std::string>>& rows) {
    std::string out = "quantity,value\n";
    for (const auto& [k, v] : rows) {
        out += k;
        out += ',';
        out += v;
        out += '\n';
    }
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace cavmem
