#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "cavmem/analytic.hpp"
#include "cavmem/dynamics.hpp"
#include "cavmem/noise.hpp"
#include "cavmem/protocol.hpp"

namespace cavmem {

// Shortest decimal representation that parses back to the same double
// (round-trip exact), so identical values always serialize identically.
std::string format_double(double v);

// Warning flags as one CSV cell, ';'-separated, empty when none.
std::string join_flags(const std::vector<std::string>& flags);

// `kappa,omega,reflection` in long format: the kappa grid outer, the
// frequency grid inner. spectra[i] belongs to kappas[i].
std::string spectrum_csv(const std::vector<double>& kappas,
                         const std::vector<ReflectionSpectrum>& spectra);

// `t,e_in_re,e_in_im,e_cav_re,e_cav_im,e_out_re,e_out_im,spin_norm`
std::string trace_csv(const SimTrace& trace);

// Event-marker sidecar `t,event`.
std::string events_csv(const SimTrace& trace);

// `c,kappa,eta_measured,eta_predicted,leakage,fidelity,flags`
std::string result_csv(const std::vector<SweepRow>& rows);

// `alpha_l,eta_noise,snr_c,ns_fraction,snr_s,flags` (single row)
std::string budget_csv(const NoiseBudget& budget);

// `quantity,value` rows, values preformatted (numbers or literals).
std::string kv_csv(const std::vector<std::pair<std::string, std::string>>& rows);

// Write bytes exactly as given (binary mode); throws on failure.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace cavmem
