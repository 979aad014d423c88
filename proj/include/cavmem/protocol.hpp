#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cavmem/dynamics.hpp"
#include "cavmem/model.hpp"
#include "cavmem/noise.hpp"

namespace cavmem {

// Full storage/retrieval experiment: Gaussian input centered at t = 0 is
// absorbed, control (phase-conjugating) pulses fire at tau1 and 2 tau1 + tau2,
// the cavity is detuned by detune_delta between them so the intermediate
// rephasing at 2 tau1 stays silenced, and the echo is read out around
// 2 (tau1 + tau2).
struct ProtocolConfig {
    EnsembleParams ensemble;
    CavityParams cavity;
    std::size_t bins_m = 2000;
    double truncation_p = 0.01;

    double pulse_duration = 0.0;  // T: intensity FWHM of the input Gaussian (s)
    double pulse_amplitude = 1.0; // sqrt(photon flux) scale; results are scale-free
    double tau1 = 0.0;            // input center -> first control pulse (s)
    double tau2 = 0.0;            // first -> second control pulse (s)
    double detune_delta = 0.0;    // cavity detuning while silenced (rad/s)

    // Detuning interval; empty = default [tau1 + 3T, 2 tau1 + tau2 - 3T], the
    // guard of 3T after the first and before the second control pulse keeping
    // both pulses at the baseline frequency.
    std::optional<std::pair<double, double>> detune_window;
    double echo_window_halfwidth = 0.0;  // 0 = default 3T
    double dt = 0.0;                     // 0 = default_dt rule

    std::optional<double> t1;       // population lifetime, for the noise budget (s)
    std::optional<double> t2;       // coherence lifetime, decays the prediction (s)
    std::optional<double> finesse;  // cavity finesse, for the noise budget

    double pi1_time() const { return tau1; }
    double pi2_time() const { return 2.0 * tau1 + tau2; }
    double silenced_echo_time() const { return 2.0 * tau1; }
    double echo_time() const { return 2.0 * (tau1 + tau2); }
    double echo_halfwidth() const {
        return echo_window_halfwidth > 0.0 ? echo_window_halfwidth
                                           : 3.0 * pulse_duration;
    }
    std::pair<double, double> detune_interval() const;
    double t_start() const { return -3.0 * pulse_duration; }
    double t_end() const { return echo_time() + echo_halfwidth(); }

    void validate() const;  // throws ConfigError naming the violated invariant
};

struct ProtocolResult {
    double eta_measured = 0.0;        // echo-window output energy / input energy
    double eta_predicted = 0.0;       // 16 C^2/(1+C)^4 (times coherence decay)
    double first_echo_leakage = 0.0;  // output energy around 2 tau1 / input energy
    double shape_fidelity = 0.0;      // overlap with the time-reversed input
    double echo_peak_time = 0.0;      // energy centroid of the echo window (s)
    double input_energy = 0.0;
    double echo_energy = 0.0;
    EnergyLedger ledger;
    std::optional<NoiseBudget> noise_budget;  // set when finesse and t1 are given
    std::vector<std::string> flags;
    SimTrace trace;
};

// Run the experiment once. Integration failures propagate as IntegratorError;
// invalid configurations throw ConfigError before any integration starts.
ProtocolResult run_protocol(const ProtocolConfig& cfg);

// Normalized overlap |integral E_out(t) conj(model(t)) dt|^2 / (E_echo E_model)
// over the echo window, model = the time-reversed input envelope centered at
// echo_time + s, maximized over |s| <= T/2. The slide absorbs the cavity
// response delay, which is bounded and reported separately by echo_peak_time;
// fidelity quantifies shape distortion only. Global phase is ignored. Throws
// FidelityUndefined when the window holds no echo energy; returns 0 when the
// model support misses the window.
double shape_fidelity(const SimTrace& trace, const ProtocolConfig& cfg);

enum class SweepVariable { Kappa, Cooperativity, Delta, GammaH };

struct SweepRow {
    double variable_value = 0.0;  // the swept value for this row
    double cooperativity = 0.0;   // resolved per row
    double kappa = 0.0;           // resolved per row (rad/s)
    double eta_measured = 0.0;
    double eta_predicted = 0.0;
    double leakage = 0.0;
    double fidelity = 0.0;
    std::vector<std::string> flags;
};

// One protocol run per value, the base configuration varied in `var`:
//   Kappa         sets cavity.kappa
//   Cooperativity sets cavity.kappa = g^2 N / (C Gamma)  (fixed coupling, width)
//   Delta         sets detune_delta
//   GammaH        sets ensemble.gamma_h
// Rows are ordered by input index; `jobs` > 1 distributes runs across threads
// with no effect on the values (each run is independent and bit-stable).
std::vector<SweepRow> sweep_protocol(const ProtocolConfig& base, SweepVariable var,
                                     const std::vector<double>& values, int jobs = 1);

// Efficiency-law comparison table over cooperativity values.
std::vector<SweepRow> sweep_efficiency(const ProtocolConfig& base,
                                       const std::vector<double>& c_values,
                                       int jobs = 1);

struct SuppressionPoint {
    double delta = 0.0;    // rad/s
    double leakage = 0.0;  // first-echo leakage at this detuning
};

// Leakage of the silenced echo vs detuning magnitude; deltas must be
// nonnegative and ascending.
std::vector<SuppressionPoint> suppression_scan(const ProtocolConfig& base,
                                               const std::vector<double>& deltas,
                                               int jobs = 1);

}  // namespace cavmem
