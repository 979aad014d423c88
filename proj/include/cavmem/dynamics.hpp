#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cavmem/bins.hpp"
#include "cavmem/model.hpp"

namespace cavmem {

// Piecewise-constant cavity-detuning program; the cavity sits at the baseline
// (detuning 0) outside all segments. Edges are treated as instantaneous steps
// and are snapped to the integration grid.
struct DetuningSegment {
    double t_start = 0.0;  // s
    double t_end = 0.0;    // s
    double delta = 0.0;    // rad/s
};

struct DetuningSchedule {
    std::vector<DetuningSegment> segments;  // ordered, non-overlapping

    double at(double t) const;
    void validate() const;
};

// Gaussian input pulse whose intensity full width at half maximum is
// `duration`; the field envelope is exp(-(t-t0)^2/(4 sigma^2)) with
// sigma = duration/(2 sqrt(2 ln 2)), truncated to zero outside +-5 sigma.
struct GaussianPulse {
    double t0 = 0.0;        // s, envelope center
    double duration = 0.0;  // s, intensity FWHM, > 0
    double amplitude = 1.0; // sqrt(photon flux) scale
};

// Arbitrary complex input samples, linearly interpolated; zero outside the
// sampled range. Values are used literally (carrier_detuning does not apply).
struct SampledInput {
    std::vector<double> times;                // s, strictly increasing
    std::vector<std::complex<double>> values;
};

struct InputWaveform {
    std::variant<GaussianPulse, SampledInput> shape = GaussianPulse{};
    double carrier_detuning = 0.0;  // rad/s; Gaussian shape only: multiplies by
                                    // exp(-i w_c (t - t0))

    std::complex<double> eval(double t) const;
    static InputWaveform gaussian(double t0, double duration, double amplitude = 1.0,
                                  double carrier_detuning = 0.0);
};

// Ideal instantaneous control pulse: conjugates every spin coherence,
// reversing accumulated inhomogeneous phase; the cavity field is untouched.
struct PiPulseEvent {
    double time = 0.0;  // s, snapped to the integration grid
};

// Instantaneous dynamical state, exposed for state-level operations and tests.
struct SimState {
    double t = 0.0;
    std::complex<double> cavity_amp;             // E, units sqrt(photon number)
    std::vector<std::complex<double>> coherences;  // sigma_j per bin
};

void apply_pi_pulse(SimState& state);

// Uniform-grid record of one integration run. The output field obeys
// e_out = sqrt(2 kappa) * e_cav - e_in at every sample by construction.
struct SimTrace {
    double t_start = 0.0;
    double dt = 0.0;
    std::vector<std::complex<double>> e_in, e_cav, e_out;
    std::vector<double> spin_norm;   // N * sum_j w_j |sigma_j|^2
    std::vector<double> cum_e_in;    // running trapezoid of |e_in|^2 (monotone)
    std::vector<double> cum_e_out;   // running trapezoid of |e_out|^2 (monotone)
    std::vector<std::pair<double, std::string>> events;  // (time, marker)
    double kappa = 0.0, kappa_int = 0.0;
    SimState final_state;  // E and per-bin coherences at t_end

    std::size_t size() const { return e_cav.size(); }
    double time_at(std::size_t i) const { return t_start + dt * static_cast<double>(i); }
};

struct EvolveOptions {
    double t_start = 0.0;
    double t_end = 0.0;
    double dt = 0.0;  // > 0 required; see default_dt for the standard rule
    std::complex<double> initial_cavity{0.0, 0.0};
    std::vector<std::complex<double>> initial_coherences;  // empty = all zero
};

// Step bound used by the experiment drivers:
// dt = min(0.025/(kappa + kappa_int), 0.025/(g sqrt N), T/200).
// The free per-bin rotation and the cavity decay/detuning are folded in
// exactly per step (integrating-factor scheme), so the fast tail-bin
// frequencies impose no constraint; the bound tracks the coupling dynamics.
double default_dt(const EnsembleParams& e, const CavityParams& c, double pulse_duration);

// Integrate the coupled cavity-field/spin equations
//   dE/dt       = sqrt(2 kappa) E_in(t) - (kappa + kappa_int + i Dc(t)) E + i g N sum_j w_j sigma_j
//   dsigma_j/dt = -(gamma_h + i wbar_j) sigma_j + i g E
// in the frame rotating at the spin-line center, with classical 4th-order
// stages on the coupling terms and exact per-step phase folding of the linear
// parts. Pi-pulse events conjugate all coherences at their grid-snapped times.
// kappa = 0 is accepted (closed cavity; no input coupling).
SimTrace evolve(const EnsembleParams& e, const CavityParams& c, const SpinBins& bins,
                const InputWaveform& input, const DetuningSchedule& schedule,
                const std::vector<PiPulseEvent>& pi_pulses, const EvolveOptions& opts);

// Integral balance of one run: everything in units of input energy when
// normalized by e_in_total. Imbalance excludes intrinsic and homogeneous
// losses, so with kappa_int = gamma_h = 0 it measures integrator accuracy,
// and with kappa_int > 0 it equals the intrinsic-loss integral.
struct EnergyLedger {
    double e_in_total = 0.0;
    double e_out_total = 0.0;
    double residual_cavity = 0.0;   // |E|^2 at the final sample
    double residual_spins = 0.0;    // spin_norm at the final sample
    double imbalance = 0.0;         // in - out - residuals
    double intrinsic_loss = 0.0;    // 2 kappa_int * integral |E|^2 dt
};

EnergyLedger energy_ledger(const SimTrace& trace);

}  // namespace cavmem
