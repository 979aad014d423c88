#pragma once

#include <optional>
#include <string>
#include <vector>

namespace cavmem {

// Analytic noise and signal-to-noise budget for one storage experiment.
struct NoiseBudget {
    double alpha_l = 0.0;           // single-pass absorption depth alpha*L
    double eta_noise = 0.0;         // collective-emission noise probability
    double snr_collective = 0.0;    // signal-to-collective-noise ratio
    double n_s_fraction = 0.0;      // spontaneously excited fraction N_s/N
    double snr_spontaneous = 0.0;   // signal-to-spontaneous-noise ratio
    double kappa_t = 0.0;           // kappa*T, the temporal mode-count multiplier
    double tau1 = 0.0, tau2 = 0.0;  // storage half-times (s)
    double t1 = 0.0;                // population lifetime (s)
    std::optional<double> t2;       // coherence lifetime (s)
    std::vector<std::string> flags; // validity warnings, ';'-joined on export
};

// Probability that collectively enhanced spontaneous emission contaminates the
// kappa*T temporal modes of one echo: (pi/F) * 4C^2/(1+C)^2 * kappa*T.
// Appends a warning flag when the perturbative estimate exceeds 0.1.
double collective_noise_probability(double finesse, double cooperativity, double kappa,
                                    double pulse_duration,
                                    std::vector<std::string>* flags = nullptr);

// Signal-to-noise against collective emission: (F/pi) * 4/(1+C)^2 / (kappa*T),
// equal to total_efficiency/eta_noise identically. Reduces to F/(pi*kappa*T) at
// C = 1. The optional (tau1, T2) pair applies the extra dephasing of the signal
// relative to the noise, exp(-4*tau1/T2): the signal dephases over the full
// 2(tau1+tau2) round trip while collectively emitted noise dephases only over
// the final 2*tau2. Throws SignalZero at C = 0.
double snr_collective(double finesse, double cooperativity, double kappa,
                      double pulse_duration,
                      std::optional<double> tau1 = std::nullopt,
                      std::optional<double> t2 = std::nullopt);

// Fraction of spins spontaneously re-excited between the control pulses,
// N_s/N = (tau1+tau2)/T1 (valid for tau1+tau2 << T1; flags when > 0.1 T1).
double spontaneous_fraction(double tau1, double tau2, double t1,
                            std::vector<std::string>* flags = nullptr);

// Signal-to-noise against spontaneous-decay noise:
// SNR_s = eta * T1 / (pi * C * (tau1+tau2) * kappa * T).
// Throws UnboundedSignal at tau1+tau2 = 0.
double snr_spontaneous(double eta, double cooperativity, double tau1, double tau2,
                       double t1, double kappa, double pulse_duration);

// The two conventions for the quality factor of a matched half-wave cavity in
// terms of the absorption coefficient alpha and wavelength lambda. They differ
// by the choice of "linewidth" in Q = omega/linewidth:
//   q_linewidth_2kappa = 2*pi/(alpha*lambda)  (linewidth = cavity FWHM = 2*kappa;
//                        follows from F = pi*C/(alpha*L) with C = 1, L = lambda/2)
//   q_linewidth_kappa  = 4*pi/(alpha*lambda)  (linewidth = kappa)
// Both are returned; callers choose explicitly.
struct DesignQuality {
    double q_linewidth_2kappa = 0.0;
    double q_linewidth_kappa = 0.0;
};
DesignQuality design_quality(double alpha, double lambda);

// Assemble the full budget. `finesse` and `eta` (the storage efficiency whose
// signal the SNRs refer to) must be supplied; T2 is optional.
NoiseBudget make_noise_budget(double finesse, double cooperativity, double kappa,
                              double pulse_duration, double tau1, double tau2,
                              double t1, std::optional<double> t2, double eta);

}  // namespace cavmem
