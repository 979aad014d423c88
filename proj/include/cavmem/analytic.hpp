#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "cavmem/bins.hpp"
#include "cavmem/model.hpp"

namespace cavmem {

// Reflection values R(omega) sampled on an ordered probe-detuning grid.
struct ReflectionSpectrum {
    std::vector<double> omegas;  // rad/s, strictly increasing
    std::vector<double> values;  // dimensionless R in [0, 1] for kappa_int = 0
    EnsembleParams ensemble;
    CavityParams cavity;
};

enum class MatchKind { WeakOnResonance, StrongSplit };

// Parameters at which the single-port reflection vanishes.
struct MatchSolution {
    MatchKind kind = MatchKind::WeakOnResonance;
    double kappa_star = 0.0;                 // matched external coupling (rad/s)
    std::vector<double> match_frequencies;   // probe detunings with R = 0; for the
                                             // split regime these are the exact zeros
                                             // +-sqrt(g^2 N - Gamma^2), which approach
                                             // +-g*sqrt(N) up to a second-order
                                             // correction in Gamma/(g*sqrt(N))
    double dip_fwhm_predicted = 0.0;         // expected full width at half depth (rad/s)
};

// One measured dip of 1 - R.
struct Dip {
    double center = 0.0;  // rad/s, position of maximal 1 - R
    double fwhm = 0.0;    // rad/s, full width at half of this dip's own depth
    double depth = 0.0;   // peak value of 1 - R
};

// Complex reflected-over-incident amplitude of the single-ended cavity with a
// Lorentzian spin line: 2k/(k + k_int - i(w - w_cav) + g^2 N/(Gamma + gamma_h
// - i(w - w_spin))) - 1, where w_cav/w_spin are the cavity/line offsets.
// Gaussian lines have no closed form (throws UnsupportedClosedForm).
std::complex<double> reflection_amplitude(double omega, const EnsembleParams& e,
                                          const CavityParams& c);

// Reflected power fraction R(omega) = |reflection_amplitude|^2.
double reflection(double omega, const EnsembleParams& e, const CavityParams& c);

// The same quantity evaluated through the explicit rational expression
// [(kG - g^2N + w^2)^2 + w^2 (k - G)^2] / [(kG + g^2N - w^2)^2 + w^2 (k + G)^2]
// with G = Gamma + gamma_h. Requires kappa_int = 0 and a centered line; used as
// an independent cross-check of reflection().
double reflection_rational(double omega, const EnsembleParams& e, const CavityParams& c);

ReflectionSpectrum sample_spectrum(const std::vector<double>& omegas,
                                   const EnsembleParams& e, const CavityParams& c);

// External coupling that realizes C = 1 (on-resonance impedance match):
// kappa* = g^2 N / Gamma. Throws NoMatchExists at zero coupling.
double impedance_match_kappa(const EnsembleParams& e);

// Split-regime impedance match (requires g*sqrt(N) > Gamma): kappa* = Gamma,
// reflection zeros at +-sqrt(g^2 N - Gamma^2), each dip of width ~2*Gamma.
MatchSolution strong_coupling_match(const EnsembleParams& e);

// eta_abs = 4C/(1+C)^2, the absorbed energy fraction; maximal (= 1) at C = 1.
double absorption_efficiency(double cooperativity);

// Full storage-retrieval efficiency eta = 16 C^2/(1+C)^4, optionally times the
// dephasing factor exp(-4 (tau1 + tau2)/T2).
double total_efficiency(double cooperativity, double tau1 = 0.0, double tau2 = 0.0,
                        std::optional<double> t2 = std::nullopt);

// Locate every dip of 1 - R (strict local maxima above a 1e-3 floor) and
// measure its full width at half of its own depth by linear interpolation.
// Throws NoDipError when none is found, ResolutionError when a half-depth
// crossing is not bracketed by the sampled grid.
std::vector<Dip> dip_fwhm(const ReflectionSpectrum& spectrum);

// Temporal multimode capacity kappa/(25 gamma_h); nullopt signals "unbounded"
// at gamma_h = 0 rather than a number.
std::optional<double> multimode_capacity(double kappa, double gamma_h);

// Steady-state reflected amplitude with the line-shape integral replaced by the
// discrete sum over bins: works for any distribution, and supports a constant
// cavity detuning (frequency the cavity is parked at during detuned intervals).
std::complex<double> steady_state_oracle(const SpinBins& bins, double omega,
                                         const EnsembleParams& e, const CavityParams& c,
                                         double cavity_detuning = 0.0);

}  // namespace cavmem
