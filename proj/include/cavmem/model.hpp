#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "cavmem/errors.hpp"

namespace cavmem {

enum class DistKind { Lorentzian, Gaussian };

// Inhomogeneously broadened spin ensemble coupled to a single cavity mode.
struct EnsembleParams {
    double g = 0.0;            // single-spin coupling (rad/s), >= 0
    double n_spins = 1.0;      // spin count N >= 1 (fractional effective counts allowed)
    double gamma_inh = 0.0;    // inhomogeneous half-width Gamma (rad/s), > 0
    double gamma_h = 0.0;      // homogeneous linewidth gamma_h (rad/s), >= 0; T2 = 1/gamma_h
    DistKind dist_kind = DistKind::Lorentzian;
    double center_offset = 0.0;  // spin-line center relative to the cavity baseline (rad/s)

    double collective_coupling() const { return g * std::sqrt(n_spins); }  // g*sqrt(N)
    double g2n() const { return g * g * n_spins; }                         // g^2*N
};

// Optional physical geometry of the resonator; needed only for finesse,
// quality factor, and absorption-depth outputs.
struct CavityGeometry {
    double length = 0.0;          // L (m), > 0
    double phase_velocity = 0.0;  // c (m/s), > 0
    std::optional<double> wavelength;  // lambda (m), > 0 when present
};

// Single-ended (one-port) tunable cavity.
struct CavityParams {
    double kappa = 0.0;      // external coupling half-linewidth (rad/s), > 0; cavity FWHM = 2*kappa
    double kappa_int = 0.0;  // intrinsic loss rate (rad/s), >= 0; 0 = lossless walls
    double omega_r = 0.0;    // baseline resonance (rad/s); 0 in the rotating frame
    std::optional<CavityGeometry> geometry;

    double kappa_total() const { return kappa + kappa_int; }
};

enum class Regime { WeakSingleDip, StrongSplit, Boundary };

std::string to_string(Regime r);

// Dimensionless figures derived from a validated parameter set.
struct DerivedQuantities {
    double cooperativity = 0.0;        // C = g^2 N / (kappa * Gamma)
    double collective_coupling = 0.0;  // g*sqrt(N) (rad/s)
    std::optional<double> finesse;     // F = pi*c/(2*L*kappa), geometry only
    std::optional<double> quality;     // Q = omega_res/(2*kappa); needs wavelength or omega_r
    std::optional<double> alpha_l;     // absorption depth alpha*L = 2 g^2 N L/(c*Gamma), geometry only
    Regime regime = Regime::WeakSingleDip;
    bool bad_cavity_ordering_ok = false;  // Gamma > g*sqrt(N) > kappa > gamma_h (time link via classify_regime)
};

// Rate-ordering report for a concrete pulse duration.
struct RegimeReport {
    Regime regime = Regime::WeakSingleDip;
    double ratio_inh_over_collective = 0.0;   // Gamma/(g*sqrt(N))
    double ratio_collective_over_kappa = 0.0; // g*sqrt(N)/kappa
    double kappa_t = 0.0;                     // kappa*T (adiabaticity margin)
    double inv_t_over_gamma_h = 0.0;          // (1/T)/gamma_h, +inf at gamma_h = 0
    bool ordering_ok = false;                 // Gamma > g*sqrt(N) > kappa > 1/T > gamma_h
};

// Throw ValidationError on out-of-range or partially specified parameters.
void validate(const EnsembleParams& e);
void validate(const CavityParams& c);

// Spectral density of spin detunings, unit normalized: Lorentzian
// Gamma/pi / (Gamma^2 + w^2), or a Gaussian with the same FWHM (2*Gamma).
double line_density(double omega_bar, double gamma_inh,
                    DistKind kind = DistKind::Lorentzian);

// Absorption coefficient per meter, alpha = 2 g^2 N / (c * Gamma).
double absorption_coefficient(double g2n, double gamma_inh, double phase_velocity);

DerivedQuantities derive(const EnsembleParams& e, const CavityParams& c);

RegimeReport classify_regime(const EnsembleParams& e, const CavityParams& c,
                             double pulse_duration);

}  // namespace cavmem
