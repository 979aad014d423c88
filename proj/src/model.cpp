#include "cavmem/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace cavmem {

namespace {
constexpr double kPi = std::numbers::pi;

bool finite(double x) { return std::isfinite(x); }
}  // namespace

std::string to_string(Regime r) {
    switch (r) {
        case Regime::WeakSingleDip: return "weak_single_dip";
        case Regime::StrongSplit: return "strong_split";
        case Regime::Boundary: return "boundary";
    }
    return "unknown";
}

void validate(const EnsembleParams& e) {
    if (!finite(e.g) || e.g < 0.0)
        throw ValidationError("ensemble: coupling g must be finite and >= 0");
    if (!finite(e.n_spins) || e.n_spins < 1.0)
        throw ValidationError("ensemble: n_spins must be finite and >= 1");
    if (!finite(e.gamma_inh) || e.gamma_inh <= 0.0)
        throw ValidationError("ensemble: inhomogeneous width gamma_inh must be > 0");
    if (!finite(e.gamma_h) || e.gamma_h < 0.0)
        throw ValidationError("ensemble: homogeneous linewidth gamma_h must be >= 0");
    if (!finite(e.center_offset))
        throw ValidationError("ensemble: center_offset must be finite");
    if (!finite(e.collective_coupling()))
        throw ValidationError("ensemble: collective coupling g*sqrt(N) must be finite");
}

void validate(const CavityParams& c) {
    if (!finite(c.kappa) || c.kappa <= 0.0)
        throw ValidationError("cavity: external coupling kappa must be > 0");
    if (!finite(c.kappa_int) || c.kappa_int < 0.0)
        throw ValidationError("cavity: intrinsic loss kappa_int must be >= 0");
    if (!finite(c.omega_r))
        throw ValidationError("cavity: omega_r must be finite");
    if (c.geometry) {
        const auto& g = *c.geometry;
        if (!finite(g.length) || g.length <= 0.0)
            throw ValidationError("cavity.geometry: length must be > 0");
        if (!finite(g.phase_velocity) || g.phase_velocity <= 0.0)
            throw ValidationError("cavity.geometry: phase_velocity must be > 0");
        if (g.wavelength && (!finite(*g.wavelength) || *g.wavelength <= 0.0))
            throw ValidationError("cavity.geometry: wavelength must be > 0");
    }
}

double line_density(double omega_bar, double gamma_inh, DistKind kind) {
    if (!finite(gamma_inh) || gamma_inh <= 0.0)
        throw ValidationError("line_density: gamma_inh must be > 0");
    if (kind == DistKind::Lorentzian) {
        return gamma_inh / kPi / (gamma_inh * gamma_inh + omega_bar * omega_bar);
    }
    // Gaussian with FWHM matched to the Lorentzian's 2*Gamma.
    const double sigma = gamma_inh / std::sqrt(2.0 * std::numbers::ln2);
    const double z = omega_bar / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * kPi));
}

double absorption_coefficient(double g2n, double gamma_inh, double phase_velocity) {
    if (gamma_inh <= 0.0 || phase_velocity <= 0.0)
        throw ValidationError("absorption_coefficient: gamma_inh and phase_velocity must be > 0");
    return 2.0 * g2n / (phase_velocity * gamma_inh);
}

namespace {

Regime classify(double collective, double gamma_inh, double kappa) {
    if (collective <= gamma_inh || collective <= kappa) return Regime::WeakSingleDip;
    if (collective > 2.0 * gamma_inh && collective > 2.0 * kappa) return Regime::StrongSplit;
    return Regime::Boundary;
}

}  // namespace

DerivedQuantities derive(const EnsembleParams& e, const CavityParams& c) {
    validate(e);
    validate(c);

    DerivedQuantities d;
    d.collective_coupling = e.collective_coupling();
    d.cooperativity = e.g2n() / (c.kappa * e.gamma_inh);
    d.regime = classify(d.collective_coupling, e.gamma_inh, c.kappa);
    d.bad_cavity_ordering_ok = e.gamma_inh > d.collective_coupling &&
                               d.collective_coupling > c.kappa &&
                               c.kappa > e.gamma_h;

    if (c.geometry) {
        const auto& g = *c.geometry;
        d.finesse = kPi * g.phase_velocity / (2.0 * g.length * c.kappa);
        d.alpha_l = absorption_coefficient(e.g2n(), e.gamma_inh, g.phase_velocity) * g.length;
        if (g.wavelength) {
            const double omega_res = 2.0 * kPi * g.phase_velocity / *g.wavelength;
            d.quality = omega_res / (2.0 * c.kappa);
        }
    }
    if (!d.quality && c.omega_r > 0.0) d.quality = c.omega_r / (2.0 * c.kappa);

    return d;
}

RegimeReport classify_regime(const EnsembleParams& e, const CavityParams& c,
                             double pulse_duration) {
    validate(e);
    validate(c);
    if (!finite(pulse_duration) || pulse_duration <= 0.0)
        throw ValidationError("classify_regime: pulse_duration must be > 0");

    RegimeReport r;
    const double gn = e.collective_coupling();
    r.regime = classify(gn, e.gamma_inh, c.kappa);
    r.ratio_inh_over_collective = gn > 0.0 ? e.gamma_inh / gn
                                           : std::numeric_limits<double>::infinity();
    r.ratio_collective_over_kappa = gn / c.kappa;
    r.kappa_t = c.kappa * pulse_duration;
    const double inv_t = 1.0 / pulse_duration;
    r.inv_t_over_gamma_h = e.gamma_h > 0.0 ? inv_t / e.gamma_h
                                           : std::numeric_limits<double>::infinity();
    r.ordering_ok = e.gamma_inh > gn && gn > c.kappa && c.kappa > inv_t &&
                    inv_t > e.gamma_h;
    return r;
}

}  // namespace cavmem
