#include "cavmem/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "cavmem/errors.hpp"

namespace cavmem {

namespace {
using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};
}  // namespace

std::complex<double> reflection_amplitude(double omega, const EnsembleParams& e,
                                          const CavityParams& c) {
    validate(e);
    validate(c);
    if (e.dist_kind != DistKind::Lorentzian)
        throw UnsupportedClosedForm(
            "reflection_amplitude: closed form exists only for the Lorentzian line; "
            "use steady_state_oracle for other shapes");

    const double g2n = e.g2n();
    const double G = e.gamma_inh + e.gamma_h;
    const cplx cavity_term = c.kappa + c.kappa_int - kI * (omega - c.omega_r);
    const cplx spin_term =
        g2n > 0.0 ? g2n / cplx(G, -(omega - e.center_offset)) : cplx(0.0, 0.0);
    return 2.0 * c.kappa / (cavity_term + spin_term) - 1.0;
}

double reflection(double omega, const EnsembleParams& e, const CavityParams& c) {
    return std::norm(reflection_amplitude(omega, e, c));
}

double reflection_rational(double omega, const EnsembleParams& e, const CavityParams& c) {
    validate(e);
    validate(c);
    if (e.dist_kind != DistKind::Lorentzian)
        throw UnsupportedClosedForm("reflection_rational: Lorentzian line only");
    if (c.kappa_int != 0.0)
        throw ValidationError("reflection_rational: requires kappa_int = 0");
    if (e.center_offset != 0.0 || c.omega_r != 0.0)
        throw ValidationError("reflection_rational: requires a centered line");

    const double g2n = e.g2n();
    const double G = e.gamma_inh + e.gamma_h;
    const double k = c.kappa;
    const double w2 = omega * omega;
    const double num = (k * G - g2n + w2) * (k * G - g2n + w2) +
                       w2 * (k - G) * (k - G);
    const double den = (k * G + g2n - w2) * (k * G + g2n - w2) +
                       w2 * (k + G) * (k + G);
    return num / den;
}

ReflectionSpectrum sample_spectrum(const std::vector<double>& omegas,
                                   const EnsembleParams& e, const CavityParams& c) {
    validate(e);
    validate(c);
    if (omegas.empty())
        throw ValidationError("sample_spectrum: omega grid must be nonempty");
    if (!std::is_sorted(omegas.begin(), omegas.end(),
                        [](double a, double b) { return a <= b; }))
        throw ValidationError("sample_spectrum: omega grid must be strictly increasing");

    ReflectionSpectrum s;
    s.omegas = omegas;
    s.values.reserve(omegas.size());
    for (double w : omegas) s.values.push_back(reflection(w, e, c));
    s.ensemble = e;
    s.cavity = c;
    return s;
}

double impedance_match_kappa(const EnsembleParams& e) {
    validate(e);
    if (e.g <= 0.0)
        throw NoMatchExists("impedance_match_kappa: zero coupling has no match");
    return e.g2n() / e.gamma_inh;
}

MatchSolution strong_coupling_match(const EnsembleParams& e) {
    validate(e);
    const double gn = e.collective_coupling();
    if (gn <= e.gamma_inh)
        throw RegimeError(
            "strong_coupling_match: requires g*sqrt(N) > Gamma (resolved splitting)");

    MatchSolution m;
    m.kind = MatchKind::StrongSplit;
    m.kappa_star = e.gamma_inh;
    const double w0 = std::sqrt(e.g2n() - e.gamma_inh * e.gamma_inh);
    m.match_frequencies = {-w0, w0};
    m.dip_fwhm_predicted = 2.0 * e.gamma_inh;
    return m;
}

double absorption_efficiency(double cooperativity) {
    if (!(cooperativity >= 0.0))
        throw ValidationError("absorption_efficiency: cooperativity must be >= 0");
    const double onec = 1.0 + cooperativity;
    return 4.0 * cooperativity / (onec * onec);
}

double total_efficiency(double cooperativity, double tau1, double tau2,
                        std::optional<double> t2) {
    if (!(cooperativity >= 0.0))
        throw ValidationError("total_efficiency: cooperativity must be >= 0");
    if (tau1 < 0.0 || tau2 < 0.0)
        throw ValidationError("total_efficiency: storage times must be >= 0");
    if (t2 && *t2 <= 0.0)
        throw ValidationError("total_efficiency: T2 must be > 0 when given");

    const double ea = absorption_efficiency(cooperativity);
    double eta = ea * ea;
    if (t2) eta *= std::exp(-4.0 * (tau1 + tau2) / *t2);
    return eta;
}

std::vector<Dip> dip_fwhm(const ReflectionSpectrum& spectrum) {
    const auto& w = spectrum.omegas;
    const auto& r = spectrum.values;
    const std::size_t n = w.size();
    if (n < 3) throw NoDipError("dip_fwhm: spectrum too short");

    constexpr double kDepthFloor = 1e-3;  // below this, treat as numerical ripple
    std::vector<Dip> dips;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double d = 1.0 - r[i];
        if (d <= kDepthFloor) continue;
        if (!(d > 1.0 - r[i - 1] && d > 1.0 - r[i + 1])) continue;  // strict local max of 1-R

        const double half = d / 2.0;
        // Walk outward to the half-depth crossings and interpolate linearly.
        auto cross = [&](int dir) -> double {
            std::size_t j = i;
            while (true) {
                if ((dir < 0 && j == 0) || (dir > 0 && j + 1 == n))
                    throw ResolutionError("dip_fwhm: half-depth crossing leaves the grid");
                const std::size_t k = dir < 0 ? j - 1 : j + 1;
                const double dj = 1.0 - r[j];
                const double dk = 1.0 - r[k];
                if (dk > dj && dj > half)  // rising again before reaching half depth
                    throw ResolutionError("dip_fwhm: dips not separated at half depth");
                if (dk <= half) {
                    const double t = (dj - half) / (dj - dk);
                    return w[j] + t * (w[k] - w[j]);
                }
                j = k;
            }
        };
        Dip dip;
        dip.center = w[i];
        dip.depth = d;
        const double lo = cross(-1);
        const double hi = cross(+1);
        dip.fwhm = hi - lo;
        dips.push_back(dip);
    }
    if (dips.empty()) throw NoDipError("dip_fwhm: no dip above the depth floor");
    return dips;
}

std::optional<double> multimode_capacity(double kappa, double gamma_h) {
    if (!(kappa > 0.0))
        throw ValidationError("multimode_capacity: kappa must be > 0");
    if (gamma_h < 0.0)
        throw ValidationError("multimode_capacity: gamma_h must be >= 0");
    if (gamma_h == 0.0) return std::nullopt;  // unbounded
    return kappa / (25.0 * gamma_h);
}

std::complex<double> steady_state_oracle(const SpinBins& bins, double omega,
                                         const EnsembleParams& e, const CavityParams& c,
                                         double cavity_detuning) {
    if (bins.size() == 0)
        throw ValidationError("steady_state_oracle: bins must be nonempty");
    double wsum = 0.0;
    for (double wj : bins.weights) wsum += wj;
    if (std::abs(wsum - 1.0) > 1e-9)
        throw ValidationError("steady_state_oracle: bin weights must sum to 1");

    const double g2n = e.g2n();
    cplx chi{0.0, 0.0};
    for (std::size_t j = 0; j < bins.size(); ++j) {
        // steady-state spin response: w_j / ((wbar_j - w) - i gamma_h), folded
        // into the denominator as + g^2 N * w_j / (gamma_h + i (wbar_j - w))
        chi += bins.weights[j] / cplx(e.gamma_h, bins.centers[j] - omega);
    }
    const cplx den = cplx(c.kappa + c.kappa_int, cavity_detuning - omega) + g2n * chi;
    return 2.0 * c.kappa / den - 1.0;
}

}  // namespace cavmem
