#include "cavmem/noise.hpp"

#include <cmath>
#include <numbers>

#include "cavmem/errors.hpp"

namespace cavmem {

namespace {
constexpr double kPi = std::numbers::pi;

void require(bool ok, const char* msg) {
    if (!ok) throw ValidationError(msg);
}
}  // namespace

double collective_noise_probability(double finesse, double cooperativity, double kappa,
                                    double pulse_duration,
                                    std::vector<std::string>* flags) {
    require(finesse > 0.0, "collective_noise_probability: finesse must be > 0");
    require(cooperativity >= 0.0, "collective_noise_probability: C must be >= 0");
    require(kappa * pulse_duration > 0.0,
            "collective_noise_probability: kappa*T must be > 0");

    const double onec = 1.0 + cooperativity;
    const double eta_noise = (kPi / finesse) * 4.0 * cooperativity * cooperativity /
                             (onec * onec) * (kappa * pulse_duration);
    if (eta_noise > 0.1 && flags)
        flags->push_back("eta_noise_above_perturbative_range");
    return eta_noise;
}

double snr_collective(double finesse, double cooperativity, double kappa,
                      double pulse_duration, std::optional<double> tau1,
                      std::optional<double> t2) {
    require(finesse > 0.0, "snr_collective: finesse must be > 0");
    require(kappa * pulse_duration > 0.0, "snr_collective: kappa*T must be > 0");
    if (cooperativity == 0.0)
        throw SignalZero("snr_collective: zero cooperativity carries no signal");
    require(cooperativity > 0.0, "snr_collective: C must be >= 0");

    const double onec = 1.0 + cooperativity;
    double snr = (finesse / kPi) * 4.0 / (onec * onec) / (kappa * pulse_duration);
    if (tau1 && t2) snr *= std::exp(-4.0 * *tau1 / *t2);
    return snr;
}

double spontaneous_fraction(double tau1, double tau2, double t1,
                            std::vector<std::string>* flags) {
    require(tau1 + tau2 >= 0.0, "spontaneous_fraction: storage times must be >= 0");
    require(t1 > 0.0, "spontaneous_fraction: T1 must be > 0");
    const double frac = (tau1 + tau2) / t1;
    if (frac > 0.1 && flags) flags->push_back("storage_time_not_small_vs_t1");
    return frac;
}

double snr_spontaneous(double eta, double cooperativity, double tau1, double tau2,
                       double t1, double kappa, double pulse_duration) {
    require(eta >= 0.0, "snr_spontaneous: eta must be >= 0");
    require(cooperativity > 0.0, "snr_spontaneous: C must be > 0");
    require(t1 > 0.0, "snr_spontaneous: T1 must be > 0");
    require(kappa * pulse_duration > 0.0, "snr_spontaneous: kappa*T must be > 0");
    if (tau1 + tau2 <= 0.0)
        throw UnboundedSignal("snr_spontaneous: zero storage time, no spontaneous noise");

    return eta * t1 / (kPi * cooperativity * (tau1 + tau2) * kappa * pulse_duration);
}

DesignQuality design_quality(double alpha, double lambda) {
    require(alpha > 0.0, "design_quality: alpha must be > 0");
    require(lambda > 0.0, "design_quality: lambda must be > 0");
    DesignQuality q;
    q.q_linewidth_2kappa = 2.0 * kPi / (alpha * lambda);
    q.q_linewidth_kappa = 4.0 * kPi / (alpha * lambda);
    return q;
}

NoiseBudget make_noise_budget(double finesse, double cooperativity, double kappa,
                              double pulse_duration, double tau1, double tau2,
                              double t1, std::optional<double> t2, double eta) {
    NoiseBudget b;
    b.kappa_t = kappa * pulse_duration;
    b.tau1 = tau1;
    b.tau2 = tau2;
    b.t1 = t1;
    b.t2 = t2;

    // alpha*L from the finesse identity F * (alpha*L) = pi * C.
    b.alpha_l = kPi * cooperativity / finesse;
    if (b.alpha_l >= 0.1) b.flags.push_back("alpha_l_not_small");
    // The budget formulas linearize e^{alpha L} - 1 ~= alpha L; flag when the
    // exact expression deviates by more than 5%.
    if (b.alpha_l > 0.0 && (std::expm1(b.alpha_l) - b.alpha_l) / b.alpha_l > 0.05)
        b.flags.push_back("alpha_l_linearization_above_5pct");

    b.eta_noise =
        collective_noise_probability(finesse, cooperativity, kappa, pulse_duration, &b.flags);
    b.snr_collective = cooperativity > 0.0
                           ? snr_collective(finesse, cooperativity, kappa, pulse_duration)
                           : 0.0;
    b.n_s_fraction = spontaneous_fraction(tau1, tau2, t1, &b.flags);
    b.snr_spontaneous =
        (cooperativity > 0.0 && tau1 + tau2 > 0.0)
            ? snr_spontaneous(eta, cooperativity, tau1, tau2, t1, kappa, pulse_duration)
            : 0.0;
    return b;
}

}  // namespace cavmem
