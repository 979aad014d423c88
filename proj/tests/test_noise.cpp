#include <algorithm>
#include <cmath>
#include <numbers>

#include "cavmem/analytic.hpp"
#include "cavmem/errors.hpp"
#include "cavmem/model.hpp"
#include "cavmem/noise.hpp"
#include "doctest.h"

using namespace cavmem;

namespace {
bool has_flag(const std::vector<std::string>& flags, const std::string& f) {
    return std::find(flags.begin(), flags.end(), f) != flags.end();
}
}  // namespace

TEST_CASE("collective noise probability at the matched point") {
    // (pi/F) * 4C^2/(1+C)^2 * kappa*T with F = 1e4, C = 1, kappa*T = 10.
    const double p = collective_noise_probability(1e4, 1.0, 10.0, 1.0);
    CHECK(p == doctest::Approx(0.0031415926535897933).epsilon(1e-12));
    CHECK(p == doctest::Approx(std::numbers::pi * 1e-3).epsilon(1e-15));
}

TEST_CASE("collective signal-to-noise at the matched point") {
    // (F/pi) * 4/(1+C)^2 / (kappa*T) -> F/(pi*kappa*T) = 1000/pi at C = 1.
    const double s = snr_collective(1e4, 1.0, 10.0, 1.0);
    CHECK(std::abs(s - 318.30988618379067) / 318.30988618379067 <= 1e-9);
}

TEST_CASE("snr * noise probability equals the storage efficiency identically") {
    for (double c : {0.5, 1.0, 2.0}) {
        const double s = snr_collective(1e4, c, 10.0, 1.0);
        const double p = collective_noise_probability(1e4, c, 10.0, 1.0);
        const double eta = total_efficiency(c);
        CHECK(std::abs(s * p - eta) / eta <= 1e-12);
    }
}

TEST_CASE("signal dephasing discounts the collective snr") {
    const double bare = snr_collective(1e4, 1.0, 10.0, 1.0);
    const double decayed = snr_collective(1e4, 1.0, 10.0, 1.0, 2.0, 8.0);
    CHECK(decayed == doctest::Approx(bare * std::exp(-1.0)).epsilon(1e-12));
    // Supplying only one of (tau1, T2) applies no discount.
    CHECK(snr_collective(1e4, 1.0, 10.0, 1.0, 2.0, std::nullopt) == bare);
}

TEST_CASE("spontaneously excited fraction") {
    std::vector<std::string> flags;
    CHECK(spontaneous_fraction(1.0, 1.0, 20.0, &flags) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(flags.empty());  // 0.1 is the inclusive edge of the valid range
    CHECK(spontaneous_fraction(3.0, 0.0, 20.0, &flags) == doctest::Approx(0.15).epsilon(1e-15));
    CHECK(has_flag(flags, "storage_time_not_small_vs_t1"));
    CHECK_THROWS_AS(spontaneous_fraction(1.0, 1.0, 0.0), ValidationError);
}

TEST_CASE("spontaneous-decay signal-to-noise") {
    // eta*T1/(pi*C*(tau1+tau2)*kappa*T) = 1000/(pi*10) = 100/pi.
    const double s = snr_spontaneous(1.0, 1.0, 0.5, 0.5, 1000.0, 10.0, 1.0);
    CHECK(s == doctest::Approx(31.830988618379067).epsilon(1e-12));
    CHECK_THROWS_AS(snr_spontaneous(1.0, 1.0, 0.0, 0.0, 1000.0, 10.0, 1.0), UnboundedSignal);
    CHECK_THROWS_AS(snr_spontaneous(1.0, 0.0, 0.5, 0.5, 1000.0, 10.0, 1.0), ValidationError);
}

TEST_CASE("zero cooperativity carries no collective signal") {
    CHECK_THROWS_AS(snr_collective(1e4, 0.0, 10.0, 1.0), SignalZero);
}

TEST_CASE("full budget at the matched reference point") {
    const double eta = total_efficiency(1.0);
    auto b = make_noise_budget(1e4, 1.0, 10.0, 1.0, 0.5, 0.5, 1000.0, std::nullopt, eta);
    CHECK(b.alpha_l == doctest::Approx(std::numbers::pi / 1e4).epsilon(1e-15));
    CHECK(b.eta_noise == doctest::Approx(std::numbers::pi * 1e-3).epsilon(1e-12));
    CHECK(std::abs(b.snr_collective - 318.30988618379067) / 318.30988618379067 <= 1e-9);
    CHECK(b.n_s_fraction == doctest::Approx(1e-3).epsilon(1e-15));
    CHECK(b.snr_spontaneous == doctest::Approx(31.830988618379067).epsilon(1e-12));
    CHECK(b.kappa_t == 10.0);
    CHECK(b.flags.empty());
}

TEST_CASE("budget flags leave the perturbative regime") {
    auto b = make_noise_budget(10.0, 5.0, 10.0, 1.0, 50.0, 50.0, 200.0, std::nullopt,
                               total_efficiency(5.0));
    CHECK(has_flag(b.flags, "alpha_l_not_small"));
    CHECK(has_flag(b.flags, "alpha_l_linearization_above_5pct"));
    CHECK(has_flag(b.flags, "eta_noise_above_perturbative_range"));
    CHECK(has_flag(b.flags, "storage_time_not_small_vs_t1"));
}

TEST_CASE("quality-factor conventions differ by exactly two") {
    auto q = design_quality(8.9e-3, 0.03);
    CHECK(q.q_linewidth_kappa == 2.0 * q.q_linewidth_2kappa);
    CHECK_THROWS_AS(design_quality(0.0, 0.03), ValidationError);
    CHECK_THROWS_AS(design_quality(8.9e-3, 0.0), ValidationError);
}

TEST_CASE("erbium-style design point: absorption and quality factor") {
    // g*sqrt(N) = 2*pi*4 MHz, Gamma = 2*pi*75 MHz, v = 2.998e8 m/s.
    const double gn = 2.0 * std::numbers::pi * 4e6;
    const double gamma = 2.0 * std::numbers::pi * 75e6;
    const double alpha = absorption_coefficient(gn * gn, gamma, 2.998e8);
    CHECK(std::abs(alpha - 8.9e-3) / 8.9e-3 < 0.02);
    CHECK(alpha == doctest::Approx(8.94204713497e-3).epsilon(1e-10));

    auto q = design_quality(alpha, 0.03);
    CHECK(q.q_linewidth_kappa == doctest::Approx(46843.75).epsilon(1e-9));
    CHECK(q.q_linewidth_2kappa == doctest::Approx(23421.875).epsilon(1e-9));
    CHECK(std::abs(q.q_linewidth_kappa - 47000.0) / 47000.0 < 0.05);
}
