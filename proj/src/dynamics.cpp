#include "cavmem/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "cavmem/errors.hpp"

namespace cavmem {

namespace {
using cplx = std::complex<double>;

bool finite(double x) { return std::isfinite(x); }
}  // namespace

double DetuningSchedule::at(double t) const {
    for (const auto& s : segments)
        if (t >= s.t_start && t < s.t_end) return s.delta;
    return 0.0;
}

void DetuningSchedule::validate() const {
    double prev_end = -std::numeric_limits<double>::infinity();
    for (const auto& s : segments) {
        if (!finite(s.t_start) || !finite(s.t_end) || !finite(s.delta))
            throw ValidationError("detuning schedule: entries must be finite");
        if (s.t_end <= s.t_start)
            throw ValidationError("detuning schedule: segment must have t_end > t_start");
        if (s.t_start < prev_end)
            throw ValidationError("detuning schedule: segments overlap or are unordered");
        prev_end = s.t_end;
    }
}

std::complex<double> InputWaveform::eval(double t) const {
    if (const auto* g = std::get_if<GaussianPulse>(&shape)) {
        if (g->amplitude == 0.0) return {0.0, 0.0};
        const double sigma = g->duration / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
        const double x = t - g->t0;
        if (std::abs(x) > 5.0 * sigma) return {0.0, 0.0};
        const double env = g->amplitude * std::exp(-x * x / (4.0 * sigma * sigma));
        if (carrier_detuning == 0.0) return {env, 0.0};
        return std::polar(env, -carrier_detuning * x);
    }
    const auto& s = std::get<SampledInput>(shape);
    if (s.times.empty() || t < s.times.front() || t > s.times.back()) return {0.0, 0.0};
    const auto it = std::upper_bound(s.times.begin(), s.times.end(), t);
    if (it == s.times.begin()) return s.values.front();
    const std::size_t hi = static_cast<std::size_t>(it - s.times.begin());
    if (hi == s.times.size()) return s.values.back();
    const std::size_t lo = hi - 1;
    const double f = (t - s.times[lo]) / (s.times[hi] - s.times[lo]);
    return s.values[lo] + (s.values[hi] - s.values[lo]) * f;
}

InputWaveform InputWaveform::gaussian(double t0, double duration, double amplitude,
                                      double carrier_detuning) {
    InputWaveform w;
    w.shape = GaussianPulse{t0, duration, amplitude};
    w.carrier_detuning = carrier_detuning;
    return w;
}

void apply_pi_pulse(SimState& state) {
    for (auto& s : state.coherences) s = std::conj(s);
}

double default_dt(const EnsembleParams& e, const CavityParams& c, double pulse_duration) {
    double dt = std::numeric_limits<double>::infinity();
    if (c.kappa_total() > 0.0) dt = std::min(dt, 0.025 / c.kappa_total());
    const double gn = e.collective_coupling();
    if (gn > 0.0) dt = std::min(dt, 0.025 / gn);
    if (pulse_duration > 0.0) dt = std::min(dt, pulse_duration / 200.0);
    if (!finite(dt))
        throw ValidationError("default_dt: no finite rate to set the step from");
    return dt;
}

SimTrace evolve(const EnsembleParams& e, const CavityParams& c, const SpinBins& bins,
                const InputWaveform& input, const DetuningSchedule& schedule,
                const std::vector<PiPulseEvent>& pi_pulses, const EvolveOptions& opts) {
    validate(e);
    if (!finite(c.kappa) || c.kappa < 0.0)
        throw ValidationError("evolve: kappa must be >= 0");
    if (!finite(c.kappa_int) || c.kappa_int < 0.0)
        throw ValidationError("evolve: kappa_int must be >= 0");
    schedule.validate();
    const std::size_t m = bins.size();
    if (m == 0) throw ValidationError("evolve: bins must be nonempty");
    if (!(opts.dt > 0.0) || !finite(opts.dt))
        throw ValidationError("evolve: dt must be > 0");
    if (!(opts.t_end > opts.t_start))
        throw ValidationError("evolve: t_end must exceed t_start");
    if (!opts.initial_coherences.empty() && opts.initial_coherences.size() != m)
        throw ValidationError("evolve: initial_coherences size must match bin count");

    double wsum = 0.0;
    for (double wj : bins.weights) wsum += wj;
    if (std::abs(wsum - 1.0) > 1e-9)
        throw ValidationError("evolve: bin weights must sum to 1");

    const double span = opts.t_end - opts.t_start;
    const std::size_t nsteps =
        static_cast<std::size_t>(std::ceil(span / opts.dt - 1e-9));
    const double h = span / static_cast<double>(nsteps);
    const double t0 = opts.t_start;

    auto snap = [&](double t) -> long long {
        return std::llround((t - t0) / h);
    };

    SimTrace tr;
    tr.t_start = t0;
    tr.dt = h;
    tr.kappa = c.kappa;
    tr.kappa_int = c.kappa_int;
    tr.e_in.resize(nsteps + 1);
    tr.e_cav.resize(nsteps + 1);
    tr.e_out.resize(nsteps + 1);
    tr.spin_norm.resize(nsteps + 1);
    tr.cum_e_in.resize(nsteps + 1);
    tr.cum_e_out.resize(nsteps + 1);

    // Pi-pulse steps, snapped to the grid.
    std::vector<std::size_t> pulse_steps;
    for (const auto& ev : pi_pulses) {
        const long long idx = snap(ev.time);
        if (idx < 0 || idx > static_cast<long long>(nsteps))
            throw ValidationError("evolve: pi pulse outside the integration span");
        pulse_steps.push_back(static_cast<std::size_t>(idx));
        tr.events.emplace_back(tr.time_at(static_cast<std::size_t>(idx)), "pi_pulse");
    }
    std::sort(pulse_steps.begin(), pulse_steps.end());

    // Detuning segments as grid-index ranges.
    struct Seg {
        std::size_t on, off;
        double delta;
    };
    std::vector<Seg> segs;
    for (const auto& s : schedule.segments) {
        const long long on = std::clamp<long long>(snap(s.t_start), 0,
                                                   static_cast<long long>(nsteps));
        const long long off = std::clamp<long long>(snap(s.t_end), 0,
                                                    static_cast<long long>(nsteps));
        if (off <= on) continue;
        segs.push_back({static_cast<std::size_t>(on), static_cast<std::size_t>(off), s.delta});
        tr.events.emplace_back(tr.time_at(static_cast<std::size_t>(on)), "detune_on");
        tr.events.emplace_back(tr.time_at(static_cast<std::size_t>(off)), "detune_off");
    }
    std::sort(tr.events.begin(), tr.events.end());

    // Input samples on the grid (stage midpoints are evaluated on the fly).
    for (std::size_t n = 0; n <= nsteps; ++n) tr.e_in[n] = input.eval(tr.time_at(n));

    // Per-bin propagators for a full and half step, and weighted copies for
    // the three coupling sums.
    const double n_spins = e.n_spins;
    const double g = e.g;
    const double gh = e.gamma_h;
    std::vector<double> pr(m), pi_(m), hr(m), hi(m), wpr(m), wpi(m), whr(m), whi(m);
    std::vector<double> sr(m, 0.0), si(m, 0.0);
    const double decay_full = std::exp(-gh * h);
    const double decay_half = std::exp(-gh * h * 0.5);
    for (std::size_t j = 0; j < m; ++j) {
        const double th = -bins.centers[j] * h;
        pr[j] = decay_full * std::cos(th);
        pi_[j] = decay_full * std::sin(th);
        hr[j] = decay_half * std::cos(th * 0.5);
        hi[j] = decay_half * std::sin(th * 0.5);
        const double wj = bins.weights[j];
        wpr[j] = wj * pr[j];
        wpi[j] = wj * pi_[j];
        whr[j] = wj * hr[j];
        whi[j] = wj * hi[j];
    }

    cplx e_amp = opts.initial_cavity;
    if (!opts.initial_coherences.empty())
        for (std::size_t j = 0; j < m; ++j) {
            sr[j] = opts.initial_coherences[j].real();
            si[j] = opts.initial_coherences[j].imag();
        }

    cplx wh{0.0, 0.0};  // sum_j w_j H_j (constant)
    for (std::size_t j = 0; j < m; ++j) wh += cplx(whr[j], whi[j]);

    auto weighted_sums = [&](cplx& s0, cplx& sh, cplx& sf, double& nrm) {
        double s0r = 0, s0i = 0, shr_ = 0, shi_ = 0, sfr = 0, sfi = 0, acc = 0;
        for (std::size_t j = 0; j < m; ++j) {
            const double xr = sr[j], xi = si[j];
            const double wj = bins.weights[j];
            s0r += wj * xr;
            s0i += wj * xi;
            shr_ += whr[j] * xr - whi[j] * xi;
            shi_ += whr[j] * xi + whi[j] * xr;
            sfr += wpr[j] * xr - wpi[j] * xi;
            sfi += wpr[j] * xi + wpi[j] * xr;
            acc += wj * (xr * xr + xi * xi);
        }
        s0 = {s0r, s0i};
        sh = {shr_, shi_};
        sf = {sfr, sfi};
        nrm = acc;
    };

    cplx s0, sh, sf;
    double norm_acc = 0.0;
    weighted_sums(s0, sh, sf, norm_acc);

    const double s2k = std::sqrt(2.0 * c.kappa);
    const cplx ign{0.0, g * n_spins};
    const cplx ig{0.0, g};
    const double initial_total = std::norm(e_amp) + n_spins * norm_acc;

    std::size_t next_pulse = 0;
    std::size_t seg_idx = 0;
    double cached_dc = std::numeric_limits<double>::quiet_NaN();
    cplx pc, hc;

    for (std::size_t n = 0; n <= nsteps; ++n) {
        while (next_pulse < pulse_steps.size() && pulse_steps[next_pulse] == n) {
            for (std::size_t j = 0; j < m; ++j) si[j] = -si[j];
            weighted_sums(s0, sh, sf, norm_acc);
            ++next_pulse;
        }

        tr.e_cav[n] = e_amp;
        tr.e_out[n] = s2k * e_amp - tr.e_in[n];
        tr.spin_norm[n] = n_spins * norm_acc;
        if (n == 0) {
            tr.cum_e_in[0] = 0.0;
            tr.cum_e_out[0] = 0.0;
        } else {
            tr.cum_e_in[n] = tr.cum_e_in[n - 1] +
                             0.5 * h * (std::norm(tr.e_in[n - 1]) + std::norm(tr.e_in[n]));
            tr.cum_e_out[n] = tr.cum_e_out[n - 1] +
                              0.5 * h * (std::norm(tr.e_out[n - 1]) + std::norm(tr.e_out[n]));
        }
        if (n == nsteps) break;

        while (seg_idx < segs.size() && n >= segs[seg_idx].off) ++seg_idx;
        const double dc =
            (seg_idx < segs.size() && n >= segs[seg_idx].on && n < segs[seg_idx].off)
                ? segs[seg_idx].delta
                : 0.0;
        if (dc != cached_dc || n == 0) {
            const cplx lc{-c.kappa_total(), -dc};
            pc = std::exp(lc * h);
            hc = std::exp(lc * (h * 0.5));
            cached_dc = dc;
        }

        const double t = tr.time_at(n);
        const cplx ein0 = tr.e_in[n];
        const cplx einh = input.eval(t + 0.5 * h);
        const cplx ein1 = tr.e_in[n + 1];

        const cplx fe1 = s2k * ein0 + ign * s0;
        const cplx fs1 = ig * e_amp;
        const cplx e2 = hc * (e_amp + 0.5 * h * fe1);
        const cplx sum2 = sh + 0.5 * h * fs1 * wh;
        const cplx fe2 = s2k * einh + ign * sum2;
        const cplx fs2 = ig * e2;
        const cplx e3 = hc * e_amp + 0.5 * h * fe2;
        const cplx sum3 = sh + 0.5 * h * fs2 * wsum;
        const cplx fe3 = s2k * einh + ign * sum3;
        const cplx fs3 = ig * e3;
        const cplx e4 = pc * e_amp + h * hc * fe3;
        const cplx sum4 = sf + h * fs3 * wh;
        const cplx fe4 = s2k * ein1 + ign * sum4;
        const cplx fs4 = ig * e4;

        e_amp = pc * e_amp + (h / 6.0) * (pc * fe1 + 2.0 * hc * fe2 + 2.0 * hc * fe3 + fe4);

        const cplx a = (h / 6.0) * fs1;
        const cplx b = (h / 6.0) * (2.0 * fs2 + 2.0 * fs3);
        const cplx c4 = (h / 6.0) * fs4;
        const double ar = a.real(), ai = a.imag();
        const double br = b.real(), bi = b.imag();
        const double cr = c4.real(), ci = c4.imag();
        double s0r = 0, s0i = 0, shr_ = 0, shi_ = 0, sfr = 0, sfi = 0, acc = 0;
        for (std::size_t j = 0; j < m; ++j) {
            const double xr = sr[j] + ar;
            const double xi = si[j] + ai;
            const double nr = pr[j] * xr - pi_[j] * xi + hr[j] * br - hi[j] * bi + cr;
            const double ni = pr[j] * xi + pi_[j] * xr + hr[j] * bi + hi[j] * br + ci;
            sr[j] = nr;
            si[j] = ni;
            const double wj = bins.weights[j];
            s0r += wj * nr;
            s0i += wj * ni;
            shr_ += whr[j] * nr - whi[j] * ni;
            shi_ += whr[j] * ni + whi[j] * nr;
            sfr += wpr[j] * nr - wpi[j] * ni;
            sfi += wpr[j] * ni + wpi[j] * nr;
            acc += wj * (nr * nr + ni * ni);
        }
        s0 = {s0r, s0i};
        sh = {shr_, shi_};
        sf = {sfr, sfi};
        norm_acc = acc;

        if ((n & 255u) == 255u) {
            const double total = std::norm(e_amp) + n_spins * norm_acc;
            const double budget = 1e3 * (tr.cum_e_in[n] + initial_total + 1e-30);
            if (!finite(total) || total > budget) {
                std::ostringstream os;
                os << "evolve: state norm " << total << " exceeds energy budget "
                   << budget << " at t = " << tr.time_at(n)
                   << " (dt too large or unstable configuration)";
                throw IntegratorError(os.str());
            }
        }
    }

    tr.final_state.t = tr.time_at(nsteps);
    tr.final_state.cavity_amp = e_amp;
    tr.final_state.coherences.resize(m);
    for (std::size_t j = 0; j < m; ++j) tr.final_state.coherences[j] = {sr[j], si[j]};
    return tr;
}

EnergyLedger energy_ledger(const SimTrace& trace) {
    if (trace.size() < 2)
        throw ValidationError("energy_ledger: trace too short");
    EnergyLedger led;
    led.e_in_total = trace.cum_e_in.back();
    led.e_out_total = trace.cum_e_out.back();
    led.residual_cavity = std::norm(trace.e_cav.back());
    led.residual_spins = trace.spin_norm.back();
    led.imbalance = led.e_in_total - led.e_out_total - led.residual_cavity -
                    led.residual_spins;
    double cav_integral = 0.0;
    for (std::size_t n = 1; n < trace.size(); ++n)
        cav_integral += 0.5 * trace.dt *
                        (std::norm(trace.e_cav[n - 1]) + std::norm(trace.e_cav[n]));
    led.intrinsic_loss = 2.0 * trace.kappa_int * cav_integral;
    return led;
}

}  // namespace cavmem
