#include "cavmem/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "cavmem/analytic.hpp"
#include "cavmem/bins.hpp"
#include "cavmem/errors.hpp"

namespace cavmem {

namespace {
using cplx = std::complex<double>;

std::size_t snap_index(const SimTrace& tr, double t) {
    const long long i = std::llround((t - tr.t_start) / tr.dt);
    const long long last = static_cast<long long>(tr.size()) - 1;
    return static_cast<std::size_t>(std::clamp<long long>(i, 0, last));
}

double window_out_energy(const SimTrace& tr, double t_lo, double t_hi) {
    const std::size_t lo = snap_index(tr, t_lo);
    const std::size_t hi = snap_index(tr, t_hi);
    return tr.cum_e_out[hi] - tr.cum_e_out[lo];
}

double window_centroid(const SimTrace& tr, double t_lo, double t_hi) {
    const std::size_t lo = snap_index(tr, t_lo);
    const std::size_t hi = snap_index(tr, t_hi);
    double num = 0.0, den = 0.0;
    for (std::size_t n = lo; n <= hi; ++n) {
        const double wt = (n == lo || n == hi) ? 0.5 : 1.0;
        const double f = wt * std::norm(tr.e_out[n]);
        num += tr.time_at(n) * f;
        den += f;
    }
    return num / den;
}

// Coherence lifetime entering the prediction: the simulated decay rate when
// one is present, the configured lifetime otherwise.
std::optional<double> prediction_t2(const ProtocolConfig& cfg) {
    if (cfg.ensemble.gamma_h > 0.0) return 1.0 / cfg.ensemble.gamma_h;
    return cfg.t2;
}

void require(bool ok, const std::string& invariant) {
    if (!ok) throw ConfigError("protocol config violates: " + invariant);
}
}  // namespace

std::pair<double, double> ProtocolConfig::detune_interval() const {
    if (detune_window) return *detune_window;
    const double guard = 3.0 * pulse_duration;
    return {tau1 + guard, pi2_time() - guard};
}

void ProtocolConfig::validate() const {
    cavmem::validate(ensemble);
    cavmem::validate(cavity);
    require(std::isfinite(pulse_duration) && pulse_duration > 0.0,
            "pulse_duration > 0");
    require(std::isfinite(pulse_amplitude) && pulse_amplitude > 0.0,
            "pulse_amplitude > 0");
    const double t = pulse_duration;
    require(std::isfinite(tau1) && tau1 >= 5.0 * t,
            "tau1 >= 5 T (input pulse well inside the memory window)");
    require(std::isfinite(tau2) && tau2 > 3.0 * t,
            "tau2 > 3 T (silenced-echo window clear of the readout)");
    require(std::isfinite(detune_delta), "finite detune_delta");
    require(std::isfinite(echo_window_halfwidth) && echo_window_halfwidth >= 0.0,
            "echo_window_halfwidth >= 0");
    require(tau2 > echo_halfwidth(),
            "tau2 > echo window halfwidth (second control pulse outside the "
            "readout window)");
    require(bins_m >= 1, "bins_m >= 1");
    require(std::isfinite(truncation_p) && truncation_p >= 0.0 && truncation_p < 0.5,
            "truncation_p in [0, 0.5)");
    require(std::isfinite(dt) && dt >= 0.0, "dt >= 0 (0 = automatic)");
    const auto [on, off] = detune_interval();
    require(std::isfinite(on) && std::isfinite(off) && on < off,
            "detune window nonempty");
    require(on > tau1 && off <= pi2_time(),
            "detune window between the control pulses");
    require(on < silenced_echo_time() && silenced_echo_time() < off,
            "2 tau1 inside the detune window");
    require(on >= t_start() && off <= t_end(), "detune window within the span");
    if (t1) require(std::isfinite(*t1) && *t1 > 0.0, "t1 > 0");
    if (t2) require(std::isfinite(*t2) && *t2 > 0.0, "t2 > 0");
    if (finesse) require(std::isfinite(*finesse) && *finesse > 0.0, "finesse > 0");
}

double shape_fidelity(const SimTrace& trace, const ProtocolConfig& cfg) {
    const auto input =
        InputWaveform::gaussian(0.0, cfg.pulse_duration, cfg.pulse_amplitude);
    const double te = cfg.echo_time();
    const double hw = cfg.echo_halfwidth();
    const std::size_t lo = snap_index(trace, te - hw);
    const std::size_t hi = snap_index(trace, te + hw);

    double e_echo = 0.0;
    for (std::size_t n = lo; n <= hi; ++n)
        e_echo += ((n == lo || n == hi) ? 0.5 : 1.0) * std::norm(trace.e_out[n]);
    if (e_echo <= 0.0)
        throw FidelityUndefined("shape_fidelity: no echo energy in the window");

    // Overlap with the time-reversed input centered at te + s. The model may
    // slide by up to half a pulse width: the echo arrives retarded by the
    // cavity response time, and that timing offset is bounded and reported
    // separately (echo_peak_time); fidelity measures shape alone.
    auto overlap = [&](double s) {
        cplx inner{0.0, 0.0};
        double e_model = 0.0;
        for (std::size_t n = lo; n <= hi; ++n) {
            const double wt = (n == lo || n == hi) ? 0.5 : 1.0;
            const cplx model = input.eval(te + s - trace.time_at(n));
            inner += wt * trace.e_out[n] * std::conj(model);
            e_model += wt * std::norm(model);
        }
        if (e_model <= 0.0) return 0.0;  // model support misses the window entirely
        return std::norm(inner) / (e_echo * e_model);
    };

    // Coarse scan, then golden-section refinement of the best bracket; the
    // fixed evaluation pattern keeps the result deterministic.
    const double bound = 0.5 * cfg.pulse_duration;
    constexpr int kScan = 32;
    double best_s = 0.0, best_v = -1.0;
    for (int i = 0; i <= kScan; ++i) {
        const double s = -bound + 2.0 * bound * static_cast<double>(i) / kScan;
        const double v = overlap(s);
        if (v > best_v) {
            best_v = v;
            best_s = s;
        }
    }
    const double step = 2.0 * bound / kScan;
    double a = std::max(-bound, best_s - step);
    double b = std::min(bound, best_s + step);
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
    double f1 = overlap(x1), f2 = overlap(x2);
    for (int it = 0; it < 60; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = overlap(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = overlap(x1);
        }
    }
    return std::max(best_v, std::max(f1, f2));
}

ProtocolResult run_protocol(const ProtocolConfig& cfg) {
    cfg.validate();
    const auto bins = discretize(cfg.ensemble.dist_kind, cfg.ensemble.gamma_inh,
                                 cfg.bins_m, cfg.truncation_p,
                                 cfg.ensemble.center_offset);
    const double t = cfg.pulse_duration;
    const double dt =
        cfg.dt > 0.0 ? cfg.dt : default_dt(cfg.ensemble, cfg.cavity, t);
    const auto input = InputWaveform::gaussian(0.0, t, cfg.pulse_amplitude);

    DetuningSchedule sched;
    if (cfg.detune_delta != 0.0) {
        const auto [on, off] = cfg.detune_interval();
        sched.segments.push_back({on, off, cfg.detune_delta});
    }
    const std::vector<PiPulseEvent> pulses{{cfg.pi1_time()}, {cfg.pi2_time()}};

    EvolveOptions opts;
    opts.t_start = cfg.t_start();
    opts.t_end = cfg.t_end();
    opts.dt = dt;

    ProtocolResult res;
    res.trace = evolve(cfg.ensemble, cfg.cavity, bins, input, sched, pulses, opts);
    const SimTrace& tr = res.trace;

    res.input_energy = tr.cum_e_in.back();
    const double te = cfg.echo_time();
    const double hw = cfg.echo_halfwidth();
    res.echo_energy = window_out_energy(tr, te - hw, te + hw);
    res.eta_measured = res.echo_energy / res.input_energy;
    const double guard = 3.0 * t;
    res.first_echo_leakage =
        window_out_energy(tr, cfg.silenced_echo_time() - guard,
                          cfg.silenced_echo_time() + guard) /
        res.input_energy;

    const double coop = cfg.ensemble.g2n() /
                        (cfg.cavity.kappa * cfg.ensemble.gamma_inh);
    res.eta_predicted =
        total_efficiency(coop, cfg.tau1, cfg.tau2, prediction_t2(cfg));

    if (res.echo_energy > 1e-12 * res.input_energy) {
        res.echo_peak_time = window_centroid(tr, te - hw, te + hw);
        res.shape_fidelity = shape_fidelity(tr, cfg);
    } else {
        res.flags.push_back("echo_below_threshold");
        res.echo_peak_time = te;
        res.shape_fidelity = 0.0;
    }

    const auto regime = classify_regime(cfg.ensemble, cfg.cavity, t);
    if (!regime.ordering_ok) res.flags.push_back("regime_ordering_violated");

    // Discrete frequency bins carry a spurious rephasing at the beat period of
    // the closest bin spacing; keep it beyond the simulated span.
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < bins.size(); ++j)
        min_gap = std::min(min_gap, bins.centers[j] - bins.centers[j - 1]);
    if (bins.size() > 1) {
        const double revival = 2.0 * std::numbers::pi / min_gap;
        if (revival < opts.t_end - opts.t_start)
            res.flags.push_back("bin_revival_within_span");
    }

    res.ledger = energy_ledger(tr);
    if (cfg.ensemble.gamma_h == 0.0) {
        const double rel =
            std::abs(res.ledger.imbalance - res.ledger.intrinsic_loss) /
            res.input_energy;
        if (rel > 1e-3) res.flags.push_back("energy_imbalance");
    }

    if (cfg.finesse && cfg.t1)
        res.noise_budget =
            make_noise_budget(*cfg.finesse, coop, cfg.cavity.kappa, t, cfg.tau1,
                              cfg.tau2, *cfg.t1, prediction_t2(cfg),
                              res.eta_predicted);
    return res;
}

std::vector<SweepRow> sweep_protocol(const ProtocolConfig& base, SweepVariable var,
                                     const std::vector<double>& values, int jobs) {
    if (values.empty())
        throw ValidationError("sweep: value list must be nonempty");
    for (double v : values)
        if (!std::isfinite(v))
            throw ValidationError("sweep: values must be finite");
    if (var == SweepVariable::Cooperativity)
        for (double v : values)
            if (v <= 0.0)
                throw ValidationError("sweep: cooperativity values must be > 0");

    auto point_config = [&](double v) {
        ProtocolConfig cfg = base;
        switch (var) {
            case SweepVariable::Kappa:
                cfg.cavity.kappa = v;
                break;
            case SweepVariable::Cooperativity:
                cfg.cavity.kappa =
                    base.ensemble.g2n() / (v * base.ensemble.gamma_inh);
                break;
            case SweepVariable::Delta:
                cfg.detune_delta = v;
                break;
            case SweepVariable::GammaH:
                cfg.ensemble.gamma_h = v;
                break;
        }
        return cfg;
    };

    const std::size_t n = values.size();
    std::vector<SweepRow> rows(n);
    auto work = [&](std::size_t i) {
        const ProtocolConfig cfg = point_config(values[i]);
        ProtocolResult r = run_protocol(cfg);
        SweepRow& row = rows[i];
        row.variable_value = values[i];
        row.kappa = cfg.cavity.kappa;
        row.cooperativity = cfg.ensemble.g2n() /
                            (cfg.cavity.kappa * cfg.ensemble.gamma_inh);
        row.eta_measured = r.eta_measured;
        row.eta_predicted = r.eta_predicted;
        row.leakage = r.first_echo_leakage;
        row.fidelity = r.shape_fidelity;
        row.flags = std::move(r.flags);
    };

    int wanted = jobs;
    if (wanted <= 0) {
        wanted = static_cast<int>(std::thread::hardware_concurrency());
        if (wanted <= 0) wanted = 1;
    }
    const std::size_t workers = std::min<std::size_t>(
        static_cast<std::size_t>(wanted), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) work(i);
        return rows;
    }

    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto runner = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                work(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(runner);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return rows;
}

std::vector<SweepRow> sweep_efficiency(const ProtocolConfig& base,
                                       const std::vector<double>& c_values,
                                       int jobs) {
    return sweep_protocol(base, SweepVariable::Cooperativity, c_values, jobs);
}

std::vector<SuppressionPoint> suppression_scan(const ProtocolConfig& base,
                                               const std::vector<double>& deltas,
                                               int jobs) {
    if (deltas.empty())
        throw ValidationError("suppression scan: delta list must be nonempty");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!std::isfinite(deltas[i]) || deltas[i] < 0.0)
            throw ValidationError("suppression scan: deltas must be >= 0");
        if (i > 0 && deltas[i] <= deltas[i - 1])
            throw ValidationError("suppression scan: deltas must be ascending");
    }
    const auto rows = sweep_protocol(base, SweepVariable::Delta, deltas, jobs);
    std::vector<SuppressionPoint> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        out[i] = {rows[i].variable_value, rows[i].leakage};
    return out;
}

}  // namespace cavmem
