#pragma once

#include <numbers>

namespace cavmem {

// All internal frequencies are angular (rad/s); all internal times are seconds.
// Configuration files carry frequencies in MHz together with a single flag that
// says whether those numbers are already angular (Mrad/s, typical of plots that
// quote bare "MHz" rate values) or are cycle frequencies that need a 2*pi.
enum class FrequencyUnit {
    AngularRadPerSec,   // value is an angular rate; MHz means Mrad/s
    CyclesHzTimes2Pi,   // value is a cycle frequency; MHz means 2*pi*1e6 rad/s
};

struct FrequencyConvention {
    FrequencyUnit unit = FrequencyUnit::AngularRadPerSec;

    static constexpr double mhz_to_rad_per_s(double mhz, FrequencyUnit u) {
        return u == FrequencyUnit::AngularRadPerSec ? mhz * 1e6
                                                    : mhz * 2.0 * std::numbers::pi * 1e6;
    }
    static constexpr double rad_per_s_to_mhz(double w, FrequencyUnit u) {
        return u == FrequencyUnit::AngularRadPerSec ? w / 1e6
                                                    : w / (2.0 * std::numbers::pi * 1e6);
    }

    double to_internal(double mhz) const { return mhz_to_rad_per_s(mhz, unit); }
    double from_internal(double w) const { return rad_per_s_to_mhz(w, unit); }
};

constexpr double microseconds_to_seconds(double us) { return us * 1e-6; }
constexpr double seconds_to_microseconds(double s) { return s * 1e6; }
constexpr double milliseconds_to_seconds(double ms) { return ms * 1e-3; }

}  // namespace cavmem
