#pragma once

#include <stdexcept>
#include <string>

namespace cavmem {

// Invalid physical parameters or malformed request arguments.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Configuration file problems; carries the 1-based line number when known (-1 otherwise).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg, int line_no = -1)
        : std::runtime_error(line_no >= 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
          line(line_no) {}
    int line;
};

// Requested analysis is outside its coupling-regime precondition.
struct RegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// No impedance-match solution exists for the given parameters.
struct NoMatchExists : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Closed-form expression not available for this line shape.
struct UnsupportedClosedForm : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Spectrum scan contains no dip to measure.
struct NoDipError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A dip exists but is not resolved by the sampling grid.
struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Echo energy too small for a meaningful shape overlap.
struct FidelityUndefined : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Signal reference is identically zero (e.g. SNR at zero coupling).
struct SignalZero : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quantity diverges for the given inputs (e.g. SNR with zero stored duration).
struct UnboundedSignal : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Time integration failed (instability or non-finite state); message carries diagnostics.
struct IntegratorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cavmem
