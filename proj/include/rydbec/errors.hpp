#pragma once

#include <stdexcept>
#include <string>

namespace rydbec {

// Fock cutoff too small: the discarded coherent-state tail carries more
// weight than the truncation budget allows.
struct TruncationError : std::runtime_error {
    double tail_weight;
    TruncationError(const std::string& what, double tail)
        : std::runtime_error(what), tail_weight(tail) {}
};

// Operator/state dimensions or subsystem labels are inconsistent.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Input fails a physicality check (norm, Hermiticity, trace, positivity).
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A master-equation run became untrustworthy at the reported scaled time.
struct IntegrationError : std::runtime_error {
    double tau;
    IntegrationError(const std::string& what, double when)
        : std::runtime_error(what), tau(when) {}
};

// Malformed scenario configuration; the message names the offending field.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace rydbec
