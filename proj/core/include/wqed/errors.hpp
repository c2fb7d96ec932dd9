#pragma once

#include <stdexcept>
#include <string>

namespace wqed {

/// Invalid or inconsistent array/run configuration.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Two bare frequencies are too close for the subradiant diagonalization;
/// the caller should cluster them first (reduce_degenerate).
struct NearDegenerate : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The probe detuning coincides with a bare atomic frequency, where the
/// single-site transfer matrix diverges.
struct OnAtomResonance : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonUniqueSteadyState : std::runtime_error {
    NonUniqueSteadyState(const std::string& what, int null_dim)
        : std::runtime_error(what), null_dimension(null_dim) {}
    int null_dimension;
};

struct ZeroDrive : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SlowConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Unsupported : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace wqed
