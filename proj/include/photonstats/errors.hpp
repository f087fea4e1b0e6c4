#pragma once

#include <stdexcept>
#include <string>

namespace photonstats {

// Model or input data failed validation (shape mismatch, non-Hermitian or
// non positive definite sigma, malformed files, bad flag combinations).
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A configurable enumeration or order bound was exceeded.
struct BoundsError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Requested order exceeds the data provided (moment prefixes, count models).
struct CoverageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Sample too small for the requested statistic.
struct DofError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// The spectral weight system is singular at this matrix dimension.
struct DegenerateDimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical failure at runtime (failed factorization, singular solve).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace photonstats
