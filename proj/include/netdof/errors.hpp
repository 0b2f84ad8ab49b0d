#pragma once

#include <stdexcept>
#include <string>

namespace netdof {

// Error buckets mirror the CLI exit codes: usage/parse/validation -> 2,
// enumeration ceiling -> 3, failed verification checks -> 1.

struct SyntaxError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ReferenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroCoefficientError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CeilingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AbsentCoefficientError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Data-dependent estimation failure (too few usable points, zero counts).
struct EstimationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A verification-style check that did not hold (lift exhausted, decode error).
struct CheckError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace netdof
