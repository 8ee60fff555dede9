// errors.hpp — exception types shared by every dfslab module

#pragma once

#include <stdexcept>
#include <string>

namespace dfslab {

// Malformed input: bad indices, mismatched dimensions, invalid geometry.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Eigensolver failure, non-Hermitian input, or a contract the numerics could not meet.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Time step too large for the fixed-step integrator.
struct StabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace dfslab
