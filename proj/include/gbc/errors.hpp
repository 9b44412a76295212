#pragma once

#include <stdexcept>

namespace gbc {

// Shape/degree misuse of the algebra (wrong n, invalid bidegree, ...).
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Runtime numerical breakdown (loss of positive-definiteness, singular
// solve, failed internal consistency check).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace gbc
