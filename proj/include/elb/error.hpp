#pragma once

#include <stdexcept>
#include <string>

namespace elb {

/// Caller misuse: bad arguments, mismatched lengths, invalid flags.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Bad input data: malformed files, non-finite stream elements, infeasible generation.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace elb
