#pragma once

#include <stdexcept>

namespace kvnlab {

/// Invalid argument to an operation (bad parameter value, out-of-range index).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Data violates an operation's contract (norm loss, negative density, ...).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace kvnlab
