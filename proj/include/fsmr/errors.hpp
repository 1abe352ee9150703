#pragma once

#include <stdexcept>
#include <string>

namespace fsmr {

/// Raised when a caller passes parameters outside an operation's domain.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when the input carries no usable signal (e.g. every pixel lost).
class DegenerateInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be read, decoded or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fsmr
