#pragma once

#include <stdexcept>
#include <string>

namespace syz {

// Bad input: out-of-range parameters, malformed data, violated preconditions.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// A precondition of an operation that the caller can repair (for example a
// threshold that must be exceeded).  Reported like a validation error.
class PreconditionError : public ValidationError {
public:
    explicit PreconditionError(const std::string& what) : ValidationError(what) {}
};

// The inputs were valid but the computation could not produce a trustworthy
// number (non-finite samples, failed fit, missing bracket).
class NumericalFailure : public std::runtime_error {
public:
    explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace syz
