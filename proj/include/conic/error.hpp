#pragma once

#include <stdexcept>
#include <string>

namespace conic {

// Malformed input: bad dimensions, out-of-range parameters, unparsable literals.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A documented precondition of a geometric routine does not hold
// (e.g. a linear-subspace cone handed to a relint-based predicate).
class PreconditionViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// An iterative solver hit its iteration cap or lost numerical control.
class SolverFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A linear image collapsed every generator to zero.
class DegenerateCone : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Integer combinatorics exceeded the supported range.
class Overflow : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

}  // namespace conic
