#pragma once

#include <stdexcept>
#include <string>

namespace ocrs {

/// Caller supplied something outside an operation's domain.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numeric routine produced a non-finite value.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A state that well-formed inputs cannot reach (infeasible LP-Pricing, empty
/// feasible box, ...).
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Oracle refused an input whose exact treatment would blow up.
class RefusedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ocrs
