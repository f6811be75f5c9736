#pragma once

#include <stdexcept>
#include <string>

namespace novikov {

// Raised when a numerical precondition or invariant fails at runtime
// (non-finite data, positivity loss, solver stall, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised by the x-space solvers when |u_x| exceeds the smoothness guard.
class NearBreakingError : public NumericalError {
public:
    NearBreakingError()
        : NumericalError("near-breaking: switch to characteristic solver") {}
};

} // namespace novikov
