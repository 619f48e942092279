#pragma once

#include <stdexcept>
#include <string>

namespace vortex {

// Base class for every failure the library raises on purpose.  Callers that
// only care about "library problem vs. everything else" can catch this one.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two or more vortices (or reduced coordinates) closer than the guard
// threshold.  Raised instead of letting the logarithmic terms produce NaN.
struct CollisionError : Error {
    using Error::Error;
};

// Input lies in the rotational sector (nu = 0) where the quotient map is
// undefined.
struct SingularSectorError : Error {
    using Error::Error;
};

// Slice-chart violation: coordinates outside the domain of the chart, or a
// radicand that is not positive.
struct ChartError : Error {
    using Error::Error;
};

// 36 u^2 > alpha_e^2: the linear return-map estimate is not elliptic.
struct HyperbolicRegimeError : Error {
    using Error::Error;
};

// Misuse of an interface: wrong satellite count, invalid family name,
// malformed configuration, zero strengths, ...
struct UsageError : Error {
    using Error::Error;
};

// Adaptive integration drove the step size below the representable floor.
struct StepUnderflowError : Error {
    using Error::Error;
};

// The vector field returned NaN or infinity.
struct NonFiniteFieldError : Error {
    using Error::Error;
};

// Event function does not change sign over the searched span.
struct NoEventError : Error {
    using Error::Error;
};

// Data too degenerate for the requested statistic (e.g. rotation number of
// coincident points).
struct DegenerateDataError : Error {
    using Error::Error;
};

} // namespace vortex
