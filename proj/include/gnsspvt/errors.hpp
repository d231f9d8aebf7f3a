#pragma once

#include <stdexcept>
#include <string>

namespace gnsspvt {

// Base for everything thrown by this library. Two broad families: input
// problems (bad file, bad argument, unsupported content) and numerical
// problems (singular geometry, divergence). The CLI maps the former to
// exit code 2 and the latter to exit code 3.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputError : Error {
  using Error::Error;
};

struct NumericError : Error {
  using Error::Error;
};

// Malformed file content: missing header, wrong column count, unparseable
// fields.
struct FormatError : InputError {
  using InputError::InputError;
};

// A file parsed fine but contained nothing usable.
struct EmptyInputError : InputError {
  using InputError::InputError;
};

// An argument outside its valid domain (negative time step, empty sample
// set, percentile outside [0,1], ...).
struct DomainError : InputError {
  using InputError::InputError;
};

// Measurement from a constellation we cannot time-align (e.g. GLONASS
// without leap-second configuration).
struct UnsupportedConstellationError : InputError {
  using InputError::InputError;
};

// Solutions and ground truth share no time span.
struct NoOverlapError : InputError {
  using InputError::InputError;
};

// Fewer usable satellites than unknowns allow.
struct InsufficientSatellitesError : NumericError {
  using NumericError::NumericError;
};

// Design matrix rank-deficient, or a linearization point coincides with a
// satellite.
struct SingularGeometryError : NumericError {
  using NumericError::NumericError;
};

// An iterative solve moved away from any fixed point.
struct DivergenceError : NumericError {
  using NumericError::NumericError;
};

// An iteration limit was hit before the convergence criterion (distinct
// from divergence: the iterates were still shrinking).
struct NonConvergenceError : NumericError {
  using NumericError::NumericError;
};

// Catch-all for failed factorizations and non-finite intermediates.
struct NumericalError : NumericError {
  using NumericError::NumericError;
};

}  // namespace gnsspvt
