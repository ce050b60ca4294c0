#ifndef HALLBRAID_ERRORS_HPP
#define HALLBRAID_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hallbraid {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Array / grid size disagreement between arguments.
struct ShapeError : Error {
  using Error::Error;
};

// A field whose y-mean (per x-column) is not zero where a zero-mean field is
// required, or whose removed mean varies with x.
struct MeanModeError : Error {
  using Error::Error;
};

// Coefficients violating the conjugate pairing u(-m,n) = conj(u(m,n)).
struct SymmetryError : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

struct BackwardTimeError : Error {
  using Error::Error;
};

struct StiffnessError : Error {
  using Error::Error;
};

// Snapshots not uniformly spaced in time.
struct SpacingError : Error {
  using Error::Error;
};

// Time sampling too coarse for the requested spectral-in-time computation.
struct ResolutionError : Error {
  using Error::Error;
};

// Evaluation of the resonance function at one of its poles.
struct PoleError : Error {
  using Error::Error;
};

struct QuadratureError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace hallbraid

#endif
