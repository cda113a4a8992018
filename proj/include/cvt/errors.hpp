#pragma once

#include <stdexcept>
#include <string>

namespace cvt {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Structurally invalid input (non-symmetric matrix, bad preset parameters, even grid size).
class MalformedInput : public Error {
  public:
    using Error::Error;
};

/// Measurement angle outside the open interval (0, pi/2).
class GeometryError : public Error {
  public:
    using Error::Error;
};

/// A closed form valid only for symmetric states was requested on an asymmetric one.
class WrongRegime : public Error {
  public:
    using Error::Error;
};

/// State parameters sit on a singular boundary (e.g. c == b1) where the result diverges.
class SingularState : public Error {
  public:
    using Error::Error;
};

/// Argument outside the mathematical domain of the operation (e.g. nonpositive squeezing).
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Internal consistency failure that signals a non-bona-fide input state.
class InvariantInconsistency : public Error {
  public:
    using Error::Error;
};

/// Two CF grids with different extent or resolution were combined.
class GridMismatch : public Error {
  public:
    using Error::Error;
};

/// Conditioning on a (numerically) singular measurement covariance.
class DegenerateConditioning : public Error {
  public:
    using Error::Error;
};

/// The noise objective has no interior stationary point inside the search box.
class UnboundedOptimum : public Error {
  public:
    using Error::Error;
};

/// Invalid scenario configuration (CLI layer).
class ConfigError : public Error {
  public:
    using Error::Error;
};

} // namespace cvt
