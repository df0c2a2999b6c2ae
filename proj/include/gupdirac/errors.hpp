#pragma once

#include <stdexcept>
#include <string>

namespace gupdirac {

/// Base class for every physics or numerics failure raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (nonpositive mass, |x| >= pi/2, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// beta = 0: the minimal-length construction is undefined and the caller must use the ordinary limit.
class NoMinimalLengthError : public Error {
public:
  using Error::Error;
};

/// rho = 0 (lambda = 0): the momentum-space operators lose their differential part.
class CriticalPointError : public Error {
public:
  using Error::Error;
};

/// |rho| = rho*: the regime boundary, where the closed-form tables do not apply.
class RegimeBoundaryError : public Error {
public:
  using Error::Error;
};

/// A level family that has no admissible members for the given parameters.
class NotPermissibleError : public Error {
public:
  using Error::Error;
};

/// Negative radicand when inverting k^2 for an energy.
class UnphysicalStateError : public Error {
public:
  using Error::Error;
};

/// A component solution that cannot be paired into a spinor.
class DiscardedSolutionError : public Error {
public:
  using Error::Error;
};

/// Quantum numbers that violate the admissibility predicate of a solution class.
class InadmissibleError : public Error {
public:
  using Error::Error;
};

/// Iterative or quadrature failure.
class NumericError : public Error {
public:
  using Error::Error;
};

/// Grid too coarse to separate neighbouring critical points.
class ResolutionError : public Error {
public:
  using Error::Error;
};

/// Should be unreachable; raised when an exhaustive case analysis falls through.
class InternalConsistencyError : public Error {
public:
  using Error::Error;
};

} // namespace gupdirac
