// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace nspkit {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands have non-conformal shapes.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A matrix required to be (semi)definite has eigenvalues below tolerance.
class IndefiniteInput : public Error {
 public:
  using Error::Error;
};

/// A quantity that the underlying theory guarantees failed to materialize
/// numerically (rank decisions near the semidefinite boundary).
class NumericalBreakdown : public Error {
 public:
  using Error::Error;
};

/// Witness construction requested for a problem whose feasibility
/// conditions do not hold.
class InfeasibleProblem : public Error {
 public:
  using Error::Error;
};

/// Certificate construction requested for a system that is not
/// marginally stable.
class NotMarginallyStable : public Error {
 public:
  using Error::Error;
};

/// A matrix required to be invertible is singular at tolerance.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// Input data violates the hypotheses of the result being applied.
class HypothesisViolated : public Error {
 public:
  using Error::Error;
};

/// The supplied Slater point does not certify strict feasibility.
class SlaterViolated : public Error {
 public:
  using Error::Error;
};

/// Dilation completion requested although the norm conditions fail.
class ConditionsViolated : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or document.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace nspkit
