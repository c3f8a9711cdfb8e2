#pragma once

#include <stdexcept>
#include <string>

namespace setcalc {

/// Base class for all setcalc errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Two sets from different universes were combined.
class UniverseMismatch : public Error {
 public:
  using Error::Error;
};

/// A difference quotient was requested where m(A delta B) = m(A).
class ZeroDenominator : public Error {
 public:
  using Error::Error;
};

/// A closed-form derivative was requested for a function not marked continual.
class NotContinual : public Error {
 public:
  using Error::Error;
};

/// Fractal components overlap partially; delta across fractal interiors is undefined.
class PartialFractalOverlap : public Error {
 public:
  using Error::Error;
};

/// The Gram matrix of the symmetric-function basis is singular for the given values.
class SingularGram : public Error {
 public:
  using Error::Error;
};

/// The gamma curve is not single-valued on the requested measure range.
class MultivaluedCurve : public Error {
 public:
  using Error::Error;
};

/// No mean-value witness was found within tolerance.
class NoWitness : public Error {
 public:
  using Error::Error;
};

/// A series truncation did not reach the convergence tolerance.
class NonConvergent : public Error {
 public:
  using Error::Error;
};

/// A necessary-condition check was requested at a point that is not a verified minimizer.
class MinimalityUnverified : public Error {
 public:
  using Error::Error;
};

/// Integration over fractal components is not defined.
class UnsupportedFractal : public Error {
 public:
  using Error::Error;
};

/// The integrand is unbounded (or evaluates to a non-finite value) on the set.
class UnboundedIntegrand : public Error {
 public:
  using Error::Error;
};

/// Malformed expression text.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace setcalc
