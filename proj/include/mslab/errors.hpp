#pragma once

#include <stdexcept>
#include <string>

namespace mslab {

/// Point outside the domain of an operation (e.g. evaluation at a boundary
/// spectrum point, |z| > 1).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or mutually inconsistent arguments.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Circle quadrature cannot be applied with the requested node layout.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative method failed to converge.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Broken internal invariant. Should be unreachable.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace mslab
