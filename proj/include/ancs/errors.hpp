#pragma once

#include <stdexcept>
#include <string>

namespace ancs {

/// Argument outside the mathematical domain of an operation (u >= R^2, nbar out of range, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed input that is not a domain issue: bad family parameters, mismatched orders.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// An iterative procedure (truncation, quadrature, root bracketing) gave up.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ancs
