#pragma once

#include <stdexcept>
#include <string>

namespace philab {

/// Argument outside the mathematical domain of an operation (e.g. K(0)).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Configuration or input that fails validation before any computation.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation point coincides with a point mass of the source.
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A structural invariant of the dyadic machinery was violated.
/// Indicates a geometry or bookkeeping bug, never bad user input.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace philab
