#pragma once

#include <stdexcept>
#include <string>

namespace adfischer {

// Shapes do not agree (non-square input, mismatched orders, bad block index).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input outside an operation's domain (non-positive epsilon, non-PD part, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// LU met a pivot below the singularity threshold.
class SingularityError : public std::runtime_error {
 public:
  SingularityError(const std::string& what, double pivot_magnitude)
      : std::runtime_error(what + " (pivot magnitude " + std::to_string(pivot_magnitude) + ")"),
        pivot_magnitude_(pivot_magnitude) {}

  double pivot_magnitude() const noexcept { return pivot_magnitude_; }

 private:
  double pivot_magnitude_;
};

// Iterative eigensolver exhausted its sweep budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A block determinant vanished, so the Fischer ratio is undefined.
class DegenerateInstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A proven bound was exceeded. This can only mean a bug in this library.
class ImplementationBugError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed matrix file or report document.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace adfischer
