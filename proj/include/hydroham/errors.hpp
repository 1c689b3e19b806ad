#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hydroham {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `position` is a 0-based character offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Evaluation left the domain of a function: ln of a non-positive value,
/// division by zero, 0 raised to a negative power, and so on.
class DomainError : public Error {
 public:
  DomainError(const std::string& message, std::string subtree)
      : Error(message + " in '" + subtree + "'"), subtree_(std::move(subtree)) {}

  const std::string& subtree() const noexcept { return subtree_; }

 private:
  std::string subtree_;
};

/// The resample budget of a sample plan ran out.
class DomainTooHostile : public Error {
 public:
  using Error::Error;
};

class DegenerateMetricError : public Error {
 public:
  DegenerateMetricError(double det, std::vector<double> point);

  double determinant() const noexcept { return det_; }
  const std::vector<double>& point() const noexcept { return point_; }

 private:
  double det_;
  std::vector<double> point_;
};

/// A constant block or a builder precondition was violated.
class ConstraintViolation : public Error {
 public:
  using Error::Error;
};

/// Structurally invalid input (dimension mismatch, bad parameters, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

}  // namespace hydroham
