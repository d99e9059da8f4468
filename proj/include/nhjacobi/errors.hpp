#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nhj {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: dimension mismatch, unknown model, malformed option.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// Initial data violates a constraint the operation requires.
class ConstraintViolationError : public InvalidInputError {
 public:
  ConstraintViolationError(const std::string& what, int row, double residual)
      : InvalidInputError(what), row_(row), residual_(residual) {}
  int row() const { return row_; }
  double residual() const { return residual_; }

 private:
  int row_;
  double residual_;
};

// Numerical failures: singular solves, degenerate distributions, blow-ups.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public NumericalError {
 public:
  SingularMatrixError(const std::string& what, double pivot)
      : NumericalError(what + " is singular (pivot " + std::to_string(pivot) + ")"),
        pivot_(pivot) {}
  double pivot() const { return pivot_; }

 private:
  double pivot_;
};

// E^T G E (or the constraint matrix C) is singular at `point`.
class RegularityError : public NumericalError {
 public:
  RegularityError(const std::string& what, std::vector<double> point)
      : NumericalError(what + " at q = " + format_point(point)), point_(std::move(point)) {}
  const std::vector<double>& point() const { return point_; }

  static std::string format_point(const std::vector<double>& p) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
    os << ')';
    return os.str();
  }

 private:
  std::vector<double> point_;
};

class DegenerateDistributionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace nhj
