#pragma once

#include <span>
#include <stdexcept>
#include <string>

namespace biform {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point lies outside a chart domain or a bi-form's diagonal neighborhood.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A pointwise linear solve hit a singular or ill-conditioned matrix.
class LinearSolveError : public Error {
 public:
  LinearSolveError(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

/// Tangent-argument count does not match a bi-form's degree.
class ArityError : public Error {
 public:
  using Error::Error;
};

/// An operator would push a bi-form past left/right degree 2.
class DegreeOverflowError : public Error {
 public:
  using Error::Error;
};

/// Nested differentiation deeper than the jet engine supports.
class JetOrderError : public Error {
 public:
  using Error::Error;
};

/// Fields combined across different charts.
class ChartMismatchError : public Error {
 public:
  using Error::Error;
};

/// A bi-form fails the contrast conditions (degenerate or asymmetric metric).
class ContrastError : public Error {
 public:
  using Error::Error;
};

/// A coframe fails to be a frame at some point.
class FrameError : public Error {
 public:
  using Error::Error;
};

/// Unknown name in a registry (monotone functions, scenarios).
class RegistryError : public Error {
 public:
  using Error::Error;
};

/// Formats coordinates as "(a, b, c)" for error messages.
std::string format_coords(std::span<const double> x);

}  // namespace biform
