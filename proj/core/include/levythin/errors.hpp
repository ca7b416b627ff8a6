#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace levythin {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scalar or configuration parameter is out of range (alpha, B, dof, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A natural parameter lies outside its family's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A feature value lies outside the support of a density or sampler.
class SupportError : public Error {
 public:
  using Error::Error;
};

/// Dimensions of matrices or vectors disagree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A matrix factorization failed (not positive-definite, not symmetric).
class DecompositionError : public Error {
 public:
  using Error::Error;
};

/// Training data cannot support a fit (e.g. a class has no examples).
class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

class OptimizationError : public Error {
 public:
  OptimizationError(const std::string& what, double final_gradient_norm)
      : Error(what + " (final gradient max-norm " + format_norm(final_gradient_norm) + ")"),
        gradient_norm_(final_gradient_norm) {}

  double gradient_norm() const noexcept { return gradient_norm_; }

 private:
  static std::string format_norm(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
  }

  double gradient_norm_;
};

/// Malformed input files.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace levythin
