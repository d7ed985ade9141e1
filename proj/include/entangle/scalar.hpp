#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace entangle {

using cplx = std::complex<double>;

/// Default threshold for every "does this quantity vanish" decision.
inline constexpr double default_tolerance = 1e-8;

/// Threshold for comparing two values that should agree algebraically.
inline constexpr double comparison_tolerance = 1e-9;

/// Amplitudes with smaller magnitude are dropped from sparse states.
inline constexpr double prune_threshold = 1e-14;

/// Input whose shape, kind or size does not fit the operation.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Binary operation between elements of different algebras.
class KindMismatch : public ShapeError {
 public:
  using ShapeError::ShapeError;
};

/// NaN or infinity offered to a state or algebra element.
class NonFiniteValue : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Singular or otherwise degenerate linear algebra (bad basepoint, singular
/// group element, zero state where a nonzero one is required).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mixed absolute/relative comparison: |a-b| <= tol * max(1, |a|, |b|).
inline bool approx_equal(cplx a, cplx b, double tol = comparison_tolerance) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

inline bool is_finite(cplx z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline cplx checked(cplx z, const char* what) {
  if (!is_finite(z)) throw NonFiniteValue(std::string("non-finite value in ") + what);
  return z;
}

}  // namespace entangle
