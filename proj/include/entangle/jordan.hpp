#pragma once

// Cubic Jordan algebras J1, J1+1, J1+1+1, J1+2 and J3 = M3(C): cubic norm,
// sharp map, trace bilinear form, the Springer construction of the latter two
// from the norm alone, and the embedding chain into J3.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include <Eigen/Dense>

#include "entangle/scalar.hpp"

namespace entangle::jordan {

using Mat2 = Eigen::Matrix2cd;
using Mat3 = Eigen::Matrix3cd;

enum class AlgebraKind : std::uint8_t { J1, J11, J111, J12, J3 };

inline constexpr std::array<AlgebraKind, 5> all_kinds{
    AlgebraKind::J1, AlgebraKind::J11, AlgebraKind::J111, AlgebraKind::J12, AlgebraKind::J3};

constexpr std::size_t dimension(AlgebraKind kind) {
  switch (kind) {
    case AlgebraKind::J1: return 1;
    case AlgebraKind::J11: return 2;
    case AlgebraKind::J111: return 3;
    case AlgebraKind::J12: return 5;
    case AlgebraKind::J3: return 9;
  }
  return 0;
}

constexpr std::string_view name(AlgebraKind kind) {
  switch (kind) {
    case AlgebraKind::J1: return "J1";
    case AlgebraKind::J11: return "J1+1";
    case AlgebraKind::J111: return "J1+1+1";
    case AlgebraKind::J12: return "J1+2";
    case AlgebraKind::J3: return "J3";
  }
  return "?";
}

/// Element of one of the five algebras, stored as a dense coordinate vector.
///
/// Coordinate layout per kind:
///   J1     a
///   J1+1   (a, b)
///   J1+1+1 (a, b, c)
///   J1+2   (a, M00, M01, M10, M11)
///   J3     row-major 3x3 matrix
class Element {
 public:
  explicit Element(AlgebraKind kind = AlgebraKind::J3) : kind_(kind) { coords_.fill(0.0); }

  static Element zero(AlgebraKind kind) { return Element(kind); }

  static Element j1(cplx a) {
    Element e(AlgebraKind::J1);
    e.coords_[0] = checked(a, "J1 element");
    return e;
  }
  static Element j11(cplx a, cplx b) {
    Element e(AlgebraKind::J11);
    e.coords_[0] = checked(a, "J1+1 element");
    e.coords_[1] = checked(b, "J1+1 element");
    return e;
  }
  static Element j111(cplx a, cplx b, cplx c) {
    Element e(AlgebraKind::J111);
    e.coords_[0] = checked(a, "J1+1+1 element");
    e.coords_[1] = checked(b, "J1+1+1 element");
    e.coords_[2] = checked(c, "J1+1+1 element");
    return e;
  }
  static Element j12(cplx a, const Mat2& m) {
    Element e(AlgebraKind::J12);
    e.coords_[0] = checked(a, "J1+2 element");
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) e.coords_[1 + 2 * r + c] = checked(m(r, c), "J1+2 element");
    return e;
  }
  static Element j3(const Mat3& m) {
    Element e(AlgebraKind::J3);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) e.coords_[3 * r + c] = checked(m(r, c), "J3 element");
    return e;
  }

  static Element from_coords(AlgebraKind kind, std::span<const cplx> coords) {
    if (coords.size() != dimension(kind)) throw ShapeError("coordinate count does not match algebra dimension");
    Element e(kind);
    for (std::size_t i = 0; i < coords.size(); ++i) e.coords_[i] = checked(coords[i], "Jordan element");
    return e;
  }

  /// i-th coordinate unit vector.
  static Element basis(AlgebraKind kind, std::size_t i) {
    if (i >= dimension(kind)) throw ShapeError("basis index out of range");
    Element e(kind);
    e.coords_[i] = 1.0;
    return e;
  }

  /// Algebra identity; also the canonical Springer basepoint (norm 1).
  static Element identity(AlgebraKind kind) {
    switch (kind) {
      case AlgebraKind::J1: return j1(1.0);
      case AlgebraKind::J11: return j11(1.0, 1.0);
      case AlgebraKind::J111: return j111(1.0, 1.0, 1.0);
      case AlgebraKind::J12: return j12(1.0, Mat2::Identity());
      case AlgebraKind::J3: return j3(Mat3::Identity());
    }
    return Element(kind);
  }

  AlgebraKind kind() const { return kind_; }
  std::size_t dim() const { return dimension(kind_); }
  std::span<const cplx> coords() const { return {coords_.data(), dim()}; }
  cplx operator[](std::size_t i) const { return coords_[i]; }

  /// The 2x2 block of a J1+2 element.
  Mat2 block() const {
    Mat2 m;
    m << coords_[1], coords_[2], coords_[3], coords_[4];
    return m;
  }

  /// The matrix of a J3 element.
  Mat3 matrix() const {
    Mat3 m;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) m(r, c) = coords_[3 * r + c];
    return m;
  }

  Element& operator+=(const Element& o) {
    require_same(o);
    for (std::size_t i = 0; i < dim(); ++i) coords_[i] += o.coords_[i];
    return *this;
  }
  Element& operator-=(const Element& o) {
    require_same(o);
    for (std::size_t i = 0; i < dim(); ++i) coords_[i] -= o.coords_[i];
    return *this;
  }
  Element& operator*=(cplx s) {
    for (std::size_t i = 0; i < dim(); ++i) coords_[i] *= s;
    return *this;
  }

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator-(Element a) { return a *= -1.0; }
  friend Element operator*(cplx s, Element a) { return a *= s; }
  friend Element operator*(Element a, cplx s) { return a *= s; }

  friend bool operator==(const Element& a, const Element& b) {
    if (a.kind_ != b.kind_) return false;
    for (std::size_t i = 0; i < a.dim(); ++i)
      if (a.coords_[i] != b.coords_[i]) return false;
    return true;
  }

  void require_same(const Element& o) const {
    if (o.kind_ != kind_) throw KindMismatch("Jordan elements of different algebras");
  }

 private:
  AlgebraKind kind_;
  std::array<cplx, 9> coords_;
};

/// Entrywise mixed-tolerance comparison.
inline bool approx_equal(const Element& a, const Element& b, double tol = comparison_tolerance) {
  if (a.kind() != b.kind()) return false;
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (!entangle::approx_equal(a[i], b[i], tol)) return false;
  return true;
}

inline double coordinate_norm(const Element& x) {
  double s = 0.0;
  for (cplx z : x.coords()) s += std::norm(z);
  return std::sqrt(s);
}

/// Cubic norm N(x).
inline cplx norm(const Element& x) {
  switch (x.kind()) {
    case AlgebraKind::J1: return x[0] * x[0] * x[0];
    case AlgebraKind::J11: return x[0] * x[1] * x[1];
    case AlgebraKind::J111: return x[0] * x[1] * x[2];
    case AlgebraKind::J12: return x[0] * (x[1] * x[4] - x[2] * x[3]);
    case AlgebraKind::J3: return x.matrix().determinant();
  }
  return 0.0;
}

/// Sharp (adjoint) map. For J1+1 the closed form (b^2, ab) was obtained from the
/// Springer definition and is re-derived in the tests.
inline Element sharp(const Element& x) {
  switch (x.kind()) {
    case AlgebraKind::J1: return Element::j1(x[0] * x[0]);
    case AlgebraKind::J11: return Element::j11(x[1] * x[1], x[0] * x[1]);
    case AlgebraKind::J111: return Element::j111(x[1] * x[2], x[0] * x[2], x[0] * x[1]);
    case AlgebraKind::J12: {
      const Mat2 m = x.block();
      const cplx a = x[0];
      return Element::j12(m.determinant(), a * m.trace() * Mat2::Identity() - a * m);
    }
    case AlgebraKind::J3: {
      const Mat3 a = x.matrix();
      const Mat3 a2 = a * a;
      const cplx tr = a.trace();
      return Element::j3(a2 - tr * a + 0.5 * (tr * tr - a2.trace()) * Mat3::Identity());
    }
  }
  return x;
}

/// Trace bilinear form (x, y).
inline cplx trace_form(const Element& x, const Element& y) {
  x.require_same(y);
  switch (x.kind()) {
    case AlgebraKind::J1: return 3.0 * x[0] * y[0];
    case AlgebraKind::J11: return x[0] * y[0] + 2.0 * x[1] * y[1];
    case AlgebraKind::J111: return x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
    case AlgebraKind::J12: return x[0] * y[0] + (x.block() * y.block()).trace();
    case AlgebraKind::J3: return (x.matrix() * y.matrix()).trace();
  }
  return 0.0;
}

/// Full polarization of the cubic norm; N(x,x,x) = N(x).
inline cplx norm_linearized(const Element& x, const Element& y, const Element& z) {
  x.require_same(y);
  x.require_same(z);
  return (norm(x + y + z) - norm(x + y) - norm(x + z) - norm(y + z) + norm(x) + norm(y) + norm(z)) / 6.0;
}

namespace detail {
inline void require_basepoint(const Element& c) {
  if (std::abs(norm(c) - 1.0) > comparison_tolerance) throw NumericalError("Springer basepoint must have N(c) = 1");
}
}  // namespace detail

/// Trace form recovered from N and a basepoint c: 9 N(c,c,x) N(c,c,y) - 6 N(x,y,c).
inline cplx springer_trace_form(const Element& x, const Element& y, const Element& basepoint) {
  x.require_same(y);
  x.require_same(basepoint);
  detail::require_basepoint(basepoint);
  const Element& c = basepoint;
  return 9.0 * norm_linearized(c, c, x) * norm_linearized(c, c, y) - 6.0 * norm_linearized(x, y, c);
}

/// Sharp map recovered from N and a basepoint: the unique x# with
/// (x#, y) = 3 N(x,x,y) for every y, solved over the coordinate basis.
inline Element springer_sharp(const Element& x, const Element& basepoint) {
  x.require_same(basepoint);
  detail::require_basepoint(basepoint);
  const AlgebraKind kind = x.kind();
  const auto n = static_cast<Eigen::Index>(dimension(kind));
  Eigen::MatrixXcd gram(n, n);
  Eigen::VectorXcd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Element ei = Element::basis(kind, static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < n; ++j)
      gram(i, j) = springer_trace_form(ei, Element::basis(kind, static_cast<std::size_t>(j)), basepoint);
    rhs(i) = 3.0 * norm_linearized(x, x, ei);
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(gram);
  lu.setThreshold(1e-10);
  if (lu.rank() < n) throw NumericalError("trace form Gram matrix is singular for this basepoint");
  // gram is symmetric, so (x#, e_i) = sum_j s_j gram(j, i) = (gram s)_i.
  const Eigen::VectorXcd s = lu.solve(rhs);
  std::array<cplx, 9> out{};
  for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = s(i);
  return Element::from_coords(kind, std::span<const cplx>(out.data(), static_cast<std::size_t>(n)));
}

/// One step up the chain J1 -> J1+1 -> J1+1+1 -> J1+2 -> J3.
inline Element include_step(const Element& x) {
  switch (x.kind()) {
    case AlgebraKind::J1: return Element::j11(x[0], x[0]);
    case AlgebraKind::J11: return Element::j111(x[0], x[1], x[1]);
    case AlgebraKind::J111: {
      Mat2 m = Mat2::Zero();
      m(0, 0) = x[1];
      m(1, 1) = x[2];
      return Element::j12(x[0], m);
    }
    case AlgebraKind::J12: {
      Mat3 m = Mat3::Zero();
      m(0, 0) = x[0];
      m.block<2, 2>(1, 1) = x.block();
      return Element::j3(m);
    }
    case AlgebraKind::J3: break;
  }
  throw ShapeError("J3 is the top of the embedding chain");
}

/// Image in J3: aI3, diag(a,b,b), diag(a,b,c), or block-diag(a, M).
inline Element embed_in_j3(const Element& x) {
  Mat3 m = Mat3::Zero();
  switch (x.kind()) {
    case AlgebraKind::J1: m = x[0] * Mat3::Identity(); break;
    case AlgebraKind::J11: m.diagonal() << x[0], x[1], x[1]; break;
    case AlgebraKind::J111: m.diagonal() << x[0], x[1], x[2]; break;
    case AlgebraKind::J12:
      m(0, 0) = x[0];
      m.block<2, 2>(1, 1) = x.block();
      break;
    case AlgebraKind::J3: return x;
  }
  return Element::j3(m);
}

}  // namespace entangle::jordan
