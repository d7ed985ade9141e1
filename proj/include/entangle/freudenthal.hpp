#pragma once

// Freudenthal triple system M(J) = C + C + J + J over one of the cubic Jordan
// algebras: skew form, quartic form (two normalizations), its full
// linearization, the trilinear map T, and the four-level rank of a vector.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "entangle/jordan.hpp"
#include "entangle/scalar.hpp"

namespace entangle::freudenthal {

using jordan::AlgebraKind;
using jordan::Element;

class Vector {
 public:
  explicit Vector(AlgebraKind kind = AlgebraKind::J3)
      : kind_(kind), alpha_(0.0), beta_(0.0), a_(kind), b_(kind) {}

  Vector(cplx alpha, cplx beta, Element a, Element b)
      : kind_(a.kind()),
        alpha_(checked(alpha, "Freudenthal vector")),
        beta_(checked(beta, "Freudenthal vector")),
        a_(std::move(a)),
        b_(std::move(b)) {
    a_.require_same(b_);
  }

  static Vector zero(AlgebraKind kind) { return Vector(kind); }

  static std::size_t dimension(AlgebraKind kind) { return 2 + 2 * jordan::dimension(kind); }

  /// Coordinates ordered (alpha, beta, A..., B...).
  static Vector from_coords(AlgebraKind kind, std::span<const cplx> c) {
    const std::size_t d = jordan::dimension(kind);
    if (c.size() != 2 + 2 * d) throw ShapeError("coordinate count does not match Freudenthal dimension");
    return Vector(c[0], c[1], Element::from_coords(kind, c.subspan(2, d)),
                  Element::from_coords(kind, c.subspan(2 + d, d)));
  }

  static Vector basis(AlgebraKind kind, std::size_t i) {
    std::vector<cplx> c(dimension(kind), 0.0);
    if (i >= c.size()) throw ShapeError("basis index out of range");
    c[i] = 1.0;
    return from_coords(kind, c);
  }

  AlgebraKind kind() const { return kind_; }
  std::size_t dim() const { return dimension(kind_); }
  cplx alpha() const { return alpha_; }
  cplx beta() const { return beta_; }
  const Element& a() const { return a_; }
  const Element& b() const { return b_; }

  std::vector<cplx> coords() const {
    std::vector<cplx> c;
    c.reserve(dim());
    c.push_back(alpha_);
    c.push_back(beta_);
    for (cplx z : a_.coords()) c.push_back(z);
    for (cplx z : b_.coords()) c.push_back(z);
    return c;
  }

  /// Euclidean norm of the coordinate vector.
  double norm() const {
    double s = std::norm(alpha_) + std::norm(beta_);
    for (cplx z : a_.coords()) s += std::norm(z);
    for (cplx z : b_.coords()) s += std::norm(z);
    return std::sqrt(s);
  }

  bool is_zero() const { return norm() == 0.0; }

  void require_same(const Vector& o) const {
    if (o.kind_ != kind_) throw KindMismatch("Freudenthal vectors over different algebras");
  }

  Vector& operator+=(const Vector& o) {
    require_same(o);
    alpha_ += o.alpha_;
    beta_ += o.beta_;
    a_ += o.a_;
    b_ += o.b_;
    return *this;
  }
  Vector& operator-=(const Vector& o) { return *this += (-1.0) * o; }
  Vector& operator*=(cplx s) {
    alpha_ *= s;
    beta_ *= s;
    a_ *= s;
    b_ *= s;
    return *this;
  }
  friend Vector operator+(Vector x, const Vector& y) { return x += y; }
  friend Vector operator-(Vector x, const Vector& y) { return x -= y; }
  friend Vector operator*(cplx s, Vector x) { return x *= s; }
  friend Vector operator*(Vector x, cplx s) { return x *= s; }

  friend bool operator==(const Vector& x, const Vector& y) {
    return x.kind_ == y.kind_ && x.alpha_ == y.alpha_ && x.beta_ == y.beta_ && x.a_ == y.a_ && x.b_ == y.b_;
  }

 private:
  AlgebraKind kind_;
  cplx alpha_;
  cplx beta_;
  Element a_;
  Element b_;
};

inline bool approx_equal(const Vector& x, const Vector& y, double tol = comparison_tolerance) {
  if (x.kind() != y.kind()) return false;
  const auto cx = x.coords();
  const auto cy = y.coords();
  for (std::size_t i = 0; i < cx.size(); ++i)
    if (!entangle::approx_equal(cx[i], cy[i], tol)) return false;
  return true;
}

/// {x,y} = alpha delta - beta gamma + (A,D) - (B,C).
inline cplx skew_form(const Vector& x, const Vector& y) {
  x.require_same(y);
  return x.alpha() * y.beta() - x.beta() * y.alpha() + jordan::trace_form(x.a(), y.b()) -
         jordan::trace_form(x.b(), y.a());
}

/// q(x) = 2((A,B) - alpha beta)^2 - 8(A#,B#) + 8 alpha N(A) + 8 beta N(B).
inline cplx quartic_q(const Vector& x) {
  const cplx s = jordan::trace_form(x.a(), x.b()) - x.alpha() * x.beta();
  return 2.0 * s * s - 8.0 * jordan::trace_form(jordan::sharp(x.a()), jordan::sharp(x.b())) +
         8.0 * x.alpha() * jordan::norm(x.a()) + 8.0 * x.beta() * jordan::norm(x.b());
}

/// Lift a vector over a subalgebra into M(J3) componentwise.
inline Vector embed_in_j3(const Vector& x) {
  return Vector(x.alpha(), x.beta(), jordan::embed_in_j3(x.a()), jordan::embed_in_j3(x.b()));
}

/// Three-fermion normalization of the quartic invariant,
///   T = 4([Tr(AB) - alpha beta]^2 - 4 Tr(A# B#) + 4 alpha det A + 4 beta det B),
/// evaluated with explicit 3x3 matrices after embedding into J3. Equals 2 q(x).
inline cplx quartic_T_eq5(const Vector& x) {
  const Vector y = embed_in_j3(x);
  const jordan::Mat3 a = y.a().matrix();
  const jordan::Mat3 b = y.b().matrix();
  auto adj = [](const jordan::Mat3& m) -> jordan::Mat3 {
    const jordan::Mat3 m2 = m * m;
    const cplx tr = m.trace();
    return m2 - tr * m + 0.5 * (tr * tr - m2.trace()) * jordan::Mat3::Identity();
  };
  const cplx s = (a * b).trace() - y.alpha() * y.beta();
  return 4.0 * (s * s - 4.0 * (adj(a) * adj(b)).trace() + 4.0 * y.alpha() * a.determinant() +
                4.0 * y.beta() * b.determinant());
}

/// Symmetric 4-linear form with q(x,x,x,x) = q(x), by inclusion-exclusion
/// over the 15 nonempty subset sums.
inline cplx quartic_linearized(const Vector& x, const Vector& y, const Vector& z, const Vector& w) {
  x.require_same(y);
  x.require_same(z);
  x.require_same(w);
  const std::array<const Vector*, 4> args{&x, &y, &z, &w};
  cplx total = 0.0;
  for (unsigned mask = 1; mask < 16; ++mask) {
    Vector sum(x.kind());
    int count = 0;
    for (unsigned i = 0; i < 4; ++i) {
      if (mask & (1u << i)) {
        sum += *args[i];
        ++count;
      }
    }
    const double sign = ((4 - count) % 2 == 0) ? 1.0 : -1.0;
    total += sign * quartic_q(sum);
  }
  return total / 24.0;
}

namespace detail {

/// Inverse transpose of the skew Gram matrix G(i,j) = {e_i, e_j}, one per kind.
/// {t, e_i} = sum_j t_j G(j,i), so t = (G^T)^-1 r.
inline const Eigen::MatrixXcd& skew_gram_inverse_transpose(AlgebraKind kind) {
  static const std::array<Eigen::MatrixXcd, 5> table = [] {
    std::array<Eigen::MatrixXcd, 5> out;
    for (AlgebraKind k : jordan::all_kinds) {
      const auto n = static_cast<Eigen::Index>(Vector::dimension(k));
      Eigen::MatrixXcd g(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
          g(i, j) = skew_form(Vector::basis(k, static_cast<std::size_t>(i)),
                              Vector::basis(k, static_cast<std::size_t>(j)));
      Eigen::FullPivLU<Eigen::MatrixXcd> lu(g.transpose());
      if (!lu.isInvertible()) throw NumericalError("skew Gram matrix is singular");
      out[static_cast<std::size_t>(k)] = lu.inverse();
    }
    return out;
  }();
  return table[static_cast<std::size_t>(kind)];
}

inline Vector solve_skew(AlgebraKind kind, const Eigen::VectorXcd& rhs) {
  const Eigen::VectorXcd t = skew_gram_inverse_transpose(kind) * rhs;
  std::vector<cplx> c(t.data(), t.data() + t.size());
  return Vector::from_coords(kind, c);
}

}  // namespace detail

/// The unique t with {t, w} = q(x,y,z,w) for every w.
inline Vector trilinear_T(const Vector& x, const Vector& y, const Vector& z) {
  x.require_same(y);
  x.require_same(z);
  const auto n = static_cast<Eigen::Index>(x.dim());
  Eigen::VectorXcd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i)
    rhs(i) = quartic_linearized(x, y, z, Vector::basis(x.kind(), static_cast<std::size_t>(i)));
  return detail::solve_skew(x.kind(), rhs);
}

enum class Rank : std::uint8_t { zero = 0, one = 1, two = 2, three = 3, four = 4 };

constexpr int to_int(Rank r) { return static_cast<int>(r); }

/// Diagnostic values behind a rank verdict, each already divided by the
/// matching power of |x| so they are scale free.
struct RankReport {
  Rank rank = Rank::zero;
  double quartic = 0.0;        // |q(x)| / |x|^4
  double cubic = 0.0;          // |T(x,x,x)| / |x|^3
  double quadratic = 0.0;      // max_y |3T(x,x,y) - {x,y}x| / |x|^2 over basis y
};

/// Rank with the intermediate test quantities. Stops evaluating at the first
/// test that fires, leaving later fields at zero.
///
/// The rank-2 test uses 3T(x,x,y) - {x,y}x: with T fixed by
/// {T(x,y,z),w} = q(x,y,z,w) this is the combination that vanishes on the
/// separable orbit.
inline RankReport rank_report(const Vector& x, double tol = default_tolerance) {
  if (!(tol > 0.0)) throw std::invalid_argument("rank tolerance must be positive");
  RankReport rep;
  const double nx = x.norm();
  if (nx == 0.0) return rep;
  const Vector u = (1.0 / nx) * x;

  rep.quartic = std::abs(quartic_q(u));
  if (rep.quartic > tol) {
    rep.rank = Rank::four;
    return rep;
  }
  rep.cubic = trilinear_T(u, u, u).norm();
  if (rep.cubic > tol) {
    rep.rank = Rank::three;
    return rep;
  }

  // Columns of y -> q(u,u,y,w) over the basis, symmetric in (y,w).
  const AlgebraKind kind = u.kind();
  const auto n = static_cast<Eigen::Index>(u.dim());
  std::vector<Vector> basis;
  basis.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) basis.push_back(Vector::basis(kind, static_cast<std::size_t>(i)));
  Eigen::MatrixXcd hess(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      hess(i, j) = quartic_linearized(u, u, basis[static_cast<std::size_t>(i)], basis[static_cast<std::size_t>(j)]);
      hess(j, i) = hess(i, j);
    }
  const Eigen::MatrixXcd tcols = detail::skew_gram_inverse_transpose(kind) * hess;
  const auto uc = u.coords();
  const Eigen::Map<const Eigen::VectorXcd> uvec(uc.data(), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx s = skew_form(u, basis[static_cast<std::size_t>(i)]);
    const double v = (3.0 * tcols.col(i) - s * uvec).norm();
    rep.quadratic = std::max(rep.quadratic, v);
  }
  rep.rank = rep.quadratic > tol ? Rank::two : Rank::one;
  return rep;
}

inline Rank rank(const Vector& x, double tol = default_tolerance) { return rank_report(x, tol).rank; }

}  // namespace entangle::freudenthal
