#pragma once

// Sparse k-fermion states in the exterior power of C^n with an orthonormal
// sorted-basis convention. Mode indices are 0-based throughout this header.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "entangle/freudenthal.hpp"
#include "entangle/scalar.hpp"

namespace entangle::fermion {

inline constexpr int max_modes = 64;

/// A set of occupied modes, i.e. one sorted basis key e_{i1} ^ ... ^ e_{ik}.
class ModeSet {
 public:
  constexpr ModeSet() = default;
  constexpr explicit ModeSet(std::uint64_t bits) : bits_(bits) {}

  /// Throws on repeated or out-of-range indices.
  static ModeSet of(std::span<const int> modes) {
    ModeSet s;
    for (int m : modes) {
      if (m < 0 || m >= max_modes) throw ShapeError("mode index out of range");
      if (s.contains(m)) throw ShapeError("repeated mode index");
      s.bits_ |= std::uint64_t{1} << m;
    }
    return s;
  }
  static ModeSet of(std::initializer_list<int> modes) { return of(std::span<const int>(modes.begin(), modes.size())); }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(int m) const { return (bits_ >> m) & 1u; }
  constexpr ModeSet with(int m) const { return ModeSet(bits_ | (std::uint64_t{1} << m)); }
  constexpr ModeSet without(int m) const { return ModeSet(bits_ & ~(std::uint64_t{1} << m)); }
  constexpr bool intersects(ModeSet o) const { return (bits_ & o.bits_) != 0; }
  constexpr ModeSet operator|(ModeSet o) const { return ModeSet(bits_ | o.bits_); }
  constexpr ModeSet operator&(ModeSet o) const { return ModeSet(bits_ & o.bits_); }
  constexpr ModeSet shifted(int offset) const { return ModeSet(bits_ << offset); }

  /// Largest mode + 1, or 0 for the empty set.
  constexpr int span_end() const { return bits_ == 0 ? 0 : 64 - std::countl_zero(bits_); }

  /// Number of members strictly below m.
  constexpr int count_below(int m) const {
    return std::popcount(bits_ & ((std::uint64_t{1} << m) - 1));
  }

  std::vector<int> indices() const {
    std::vector<int> out;
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  friend constexpr bool operator==(ModeSet, ModeSet) = default;
  friend constexpr bool operator<(ModeSet a, ModeSet b) { return a.bits_ < b.bits_; }

 private:
  std::uint64_t bits_ = 0;
};

/// Sign of e_S ^ e_T relative to the sorted key S|T (disjoint sets).
inline int merge_sign(ModeSet s, ModeSet t) {
  int inversions = 0;
  for (int m : t.indices()) inversions += s.size() - s.count_below(m);
  return inversions % 2 == 0 ? 1 : -1;
}

/// Parity of the permutation sorting `modes`, or 0 if an index repeats.
inline int sort_sign(std::span<const int> modes) {
  int inversions = 0;
  for (std::size_t i = 0; i < modes.size(); ++i)
    for (std::size_t j = i + 1; j < modes.size(); ++j) {
      if (modes[i] == modes[j]) return 0;
      if (modes[i] > modes[j]) ++inversions;
    }
  return inversions % 2 == 0 ? 1 : -1;
}

/// All k-subsets of {0..n-1} in increasing bit-pattern order.
inline std::vector<ModeSet> combinations(int n, int k) {
  std::vector<ModeSet> out;
  if (k < 0 || k > n) return out;
  if (k == 0) {
    out.emplace_back();
    return out;
  }
  std::uint64_t v = (std::uint64_t{1} << k) - 1;
  const std::uint64_t limit = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  while (v <= limit) {
    out.emplace_back(v);
    const std::uint64_t t = v | (v - 1);
    if (t == ~std::uint64_t{0}) break;
    v = (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
  }
  return out;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

class State {
 public:
  using Terms = std::map<ModeSet, cplx>;

  State(int k, int n) : k_(k), n_(n) {
    if (k < 1 || n < 1 || k > n) throw ShapeError("fermion state needs 1 <= k <= n");
    if (n > max_modes) throw ShapeError("at most 64 modes are supported");
  }

  /// e_{m1} ^ ... ^ e_{mk} for modes in any order, with the sorting sign folded in.
  static State basis(int n, std::span<const int> modes, cplx coeff = 1.0) {
    State s(static_cast<int>(modes.size()), n);
    s.add(modes, coeff);
    return s;
  }
  static State basis(int n, std::initializer_list<int> modes, cplx coeff = 1.0) {
    return basis(n, std::span<const int>(modes.begin(), modes.size()), coeff);
  }

  int k() const { return k_; }
  int n() const { return n_; }
  const Terms& terms() const { return terms_; }
  std::size_t nnz() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  cplx amplitude(ModeSet key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? cplx(0.0) : it->second;
  }

  /// Amplitude with an arbitrary index order, resolved by antisymmetry.
  cplx amplitude(std::span<const int> modes) const {
    if (static_cast<int>(modes.size()) != k_) throw ShapeError("index count differs from particle count");
    const int sign = sort_sign(modes);
    if (sign == 0) return 0.0;
    for (int m : modes)
      if (m < 0 || m >= n_) throw ShapeError("mode index out of range");
    ModeSet key;
    for (int m : modes) key = key.with(m);
    return static_cast<double>(sign) * amplitude(key);
  }
  cplx amplitude(std::initializer_list<int> modes) const {
    return amplitude(std::span<const int>(modes.begin(), modes.size()));
  }

  void set(ModeSet key, cplx value) {
    check_key(key);
    checked(value, "fermion amplitude");
    if (std::abs(value) < prune_threshold)
      terms_.erase(key);
    else
      terms_[key] = value;
  }

  void add(ModeSet key, cplx value) { set(key, amplitude(key) + value); }

  /// Adds coeff * e_{m1} ^ ... ^ e_{mk}; modes in any order.
  void add(std::span<const int> modes, cplx coeff) {
    if (static_cast<int>(modes.size()) != k_) throw ShapeError("index count differs from particle count");
    const int sign = sort_sign(modes);
    if (sign == 0) throw ShapeError("repeated mode index");
    add(ModeSet::of(modes), static_cast<double>(sign) * coeff);
  }
  void add(std::initializer_list<int> modes, cplx coeff) {
    add(std::span<const int>(modes.begin(), modes.size()), coeff);
  }

  double norm() const {
    double s = 0.0;
    for (const auto& [key, v] : terms_) s += std::norm(v);
    return std::sqrt(s);
  }

  State normalized() const {
    const double nn = norm();
    if (nn == 0.0) throw NumericalError("cannot normalize the zero state");
    return (1.0 / nn) * *this;
  }

  State& operator+=(const State& o) {
    require_same(o);
    for (const auto& [key, v] : o.terms_) add(key, v);
    return *this;
  }
  State& operator*=(cplx s) {
    Terms out;
    for (const auto& [key, v] : terms_) {
      const cplx w = s * v;
      if (std::abs(w) >= prune_threshold) out.emplace(key, w);
    }
    terms_ = std::move(out);
    return *this;
  }
  friend State operator+(State a, const State& b) { return a += b; }
  friend State operator-(State a, const State& b) { return a += (-1.0) * b; }
  friend State operator*(cplx s, State a) { return a *= s; }

  void require_same(const State& o) const {
    if (o.k_ != k_ || o.n_ != n_) throw ShapeError("fermion states of different shape");
  }

 private:
  void check_key(ModeSet key) const {
    if (key.size() != k_) throw ShapeError("key size differs from particle count");
    if (key.span_end() > n_) throw ShapeError("mode index out of range");
  }

  int k_;
  int n_;
  Terms terms_;
};

inline bool approx_equal(const State& a, const State& b, double tol = comparison_tolerance) {
  if (a.k() != b.k() || a.n() != b.n()) return false;
  for (const auto& [key, v] : a.terms())
    if (!entangle::approx_equal(v, b.amplitude(key), tol)) return false;
  for (const auto& [key, v] : b.terms())
    if (!entangle::approx_equal(v, a.amplitude(key), tol)) return false;
  return true;
}

/// <u|v>, antilinear in u.
inline cplx inner(const State& u, const State& v) {
  u.require_same(v);
  cplx s = 0.0;
  for (const auto& [key, x] : u.terms()) s += std::conj(x) * v.amplitude(key);
  return s;
}

inline State wedge(const State& u, const State& v) {
  if (u.n() != v.n()) throw ShapeError("wedge of states over different mode counts");
  if (u.k() + v.k() > u.n()) throw ShapeError("wedge degree exceeds the number of modes");
  State out(u.k() + v.k(), u.n());
  std::map<ModeSet, cplx> acc;
  for (const auto& [s, a] : u.terms())
    for (const auto& [t, b] : v.terms()) {
      if (s.intersects(t)) continue;
      acc[s | t] += static_cast<double>(merge_sign(s, t)) * a * b;
    }
  for (const auto& [key, val] : acc) out.set(key, val);
  return out;
}

/// Single-mode state e_m as a 1-fermion vector.
inline State mode_vector(int n, std::span<const cplx> coeffs) {
  if (static_cast<int>(coeffs.size()) != n) throw ShapeError("vector length differs from mode count");
  State s(1, n);
  for (int i = 0; i < n; ++i) s.set(ModeSet::of({i}), coeffs[static_cast<std::size_t>(i)]);
  return s;
}

namespace detail {

/// Dense amplitude table indexed by key bits, for n small enough to afford it.
class DenseLookup {
 public:
  explicit DenseLookup(const State& p) : state_(&p) {
    if (p.n() <= 20) {
      table_.assign(std::size_t{1} << p.n(), cplx(0.0));
      for (const auto& [key, v] : p.terms()) table_[key.bits()] = v;
    }
  }
  cplx operator()(ModeSet key) const { return table_.empty() ? state_->amplitude(key) : table_[key.bits()]; }

 private:
  const State* state_;
  std::vector<cplx> table_;
};

/// Pi_{A,B}(P) for A, B given as sorted sets.
inline cplx pluecker_sorted(const DenseLookup& amp, ModeSet a, ModeSet b) {
  cplx sum = 0.0;
  int j = 0;
  for (int bj : b.indices()) {
    const double alternating = (j % 2 == 0) ? 1.0 : -1.0;
    ++j;
    if (a.contains(bj)) continue;
    // P_{a1..a_{k-1} bj}: move bj from the end into sorted position.
    const int crossings = a.size() - a.count_below(bj);
    const double sign = (crossings % 2 == 0) ? 1.0 : -1.0;
    sum += alternating * sign * amp(a.with(bj)) * amp(b.without(bj));
  }
  return sum;
}

}  // namespace detail

/// Value of the Pluecker relation Pi_{A,B}(P) = sum_j (-1)^(j-1) P_{A b_j} P_{B \ b_j}
/// for |A| = k-1 and |B| = k+1. Entries are taken in the order given; amplitudes with
/// unsorted indices are resolved by antisymmetry.
inline cplx pluecker_poly(const State& p, std::span<const int> a, std::span<const int> b) {
  const int k = p.k();
  if (static_cast<int>(a.size()) != k - 1 || static_cast<int>(b.size()) != k + 1)
    throw ShapeError("Pluecker relation needs |A| = k-1 and |B| = k+1");
  for (int m : a)
    if (m < 0 || m >= p.n()) throw ShapeError("mode index out of range");
  for (int m : b)
    if (m < 0 || m >= p.n()) throw ShapeError("mode index out of range");
  if (sort_sign(a) == 0 || sort_sign(b) == 0) throw ShapeError("Pluecker index sets must not repeat modes");
  cplx sum = 0.0;
  std::vector<int> first(a.begin(), a.end());
  first.push_back(0);
  std::vector<int> second;
  for (std::size_t j = 0; j < b.size(); ++j) {
    first.back() = b[j];
    second.clear();
    for (std::size_t i = 0; i < b.size(); ++i)
      if (i != j) second.push_back(b[i]);
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    sum += sign * p.amplitude(first) * p.amplitude(second);
  }
  return sum;
}

struct PlueckerScan {
  double max_violation = 0.0;  // max |Pi_{A,B}| over all pairs
  ModeSet arg_a;
  ModeSet arg_b;
  std::size_t pairs = 0;
};

/// Evaluates every relation; with threads > 1 the (k-1)-subsets are split into
/// contiguous chunks and the chunk maxima merged (earliest pair wins ties).
inline PlueckerScan pluecker_scan(const State& p, unsigned threads = 1) {
  const int k = p.k();
  const int n = p.n();
  const auto as = combinations(n, k - 1);
  const auto bs = combinations(n, k + 1);
  const detail::DenseLookup lookup(p);
  auto run = [&](std::size_t begin, std::size_t end) {
    PlueckerScan r;
    for (std::size_t i = begin; i < end; ++i)
      for (ModeSet b : bs) {
        const double v = std::abs(detail::pluecker_sorted(lookup, as[i], b));
        if (v > r.max_violation) {
          r.max_violation = v;
          r.arg_a = as[i];
          r.arg_b = b;
        }
      }
    r.pairs = (end - begin) * bs.size();
    return r;
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, as.size()))));
  if (threads == 1) return run(0, as.size());
  std::vector<PlueckerScan> partial(threads);
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (as.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = std::min(as.size(), t * chunk);
      const std::size_t end = std::min(as.size(), begin + chunk);
      pool.emplace_back([&, t, begin, end] { partial[t] = run(begin, end); });
    }
  }
  PlueckerScan out;
  for (const auto& r : partial) {
    out.pairs += r.pairs;
    if (r.max_violation > out.max_violation) {
      out.max_violation = r.max_violation;
      out.arg_a = r.arg_a;
      out.arg_b = r.arg_b;
    }
  }
  return out;
}

/// Decomposable iff every Pluecker relation vanishes: max |Pi| <= tol |P|^2.
inline bool is_decomposable(const State& p, double tol = default_tolerance, unsigned threads = 1) {
  if (p.is_zero()) throw NumericalError("decomposability of the zero state is undefined");
  const double nn = p.norm();
  return pluecker_scan(p, threads).max_violation <= tol * nn * nn;
}

/// Matrix of v -> v ^ P from C^n to the (k+1)-th exterior power; columns follow
/// combinations(n, k+1).
inline Eigen::MatrixXcd wedge_map_matrix(const State& p) {
  const auto cols = combinations(p.n(), p.k() + 1);
  std::map<ModeSet, Eigen::Index> column;
  for (std::size_t c = 0; c < cols.size(); ++c) column.emplace(cols[c], static_cast<Eigen::Index>(c));
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(p.n(), static_cast<Eigen::Index>(cols.size()));
  for (const auto& [s, v] : p.terms())
    for (int i = 0; i < p.n(); ++i) {
      if (s.contains(i)) continue;
      const double sign = (s.count_below(i) % 2 == 0) ? 1.0 : -1.0;
      m(i, column.at(s.with(i))) += sign * v;
    }
  return m;
}

/// Independent decomposability test: P is decomposable iff the kernel of
/// v -> v ^ P has dimension >= k. Numerical rank uses singular values above
/// tol * sigma_max.
inline bool decomposability_oracle(const State& p, double tol = default_tolerance) {
  if (p.is_zero()) throw NumericalError("decomposability of the zero state is undefined");
  if (p.k() + 1 > p.n()) return true;
  const Eigen::MatrixXcd m = wedge_map_matrix(p);
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * smax) ++rank;
  return p.n() - rank >= p.k();
}

/// |P ^ ... ^ P| (d factors) for P in the k-th exterior power of C^{dk}, k even.
inline double xi_invariant(const State& p) {
  if (p.k() % 2 != 0) throw ShapeError("xi needs an even particle count");
  if (p.n() % p.k() != 0) throw ShapeError("xi needs n to be a multiple of k");
  const int d = p.n() / p.k();
  State power = p;
  for (int i = 1; i < d; ++i) power = wedge(power, p);
  return std::abs(power.amplitude(ModeSet((p.n() == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << p.n()) - 1)));
}

/// One-particle reduced density matrix, normalized to unit trace.
struct OneParticleRDM {
  Eigen::MatrixXcd rho;

  /// gamma = k rho, trace k.
  Eigen::MatrixXcd gamma(int k) const { return static_cast<double>(k) * rho; }
  double hermiticity_defect() const { return (rho - rho.adjoint()).norm(); }
  double min_eigenvalue() const {
    const Eigen::MatrixXcd h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }
};

namespace detail {
inline void require_normalized(double norm) {
  if (std::abs(norm - 1.0) > 1e-6) throw NumericalError("state must be normalized (|norm - 1| <= 1e-6)");
}
}  // namespace detail

/// rho_ab = (1/k) sum_S P_{a S} conj(P_{b S}) over sorted (k-1)-sets S, where
/// P_{a S} is the amplitude with a moved to the front.
inline OneParticleRDM one_particle_rdm(const State& p) {
  detail::require_normalized(p.norm());
  std::map<ModeSet, std::vector<std::pair<int, cplx>>> groups;
  for (const auto& [key, v] : p.terms())
    for (int a : key.indices()) {
      const double sign = (key.count_below(a) % 2 == 0) ? 1.0 : -1.0;
      groups[key.without(a)].emplace_back(a, sign * v);
    }
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(p.n(), p.n());
  for (const auto& [rest, entries] : groups)
    for (const auto& [a, xa] : entries)
      for (const auto& [b, xb] : entries) rho(a, b) += xa * std::conj(xb);
  rho /= static_cast<double>(p.k());
  return {rho};
}

/// Frobenius norm of gamma^2 - gamma; vanishes exactly on decomposable states.
inline double gamma_idempotency_defect(const State& p) {
  const Eigen::MatrixXcd g = one_particle_rdm(p).gamma(p.k());
  return (g * g - g).norm();
}

/// Determinant of the rows/cols of g selected by two equal-size mode sets.
inline cplx minor_det(const Eigen::MatrixXcd& g, ModeSet rows, ModeSet cols) {
  const auto r = rows.indices();
  const auto c = cols.indices();
  const auto k = static_cast<Eigen::Index>(r.size());
  if (k == 1) return g(r[0], c[0]);
  Eigen::MatrixXcd sub(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = g(r[static_cast<std::size_t>(i)], c[static_cast<std::size_t>(j)]);
  if (k == 2) return sub(0, 0) * sub(1, 1) - sub(0, 1) * sub(1, 0);
  return sub.determinant();
}

/// Action of g on every particle: the k-fold compound of g applied to the
/// amplitudes, each output amplitude a sum of k x k minors over the input support.
inline State apply_compound(const State& p, const Eigen::MatrixXcd& g) {
  if (g.rows() != p.n() || g.cols() != p.n()) throw ShapeError("group element size differs from mode count");
  State out(p.k(), p.n());
  for (ModeSet t : combinations(p.n(), p.k())) {
    cplx sum = 0.0;
    for (const auto& [s, v] : p.terms()) sum += minor_det(g, t, s) * v;
    out.set(t, sum);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Three fermions in six modes <-> M(J3). Modes 0,1,2 are e1,e2,e3 and modes
// 3,4,5 are the barred e1b,e2b,e3b.

namespace detail {
// Entry (i,j) of A is P_{i, jb+1, jb+2}; of B it is P_{ib, j+1, j+2} (cyclic).
inline std::array<int, 3> a_indices(int i, int j) { return {i, 3 + (j + 1) % 3, 3 + (j + 2) % 3}; }
inline std::array<int, 3> b_indices(int i, int j) { return {3 + i, (j + 1) % 3, (j + 2) % 3}; }
}  // namespace detail

inline freudenthal::Vector to_freudenthal(const State& p) {
  if (p.k() != 3 || p.n() != 6) throw ShapeError("Freudenthal coordinates need three fermions in six modes");
  jordan::Mat3 a, b;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      a(i, j) = p.amplitude(detail::a_indices(i, j));
      b(i, j) = p.amplitude(detail::b_indices(i, j));
    }
  return {p.amplitude({0, 1, 2}), p.amplitude({3, 4, 5}), jordan::Element::j3(a), jordan::Element::j3(b)};
}

inline State from_freudenthal(const freudenthal::Vector& x) {
  const freudenthal::Vector y = freudenthal::embed_in_j3(x);
  State p(3, 6);
  p.add({0, 1, 2}, y.alpha());
  p.add({3, 4, 5}, y.beta());
  const jordan::Mat3 a = y.a().matrix();
  const jordan::Mat3 b = y.b().matrix();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      p.add(detail::a_indices(i, j), a(i, j));
      p.add(detail::b_indices(i, j), b(i, j));
    }
  return p;
}

}  // namespace entangle::fermion
