#pragma once

// Mixed-species systems and their embeddings into fermionic states and into
// Freudenthal vectors.

#include <array>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entangle/fermion.hpp"
#include "entangle/freudenthal.hpp"

namespace entangle::embed {

using fermion::ModeSet;
using freudenthal::Vector;
using jordan::AlgebraKind;
using jordan::Element;

struct Species {
  int k = 1;  // particles
  int n = 2;  // single-particle modes
  friend bool operator==(const Species&, const Species&) = default;
};

/// N species, species i holding k_i fermions in n_i modes. Species occupy
/// contiguous, ordered blocks of the global mode space.
class SystemShape {
 public:
  SystemShape() = default;
  explicit SystemShape(std::vector<Species> species) : species_(std::move(species)) {
    if (species_.empty()) throw ShapeError("a system needs at least one species");
    int offset = 0;
    for (const auto& s : species_) {
      if (s.k < 1 || s.n < s.k) throw ShapeError("each species needs 1 <= k_i <= n_i");
      offsets_.push_back(offset);
      offset += s.n;
      k_ += s.k;
    }
    n_ = offset;
    if (n_ > fermion::max_modes) throw ShapeError("at most 64 modes in total");
  }

  /// N distinguishable d-level parties.
  static SystemShape qudits(int parties, int d) {
    return SystemShape(std::vector<Species>(static_cast<std::size_t>(parties), Species{1, d}));
  }

  std::size_t species_count() const { return species_.size(); }
  const Species& species(std::size_t i) const { return species_.at(i); }
  const std::vector<Species>& all() const { return species_; }
  int offset(std::size_t i) const { return offsets_.at(i); }
  int total_k() const { return k_; }
  int total_n() const { return n_; }

  bool is_qudit_uniform() const {
    return std::all_of(species_.begin(), species_.end(),
                       [&](const Species& s) { return s.k == 1 && s.n == species_.front().n; });
  }
  bool is_qubits() const { return is_qudit_uniform() && species_.front().n == 2; }

  friend bool operator==(const SystemShape& a, const SystemShape& b) { return a.species_ == b.species_; }

 private:
  std::vector<Species> species_;
  std::vector<int> offsets_;
  int k_ = 0;
  int n_ = 0;
};

using LocalKey = std::vector<ModeSet>;

/// A state in the tensor product of per-species exterior powers; amplitudes are
/// keyed by one sorted local mode set per species.
class MultiState {
 public:
  using Terms = std::map<LocalKey, cplx>;

  MultiState() = default;
  explicit MultiState(SystemShape shape) : shape_(std::move(shape)) {}

  const SystemShape& shape() const { return shape_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  cplx amplitude(const LocalKey& key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? cplx(0.0) : it->second;
  }

  void set(const LocalKey& key, cplx value) {
    check_key(key);
    checked(value, "multi-species amplitude");
    if (std::abs(value) < prune_threshold)
      terms_.erase(key);
    else
      terms_[key] = value;
  }
  void add(const LocalKey& key, cplx value) { set(key, amplitude(key) + value); }

  /// Qudit shorthand: one level index per party.
  void set_levels(std::span<const int> levels, cplx value) { set(levels_key(levels), value); }
  cplx amplitude_levels(std::span<const int> levels) const { return amplitude(levels_key(levels)); }

  double norm() const {
    double s = 0.0;
    for (const auto& [key, v] : terms_) s += std::norm(v);
    return std::sqrt(s);
  }
  MultiState normalized() const {
    const double nn = norm();
    if (nn == 0.0) throw NumericalError("cannot normalize the zero state");
    MultiState out(shape_);
    for (const auto& [key, v] : terms_) out.set(key, v / nn);
    return out;
  }

 private:
  LocalKey levels_key(std::span<const int> levels) const {
    if (levels.size() != shape_.species_count()) throw ShapeError("one level per party expected");
    LocalKey key;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (shape_.species(i).k != 1) throw ShapeError("level shorthand needs single-particle species");
      key.push_back(ModeSet::of({levels[i]}));
    }
    return key;
  }

  void check_key(const LocalKey& key) const {
    if (key.size() != shape_.species_count()) throw ShapeError("key has the wrong number of species");
    for (std::size_t i = 0; i < key.size(); ++i) {
      const auto& s = shape_.species(i);
      if (key[i].size() != s.k || key[i].span_end() > s.n) throw ShapeError("key does not fit its species");
    }
  }

  SystemShape shape_;
  Terms terms_;
};

/// Tensor product of per-species states, as a MultiState.
inline MultiState product_state(const std::vector<fermion::State>& factors) {
  std::vector<Species> species;
  for (const auto& f : factors) species.push_back({f.k(), f.n()});
  MultiState out{SystemShape(species)};
  std::map<LocalKey, cplx> acc{{LocalKey{}, 1.0}};
  for (const auto& f : factors) {
    std::map<LocalKey, cplx> next;
    for (const auto& [key, v] : acc)
      for (const auto& [local, w] : f.terms()) {
        LocalKey k2 = key;
        k2.push_back(local);
        next[k2] += v * w;
      }
    acc = std::move(next);
  }
  for (const auto& [key, v] : acc) out.set(key, v);
  return out;
}

/// Block-offset embedding into the exterior power over the direct-sum mode space.
inline fermion::State phi(const MultiState& psi) {
  const auto& shape = psi.shape();
  fermion::State out(shape.total_k(), shape.total_n());
  for (const auto& [key, v] : psi.terms()) {
    ModeSet global;
    for (std::size_t i = 0; i < key.size(); ++i) global = global | key[i].shifted(shape.offset(i));
    out.set(global, v);
  }
  return out;
}

/// Qudit embedding: party j's level i goes to mode j*d + i.
inline fermion::State phi_tilde(const MultiState& psi) {
  const auto& shape = psi.shape();
  if (!shape.is_qudit_uniform()) throw ShapeError("phi_tilde needs N parties of equal dimension");
  const int parties = static_cast<int>(shape.species_count());
  const int d = shape.species(0).n;
  fermion::State out(parties, parties * d);
  std::vector<int> modes(static_cast<std::size_t>(parties));
  for (const auto& [key, v] : psi.terms()) {
    for (int j = 0; j < parties; ++j) modes[static_cast<std::size_t>(j)] = j * d + key[static_cast<std::size_t>(j)].indices().front();
    out.add(modes, v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// The four special systems.

/// Three qubits, a[4i + 2j + k] the amplitude of e_i (x) e_j (x) e_k.
struct Qubit3State {
  std::array<cplx, 8> a{};

  cplx operator()(int i, int j, int k) const { return a[static_cast<std::size_t>(4 * i + 2 * j + k)]; }
  cplx& operator()(int i, int j, int k) { return a[static_cast<std::size_t>(4 * i + 2 * j + k)]; }
  double norm() const {
    double s = 0.0;
    for (auto z : a) s += std::norm(z);
    return std::sqrt(s);
  }
};

/// A qubit and two bosonic qubits: b[i][j] multiplies e_i (x) f_j with f_0 = e0e0,
/// f_1 = e0e1 + e1e0, f_2 = e1e1.
struct Boson2QState {
  std::array<std::array<cplx, 3>, 2> b{};

  double norm() const {
    double s = 0.0;
    for (const auto& row : b) s += std::norm(row[0]) + 2.0 * std::norm(row[1]) + std::norm(row[2]);
    return std::sqrt(s);
  }
};

/// Three bosonic qubits; c[j] multiplies the symmetric sum of terms with j ones.
struct Boson3State {
  std::array<cplx, 4> c{};

  double norm() const {
    return std::sqrt(std::norm(c[0]) + std::norm(c[3]) + 3.0 * (std::norm(c[1]) + std::norm(c[2])));
  }
};

/// A qubit and two fermions in four modes; d[i][p] is d_{i j k} for the p-th
/// canonical pair (j < k) in the order 01, 02, 03, 12, 13, 23.
struct QubitFermion4State {
  static constexpr std::array<std::array<int, 2>, 6> pairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

  std::array<std::array<cplx, 6>, 2> d{};

  static int pair_index(int j, int k) {
    if (j > k) std::swap(j, k);
    for (int p = 0; p < 6; ++p)
      if (pairs[static_cast<std::size_t>(p)][0] == j && pairs[static_cast<std::size_t>(p)][1] == k) return p;
    throw ShapeError("fermion pair index out of range");
  }

  /// d_{ijk} with antisymmetry in (j, k).
  cplx operator()(int i, int j, int k) const {
    if (j == k) return 0.0;
    const cplx v = d[static_cast<std::size_t>(i)][static_cast<std::size_t>(pair_index(j, k))];
    return j < k ? v : -v;
  }
  void set(int i, int j, int k, cplx v) {
    if (j == k) throw ShapeError("repeated fermion mode");
    d[static_cast<std::size_t>(i)][static_cast<std::size_t>(pair_index(j, k))] = j < k ? v : -v;
  }

  /// From a full 2x4x4 array; rejects arrays that are not antisymmetric in (j, k).
  static QubitFermion4State from_full(const std::array<std::array<std::array<cplx, 4>, 4>, 2>& full,
                                      double tol = comparison_tolerance) {
    QubitFermion4State s;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
          const cplx v = full[i][j][k];
          const cplx w = full[i][k][j];
          if (std::abs(v + w) > tol) throw ShapeError("amplitudes are not antisymmetric in the fermion indices");
          if (j < k) s.set(i, j, k, v);
        }
    return s;
  }

  double norm() const {
    double s = 0.0;
    for (const auto& row : d)
      for (auto z : row) s += std::norm(z);
    return std::sqrt(s);
  }
};

// Conversions between the special systems and MultiState.

inline SystemShape qubit3_shape() { return SystemShape::qudits(3, 2); }
inline SystemShape qubit_fermion4_shape() { return SystemShape({{1, 2}, {2, 4}}); }

inline MultiState to_multi(const Qubit3State& s) {
  MultiState m(qubit3_shape());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        const std::array<int, 3> lv{i, j, k};
        m.set_levels(lv, s(i, j, k));
      }
  return m;
}

inline Qubit3State qubit3_from_multi(const MultiState& m) {
  if (!(m.shape() == qubit3_shape())) throw ShapeError("not a three-qubit shape");
  Qubit3State s;
  for (const auto& [key, v] : m.terms()) s(key[0].indices()[0], key[1].indices()[0], key[2].indices()[0]) = v;
  return s;
}

inline MultiState to_multi(const QubitFermion4State& s) {
  MultiState m(qubit_fermion4_shape());
  for (int i = 0; i < 2; ++i)
    for (int p = 0; p < 6; ++p) {
      const auto& jk = QubitFermion4State::pairs[static_cast<std::size_t>(p)];
      m.set({ModeSet::of({i}), ModeSet::of({jk[0], jk[1]})}, s.d[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)]);
    }
  return m;
}

inline QubitFermion4State qubit_fermion4_from_multi(const MultiState& m) {
  if (!(m.shape() == qubit_fermion4_shape())) throw ShapeError("not a qubit + two-fermion shape");
  QubitFermion4State s;
  for (const auto& [key, v] : m.terms()) {
    const auto f = key[1].indices();
    s.set(key[0].indices()[0], f[0], f[1], v);
  }
  return s;
}

/// Symmetric tensor realization inside three qubits.
inline Qubit3State to_qubit3(const Boson2QState& s) {
  Qubit3State q;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) q(i, j, k) = s.b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j + k)];
  return q;
}

inline Qubit3State to_qubit3(const Boson3State& s) {
  Qubit3State q;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) q(i, j, k) = s.c[static_cast<std::size_t>(i + j + k)];
  return q;
}

inline Boson2QState to_boson2q(const Boson3State& s) {
  Boson2QState b;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) b.b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = s.c[static_cast<std::size_t>(i + j)];
  return b;
}

/// Three qubits inside the qubit + two-fermion system, matching the diagonal
/// Jordan-algebra inclusion.
inline QubitFermion4State to_qubit_fermion4(const Qubit3State& a) {
  QubitFermion4State d;
  d.set(0, 0, 1, a(0, 0, 0));
  d.set(1, 2, 3, a(1, 1, 1));
  d.set(0, 2, 3, a(0, 1, 1));
  d.set(1, 0, 3, a(1, 0, 1));
  d.set(1, 2, 1, a(1, 1, 0));
  d.set(1, 0, 1, a(1, 0, 0));
  d.set(0, 2, 1, a(0, 1, 0));
  d.set(0, 0, 3, a(0, 0, 1));
  return d;
}

// Freudenthal coordinates (J3 forms).

inline Vector three_qubit_to_freudenthal(const Qubit3State& s) {
  jordan::Mat3 a = jordan::Mat3::Zero(), b = jordan::Mat3::Zero();
  a.diagonal() << s(0, 1, 1), s(1, 0, 1), s(1, 1, 0);
  b.diagonal() << s(1, 0, 0), s(0, 1, 0), s(0, 0, 1);
  return {s(0, 0, 0), s(1, 1, 1), Element::j3(a), Element::j3(b)};
}

inline Vector boson2_qubit_to_freudenthal(const Boson2QState& s) {
  const auto& b = s.b;
  jordan::Mat3 a = jordan::Mat3::Zero(), bb = jordan::Mat3::Zero();
  a.diagonal() << b[0][2], b[1][1], b[1][1];
  bb.diagonal() << b[1][0], b[0][1], b[0][1];
  return {b[0][0], b[1][2], Element::j3(a), Element::j3(bb)};
}

inline Vector boson3_to_freudenthal(const Boson3State& s) {
  const jordan::Mat3 id = jordan::Mat3::Identity();
  return {s.c[0], s.c[3], Element::j3(s.c[2] * id), Element::j3(s.c[1] * id)};
}

inline Vector qubit_fermion4_to_freudenthal(const QubitFermion4State& s) {
  jordan::Mat3 a = jordan::Mat3::Zero(), b = jordan::Mat3::Zero();
  a(0, 0) = s(0, 2, 3);
  a(1, 1) = s(1, 0, 3);
  a(1, 2) = s(1, 2, 0);
  a(2, 1) = s(1, 1, 3);
  a(2, 2) = s(1, 2, 1);
  b(0, 0) = s(1, 0, 1);
  b(1, 1) = s(0, 2, 1);
  b(1, 2) = s(0, 0, 2);
  b(2, 1) = s(0, 3, 1);
  b(2, 2) = s(0, 0, 3);
  return {s(0, 0, 1), s(1, 2, 3), Element::j3(a), Element::j3(b)};
}

// Freudenthal coordinates over the native (smallest) algebra of each system.

inline Vector boson3_native(const Boson3State& s) {
  return {s.c[0], s.c[3], Element::j1(s.c[2]), Element::j1(s.c[1])};
}

inline Vector boson2_qubit_native(const Boson2QState& s) {
  const auto& b = s.b;
  return {b[0][0], b[1][2], Element::j11(b[0][2], b[1][1]), Element::j11(b[1][0], b[0][1])};
}

inline Vector three_qubit_native(const Qubit3State& s) {
  return {s(0, 0, 0), s(1, 1, 1), Element::j111(s(0, 1, 1), s(1, 0, 1), s(1, 1, 0)),
          Element::j111(s(1, 0, 0), s(0, 1, 0), s(0, 0, 1))};
}

inline Vector qubit_fermion4_native(const QubitFermion4State& s) {
  jordan::Mat2 a, b;
  a << s(1, 0, 3), s(1, 2, 0), s(1, 1, 3), s(1, 2, 1);
  b << s(0, 2, 1), s(0, 0, 2), s(0, 3, 1), s(0, 0, 3);
  return {s(0, 0, 1), s(1, 2, 3), Element::j12(s(0, 2, 3), a), Element::j12(s(1, 0, 1), b)};
}

// Images in the three-fermion space under the basis relabelings.

/// e_i (x) e_j (x) e_k -> e_{3i} ^ e_{1+3j} ^ e_{2+3k} (0-based modes).
inline fermion::State three_qubit_fermion_image(const Qubit3State& s) {
  fermion::State p(3, 6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        const std::array<int, 3> modes{3 * i, 1 + 3 * j, 2 + 3 * k};
        p.add(modes, s(i, j, k));
      }
  return p;
}

/// Qubit level i -> mode 3i; fermion modes 0,1,2,3 -> 1,2,4,5 (0-based).
inline fermion::State qubit_fermion4_fermion_image(const QubitFermion4State& s) {
  static constexpr std::array<int, 4> fmode{1, 2, 4, 5};
  fermion::State p(3, 6);
  for (int i = 0; i < 2; ++i)
    for (const auto& jk : QubitFermion4State::pairs) {
      const std::array<int, 3> modes{3 * i, fmode[static_cast<std::size_t>(jk[0])], fmode[static_cast<std::size_t>(jk[1])]};
      p.add(modes, s(i, jk[0], jk[1]));
    }
  return p;
}

// ---------------------------------------------------------------------------
// Separability.

/// A state of distinguishable species is a product of decomposable factors iff
/// its image under phi is decomposable.
inline bool separability_via_embedding(const MultiState& psi, double tol = default_tolerance) {
  if (psi.is_zero()) throw NumericalError("separability of the zero state is undefined");
  return fermion::is_decomposable(phi(psi), tol);
}

/// Qubit product test: for every party j and every pair of contexts,
/// psi[..0..] psi'[..1..] = psi[..1..] psi'[..0..].
inline bool qubit_separability_direct(const MultiState& psi, double tol = default_tolerance) {
  const auto& shape = psi.shape();
  if (!shape.is_qubits()) throw ShapeError("direct qubit test needs an all-qubit shape");
  if (psi.is_zero()) throw NumericalError("separability of the zero state is undefined");
  const auto parties = static_cast<int>(shape.species_count());
  const std::size_t dim = std::size_t{1} << parties;
  std::vector<cplx> amp(dim, 0.0);
  for (const auto& [key, v] : psi.terms()) {
    std::size_t idx = 0;
    for (int j = 0; j < parties; ++j) idx = (idx << 1) | static_cast<std::size_t>(key[static_cast<std::size_t>(j)].indices()[0]);
    amp[idx] = v;
  }
  const double scale = tol * psi.norm() * psi.norm();
  for (int j = 0; j < parties; ++j) {
    const std::size_t bit = std::size_t{1} << (parties - 1 - j);
    for (std::size_t ctx_i = 0; ctx_i < dim; ++ctx_i) {
      if (ctx_i & bit) continue;
      for (std::size_t ctx_h = 0; ctx_h < dim; ++ctx_h) {
        if (ctx_h & bit) continue;
        const cplx lhs = amp[ctx_i] * amp[ctx_h | bit];
        const cplx rhs = amp[ctx_i | bit] * amp[ctx_h];
        if (std::abs(lhs - rhs) > scale) return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Reduced density matrices.

struct EmbeddedRDM {
  fermion::OneParticleRDM global;           // rho of phi(psi)
  std::vector<Eigen::MatrixXcd> species;    // rho_i, each of unit trace
  std::vector<double> weights;              // k_i / k

  /// The block-diagonal sum of (k_i/k) rho_i.
  Eigen::MatrixXcd direct_sum() const {
    Eigen::Index n = 0;
    for (const auto& r : species) n += r.rows();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
    Eigen::Index at = 0;
    for (std::size_t i = 0; i < species.size(); ++i) {
      const auto m = species[i].rows();
      out.block(at, at, m, m) = weights[i] * species[i];
      at += m;
    }
    return out;
  }
  double residual() const { return (global.rho - direct_sum()).norm(); }
};

/// One-particle RDM of species i, by partial trace directly on psi.
inline Eigen::MatrixXcd species_rdm(const MultiState& psi, std::size_t i) {
  const auto& sp = psi.shape().species(i);
  std::map<LocalKey, std::vector<std::pair<int, cplx>>> groups;
  for (const auto& [key, v] : psi.terms())
    for (int a : key[i].indices()) {
      LocalKey rest = key;
      rest[i] = key[i].without(a);
      const double sign = (key[i].count_below(a) % 2 == 0) ? 1.0 : -1.0;
      groups[rest].emplace_back(a, sign * v);
    }
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(sp.n, sp.n);
  for (const auto& [rest, entries] : groups)
    for (const auto& [a, xa] : entries)
      for (const auto& [b, xb] : entries) rho(a, b) += xa * std::conj(xb);
  return rho / static_cast<double>(sp.k);
}

inline EmbeddedRDM embedded_rdm_blocks(const MultiState& psi) {
  fermion::detail::require_normalized(psi.norm());
  EmbeddedRDM out{fermion::one_particle_rdm(phi(psi)), {}, {}};
  const auto& shape = psi.shape();
  for (std::size_t i = 0; i < shape.species_count(); ++i) {
    out.species.push_back(species_rdm(psi, i));
    out.weights.push_back(static_cast<double>(shape.species(i).k) / shape.total_k());
  }
  return out;
}

}  // namespace entangle::embed
