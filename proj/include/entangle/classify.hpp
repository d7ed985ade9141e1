#pragma once

// SLOCC classification: per-system quartic invariants, rank-based class
// names, cut refinement, group actions and random sampling.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "entangle/embed.hpp"

namespace entangle::classify {

using embed::Boson2QState;
using embed::Boson3State;
using embed::MultiState;
using embed::Qubit3State;
using embed::QubitFermion4State;
using embed::SystemShape;
using freudenthal::Rank;

enum class SystemKind : std::uint8_t { fermion, multi, qubit3, boson2q, boson3, qubit_fermion4 };

inline const char* name(SystemKind k) {
  switch (k) {
    case SystemKind::fermion: return "fermion";
    case SystemKind::multi: return "multi";
    case SystemKind::qubit3: return "qubit3";
    case SystemKind::boson2q: return "boson2q";
    case SystemKind::boson3: return "boson3";
    case SystemKind::qubit_fermion4: return "qubit_fermion4";
  }
  return "?";
}

inline std::optional<SystemKind> parse_system(std::string_view s) {
  for (auto k : {SystemKind::fermion, SystemKind::multi, SystemKind::qubit3, SystemKind::boson2q,
                 SystemKind::boson3, SystemKind::qubit_fermion4})
    if (s == name(k)) return k;
  return std::nullopt;
}

/// Alternatives are ordered as SystemKind.
using AnyState = std::variant<fermion::State, MultiState, Qubit3State, Boson2QState, Boson3State, QubitFermion4State>;

inline SystemKind kind_of(const AnyState& s) { return static_cast<SystemKind>(s.index()); }

inline double state_norm(const AnyState& s) {
  return std::visit([](const auto& x) { return x.norm(); }, s);
}

enum class ClassName : std::uint8_t { separable, biseparable, W, GHZ, entangled };

inline const char* name(ClassName c) {
  switch (c) {
    case ClassName::separable: return "separable";
    case ClassName::biseparable: return "biseparable";
    case ClassName::W: return "W";
    case ClassName::GHZ: return "GHZ";
    case ClassName::entangled: return "entangled";
  }
  return "?";
}

/// A bipartition of the distinguishable parties; `left` always holds party 0.
struct Cut {
  std::uint64_t left = 0;
  int parties = 0;

  std::string to_string() const {
    std::string l, r;
    for (int i = 0; i < parties; ++i) ((left >> i) & 1u ? l : r) += static_cast<char>('A' + i);
    return l + "|" + r;
  }
  friend bool operator==(const Cut&, const Cut&) = default;
};

struct InvariantsReport {
  std::optional<double> tangle;           // |T| from the explicit polynomial
  std::optional<double> tangle_embedded;  // |T| along the Freudenthal embedding
  std::optional<double> xi;               // wedge-power invariant where defined
};

struct ClassLabel {
  std::optional<Rank> rank;  // absent on the rank-free general path
  ClassName name = ClassName::separable;
  std::vector<Cut> cut_pattern;
  InvariantsReport invariants;

  /// Labels compare by classification content; invariant values are ignored.
  friend bool operator==(const ClassLabel& a, const ClassLabel& b) {
    return a.rank == b.rank && a.name == b.name && a.cut_pattern == b.cut_pattern;
  }
};

// ---------------------------------------------------------------------------
// Explicit invariant polynomials.

/// Cayley hyperdeterminant in the normalization with T(GHZ) = 1.
inline cplx three_tangle_polynomial(const Qubit3State& s) {
  const auto& a = s.a;
  const cplx p07 = a[0] * a[7], p16 = a[1] * a[6], p25 = a[2] * a[5], p34 = a[3] * a[4];
  return 4.0 * (p07 * p07 + p16 * p16 + p25 * p25 + p34 * p34) -
         8.0 * (p07 * p16 + p07 * p25 + p07 * p34 + p16 * p25 + p16 * p34 + p25 * p34) +
         16.0 * (a[0] * a[3] * a[5] * a[6] + a[7] * a[4] * a[2] * a[1]);
}

inline double three_tangle(const Qubit3State& s) { return std::abs(three_tangle_polynomial(s)); }

inline cplx boson2_qubit_polynomial(const Boson2QState& s) {
  const cplx b00 = s.b[0][0], b01 = s.b[0][1], b02 = s.b[0][2];
  const cplx b10 = s.b[1][0], b11 = s.b[1][1], b12 = s.b[1][2];
  return 4.0 * (b00 * b00 * b12 * b12 + b02 * b02 * b10 * b10) +
         16.0 * (b11 * b11 * b00 * b02 + b01 * b01 * b10 * b12) - 8.0 * b00 * b02 * b10 * b12 -
         16.0 * (b01 * b02 * b10 * b11 + b00 * b01 * b11 * b12);
}

inline cplx boson3_polynomial(const Boson3State& s) {
  const cplx c0 = s.c[0], c1 = s.c[1], c2 = s.c[2], c3 = s.c[3];
  return 4.0 * c0 * c0 * c3 * c3 - 12.0 * c1 * c1 * c2 * c2 - 24.0 * c0 * c1 * c2 * c3 +
         16.0 * (c0 * c2 * c2 * c2 + c3 * c1 * c1 * c1);
}

inline cplx qubit_fermion4_polynomial(const QubitFermion4State& s) {
  const cplx d001 = s(0, 0, 1), d002 = s(0, 0, 2), d003 = s(0, 0, 3);
  const cplx d021 = s(0, 2, 1), d023 = s(0, 2, 3), d031 = s(0, 3, 1);
  const cplx d101 = s(1, 0, 1), d103 = s(1, 0, 3), d113 = s(1, 1, 3);
  const cplx d120 = s(1, 2, 0), d121 = s(1, 2, 1), d123 = s(1, 2, 3);
  auto sq = [](cplx z) { return z * z; };
  return 4.0 * (sq(d023 * d101) + sq(d021 * d103) + sq(d002 * d113) + sq(d031 * d120) + sq(d003 * d121) +
                sq(d001 * d123)) +
         8.0 * (d002 * d021 * d103 * d113 + d021 * d031 * d103 * d120 + d002 * d003 * d113 * d121 +
                d003 * d031 * d120 * d121) +
         16.0 * (d003 * d021 * d113 * d120 + d001 * d023 * d103 * d121 + d002 * d031 * d103 * d121 +
                 d003 * d021 * d101 * d123) -
         16.0 * (d001 * d023 * d113 * d120 + d002 * d031 * d101 * d123) -
         8.0 * (d021 * d023 * d101 * d103 + d002 * d023 * d101 * d113 + d023 * d031 * d101 * d120 +
                d002 * d031 * d113 * d120 + d003 * d023 * d101 * d121 + d003 * d021 * d103 * d121 +
                d001 * d023 * d101 * d123 + d001 * d021 * d103 * d123 + d001 * d002 * d113 * d123 +
                d001 * d031 * d120 * d123 + d001 * d003 * d121 * d123);
}

// ---------------------------------------------------------------------------
// Routing into the Freudenthal systems.

inline bool is_three_fermion(const fermion::State& p) { return p.k() == 3 && p.n() == 6; }

/// The J3 Freudenthal vector of a state in one of the tripartite systems, or
/// nothing for shapes outside them.
inline std::optional<freudenthal::Vector> freudenthal_vector(const AnyState& s) {
  struct Visitor {
    std::optional<freudenthal::Vector> operator()(const fermion::State& p) const {
      if (!is_three_fermion(p)) return std::nullopt;
      return fermion::to_freudenthal(p);
    }
    std::optional<freudenthal::Vector> operator()(const MultiState& m) const {
      if (m.shape() == embed::qubit3_shape()) return embed::three_qubit_to_freudenthal(embed::qubit3_from_multi(m));
      if (m.shape() == embed::qubit_fermion4_shape())
        return embed::qubit_fermion4_to_freudenthal(embed::qubit_fermion4_from_multi(m));
      if (m.shape().species_count() == 1 && m.shape().species(0).k == 3 && m.shape().species(0).n == 6)
        return fermion::to_freudenthal(embed::phi(m));
      return std::nullopt;
    }
    std::optional<freudenthal::Vector> operator()(const Qubit3State& q) const { return embed::three_qubit_to_freudenthal(q); }
    std::optional<freudenthal::Vector> operator()(const Boson2QState& b) const { return embed::boson2_qubit_to_freudenthal(b); }
    std::optional<freudenthal::Vector> operator()(const Boson3State& c) const { return embed::boson3_to_freudenthal(c); }
    std::optional<freudenthal::Vector> operator()(const QubitFermion4State& d) const {
      return embed::qubit_fermion4_to_freudenthal(d);
    }
  };
  return std::visit(Visitor{}, s);
}

/// |T| from the per-system polynomial, without passing through the embedding.
/// Plain three-fermion states use the coordinate formula on (alpha, beta, A, B).
inline double invariant_for(const AnyState& s) {
  struct Visitor {
    double operator()(const fermion::State& p) const {
      if (!is_three_fermion(p)) throw ShapeError("no quartic invariant for this fermion shape");
      return std::abs(freudenthal::quartic_T_eq5(fermion::to_freudenthal(p)));
    }
    double operator()(const MultiState& m) const {
      if (m.shape() == embed::qubit3_shape()) return three_tangle(embed::qubit3_from_multi(m));
      if (m.shape() == embed::qubit_fermion4_shape())
        return std::abs(qubit_fermion4_polynomial(embed::qubit_fermion4_from_multi(m)));
      if (m.shape().species_count() == 1) return (*this)(embed::phi(m));
      throw ShapeError("no quartic invariant for this multi-species shape");
    }
    double operator()(const Qubit3State& q) const { return three_tangle(q); }
    double operator()(const Boson2QState& b) const { return std::abs(boson2_qubit_polynomial(b)); }
    double operator()(const Boson3State& c) const { return std::abs(boson3_polynomial(c)); }
    double operator()(const QubitFermion4State& d) const { return std::abs(qubit_fermion4_polynomial(d)); }
  };
  return std::visit(Visitor{}, s);
}

/// |T| along the embedding: the Freudenthal quartic (T = 2q) of the J3 vector.
inline double embedding_invariant(const AnyState& s) {
  const auto x = freudenthal_vector(s);
  if (!x) throw ShapeError("state lies outside the Freudenthal systems");
  return std::abs(2.0 * freudenthal::quartic_q(*x));
}

/// The fermionic image used for general separability questions.
inline fermion::State fermionic_image(const AnyState& s) {
  struct Visitor {
    fermion::State operator()(const fermion::State& p) const { return p; }
    fermion::State operator()(const MultiState& m) const { return embed::phi(m); }
    fermion::State operator()(const Qubit3State& q) const { return embed::phi(embed::to_multi(q)); }
    fermion::State operator()(const Boson2QState& b) const { return embed::phi(embed::to_multi(embed::to_qubit3(b))); }
    fermion::State operator()(const Boson3State& c) const { return embed::phi(embed::to_multi(embed::to_qubit3(c))); }
    fermion::State operator()(const QubitFermion4State& d) const { return embed::phi(embed::to_multi(d)); }
  };
  return std::visit(Visitor{}, s);
}

/// xi where its preconditions hold: plain fermion states with k even and k | n,
/// qudit states with an even number of parties (via phi_tilde), and other
/// multi-species states whose phi image meets the fermion conditions.
inline std::optional<double> xi_if_defined(const AnyState& s) {
  if (const auto* p = std::get_if<fermion::State>(&s)) {
    if (p->k() % 2 == 0 && p->n() % p->k() == 0) return fermion::xi_invariant(*p);
    return std::nullopt;
  }
  if (const auto* m = std::get_if<MultiState>(&s)) {
    const auto& shape = m->shape();
    if (shape.total_k() % 2 != 0 || shape.total_n() % shape.total_k() != 0) return std::nullopt;
    if (shape.is_qudit_uniform()) return fermion::xi_invariant(embed::phi_tilde(*m));
    return fermion::xi_invariant(embed::phi(*m));
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Cut refinement.

/// Two-party regrouping of psi across `left`: each side's local keys are
/// enumerated into the modes of one single-particle species.
inline MultiState regroup(const MultiState& psi, std::uint64_t left) {
  std::map<embed::LocalKey, int> rows, cols;
  std::vector<std::tuple<embed::LocalKey, embed::LocalKey, cplx>> entries;
  for (const auto& [key, v] : psi.terms()) {
    embed::LocalKey l, r;
    for (std::size_t i = 0; i < key.size(); ++i) ((left >> i) & 1u ? l : r).push_back(key[i]);
    rows.emplace(l, 0);
    cols.emplace(r, 0);
    entries.emplace_back(std::move(l), std::move(r), v);
  }
  int idx = 0;
  for (auto& [k, v] : rows) v = idx++;
  idx = 0;
  for (auto& [k, v] : cols) v = idx++;
  const int nr = std::max<int>(1, static_cast<int>(rows.size()));
  const int nc = std::max<int>(1, static_cast<int>(cols.size()));
  MultiState out(SystemShape({{1, nr}, {1, nc}}));
  for (const auto& [l, r, v] : entries) {
    const std::array<int, 2> lv{rows.at(l), cols.at(r)};
    out.set_levels(lv, v);
  }
  return out;
}

/// All bipartitions of the distinguishable species across which psi factors.
inline std::vector<Cut> factoring_cuts(const MultiState& psi, double tol = default_tolerance) {
  const int parties = static_cast<int>(psi.shape().species_count());
  std::vector<Cut> cuts;
  if (parties < 2) return cuts;
  const std::uint64_t full = (std::uint64_t{1} << parties) - 1;
  for (std::uint64_t mask = 1; mask < full; mask += 2)
    if (embed::separability_via_embedding(regroup(psi, mask), tol)) cuts.push_back({mask, parties});
  return cuts;
}

/// The distinguishable-party view of a state, if it has one.
inline std::optional<MultiState> party_view(const AnyState& s) {
  if (const auto* m = std::get_if<MultiState>(&s)) return *m;
  if (const auto* q = std::get_if<Qubit3State>(&s)) return embed::to_multi(*q);
  if (const auto* d = std::get_if<QubitFermion4State>(&s)) return embed::to_multi(*d);
  if (const auto* b = std::get_if<Boson2QState>(&s)) {
    // Qubit | boson pair, with the pair in its occupation coordinates.
    MultiState m(SystemShape({{1, 2}, {1, 3}}));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 3; ++j) {
        const std::array<int, 2> lv{i, j};
        m.set_levels(lv, b->b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      }
    return m;
  }
  return std::nullopt;
}

inline ClassName name_for_rank(Rank r, SystemKind system) {
  switch (r) {
    case Rank::four: return ClassName::GHZ;
    case Rank::three: return ClassName::W;
    case Rank::two: return system == SystemKind::boson3 ? ClassName::separable : ClassName::biseparable;
    default: return ClassName::separable;
  }
}

inline void require_nonzero(const AnyState& s) {
  if (state_norm(s) == 0.0) throw NumericalError("cannot classify the zero state");
}

inline ClassLabel classify_state(const AnyState& s, double tol = default_tolerance) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  require_nonzero(s);
  const SystemKind system = kind_of(s);
  ClassLabel label;
  label.invariants.xi = xi_if_defined(s);
  if (const auto x = freudenthal_vector(s)) {
    label.rank = freudenthal::rank(*x, tol);
    label.name = name_for_rank(*label.rank, system);
    label.invariants.tangle = invariant_for(s);
    label.invariants.tangle_embedded = embedding_invariant(s);
    if (label.name == ClassName::biseparable)
      if (const auto parties = party_view(s)) label.cut_pattern = factoring_cuts(*parties, tol);
    return label;
  }
  if (const auto* p = std::get_if<fermion::State>(&s)) {
    label.name = fermion::is_decomposable(*p, tol) ? ClassName::separable : ClassName::entangled;
    return label;
  }
  const auto& m = std::get<MultiState>(s);
  if (embed::separability_via_embedding(m, tol)) {
    label.name = ClassName::separable;
    return label;
  }
  label.cut_pattern = factoring_cuts(m, tol);
  label.name = label.cut_pattern.empty() ? ClassName::entangled : ClassName::biseparable;
  return label;
}

// ---------------------------------------------------------------------------
// Group actions.

/// One invertible matrix per local factor. Block layout per system:
/// fermion: one n x n; multi: one n_i x n_i per species; qubit3: three 2x2;
/// boson2q: qubit 2x2 then boson 2x2; boson3: one 2x2; qubit_fermion4: 2x2 then 4x4.
class GroupElement {
 public:
  explicit GroupElement(std::vector<Eigen::MatrixXcd> blocks) : blocks_(std::move(blocks)) {
    for (const auto& g : blocks_) {
      if (g.rows() != g.cols() || g.rows() == 0) throw ShapeError("group element blocks must be square");
      for (Eigen::Index i = 0; i < g.size(); ++i) checked(g.data()[i], "group element");
      const cplx det = g.determinant();
      if (std::abs(det) <= 1e-12) throw NumericalError("singular group element");
      dets_.push_back(det);
    }
  }

  const std::vector<Eigen::MatrixXcd>& blocks() const { return blocks_; }
  const Eigen::MatrixXcd& block(std::size_t i) const { return blocks_.at(i); }
  const std::vector<cplx>& determinants() const { return dets_; }

 private:
  std::vector<Eigen::MatrixXcd> blocks_;
  std::vector<cplx> dets_;
};

/// Block sizes a group element must have to act on states of this shape.
inline std::vector<int> block_sizes(const AnyState& s) {
  switch (kind_of(s)) {
    case SystemKind::fermion: return {std::get<fermion::State>(s).n()};
    case SystemKind::multi: {
      std::vector<int> out;
      for (const auto& sp : std::get<MultiState>(s).shape().all()) out.push_back(sp.n);
      return out;
    }
    case SystemKind::qubit3: return {2, 2, 2};
    case SystemKind::boson2q: return {2, 2};
    case SystemKind::boson3: return {2};
    case SystemKind::qubit_fermion4: return {2, 4};
  }
  return {};
}

/// Applies g to the modes of species i (k_i-fold compound on that block).
inline MultiState act_on_species(const MultiState& psi, std::size_t i, const Eigen::MatrixXcd& g) {
  const auto& sp = psi.shape().species(i);
  if (g.rows() != sp.n) throw ShapeError("group element block size differs from species mode count");
  const auto targets = fermion::combinations(sp.n, sp.k);
  std::map<embed::LocalKey, cplx> acc;
  for (const auto& [key, v] : psi.terms())
    for (auto t : targets) {
      const cplx c = fermion::minor_det(g, t, key[i]);
      if (c == cplx(0.0)) continue;
      auto k2 = key;
      k2[i] = t;
      acc[k2] += c * v;
    }
  MultiState out(psi.shape());
  for (const auto& [key, v] : acc) out.set(key, v);
  return out;
}

inline MultiState act(const MultiState& psi, const GroupElement& g) {
  if (g.blocks().size() != psi.shape().species_count()) throw ShapeError("one group block per species expected");
  MultiState out = psi;
  for (std::size_t i = 0; i < g.blocks().size(); ++i) out = act_on_species(out, i, g.block(i));
  return out;
}

namespace detail {
inline Qubit3State act_qubit3(const Qubit3State& s, const Eigen::MatrixXcd& g0, const Eigen::MatrixXcd& g1,
                              const Eigen::MatrixXcd& g2) {
  Qubit3State out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        cplx sum = 0.0;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) sum += g0(i, a) * g1(j, b) * g2(k, c) * s(a, b, c);
        out(i, j, k) = sum;
      }
  return out;
}
}  // namespace detail

inline AnyState slocc_act(const AnyState& s, const GroupElement& g) {
  const auto sizes = block_sizes(s);
  if (sizes.size() != g.blocks().size()) throw ShapeError("wrong number of group element blocks");
  for (std::size_t i = 0; i < sizes.size(); ++i)
    if (g.block(i).rows() != sizes[i]) throw ShapeError("group element block has the wrong size");
  switch (kind_of(s)) {
    case SystemKind::fermion: return fermion::apply_compound(std::get<fermion::State>(s), g.block(0));
    case SystemKind::multi: return act(std::get<MultiState>(s), g);
    case SystemKind::qubit3:
      return detail::act_qubit3(std::get<Qubit3State>(s), g.block(0), g.block(1), g.block(2));
    case SystemKind::boson2q: {
      const auto q = detail::act_qubit3(embed::to_qubit3(std::get<Boson2QState>(s)), g.block(0), g.block(1), g.block(1));
      Boson2QState out;
      for (int i = 0; i < 2; ++i) out.b[static_cast<std::size_t>(i)] = {q(i, 0, 0), q(i, 0, 1), q(i, 1, 1)};
      return out;
    }
    case SystemKind::boson3: {
      const auto q = detail::act_qubit3(embed::to_qubit3(std::get<Boson3State>(s)), g.block(0), g.block(0), g.block(0));
      return Boson3State{{q(0, 0, 0), q(0, 0, 1), q(0, 1, 1), q(1, 1, 1)}};
    }
    case SystemKind::qubit_fermion4:
      return embed::qubit_fermion4_from_multi(act(embed::to_multi(std::get<QubitFermion4State>(s)), g));
  }
  throw ShapeError("unknown system");
}

// ---------------------------------------------------------------------------
// Random sampling.

/// splitmix64 step: derives independent per-task seeds from one base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// What to sample: the system kind plus, for fermion and multi, the shape.
struct SystemSpec {
  SystemKind kind = SystemKind::qubit3;
  SystemShape shape;  // fermion: a single species (k, n); multi: all species

  static SystemSpec of(SystemKind k) {
    switch (k) {
      case SystemKind::qubit3: return {k, embed::qubit3_shape()};
      case SystemKind::qubit_fermion4: return {k, embed::qubit_fermion4_shape()};
      case SystemKind::boson2q: return {k, SystemShape({{1, 2}, {1, 2}})};
      case SystemKind::boson3: return {k, SystemShape({{1, 2}})};
      default: throw ShapeError("fermion and multi systems need an explicit shape");
    }
  }
  static SystemSpec fermion(int k, int n) { return {SystemKind::fermion, SystemShape({{k, n}})}; }
  static SystemSpec multi(SystemShape s) { return {SystemKind::multi, std::move(s)}; }
};

inline SystemSpec spec_of(const AnyState& s) {
  switch (kind_of(s)) {
    case SystemKind::fermion: {
      const auto& p = std::get<fermion::State>(s);
      return SystemSpec::fermion(p.k(), p.n());
    }
    case SystemKind::multi: return SystemSpec::multi(std::get<MultiState>(s).shape());
    default: return SystemSpec::of(kind_of(s));
  }
}

namespace detail {
inline cplx gaussian(std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const double re = nd(rng);
  const double im = nd(rng);
  return {re, im};
}

inline Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& rng) {
  Eigen::MatrixXcd z(n, n);
  for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = gaussian(rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}
}  // namespace detail

/// i.i.d. complex Gaussian amplitudes, normalized in the system's own norm.
inline AnyState random_state(const SystemSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto g = [&] { return detail::gaussian(rng); };
  switch (spec.kind) {
    case SystemKind::fermion: {
      const auto& sp = spec.shape.species(0);
      if (fermion::binomial(sp.n, sp.k) > 1e7) throw ShapeError("random fermion state too large");
      fermion::State p(sp.k, sp.n);
      for (auto key : fermion::combinations(sp.n, sp.k)) p.set(key, g());
      return p.normalized();
    }
    case SystemKind::multi: {
      std::vector<embed::LocalKey> keys{{}};
      for (const auto& sp : spec.shape.all()) {
        std::vector<embed::LocalKey> next;
        for (const auto& k : keys)
          for (auto local : fermion::combinations(sp.n, sp.k)) {
            next.push_back(k);
            next.back().push_back(local);
          }
        keys = std::move(next);
        if (keys.size() > 10'000'000) throw ShapeError("random multi-species state too large");
      }
      MultiState m(spec.shape);
      for (const auto& k : keys) m.set(k, g());
      return m.normalized();
    }
    case SystemKind::qubit3: {
      Qubit3State q;
      for (auto& z : q.a) z = g();
      const double nn = q.norm();
      for (auto& z : q.a) z /= nn;
      return q;
    }
    case SystemKind::boson2q: {
      Boson2QState b;
      for (auto& row : b.b)
        for (auto& z : row) z = g();
      const double nn = b.norm();
      for (auto& row : b.b)
        for (auto& z : row) z /= nn;
      return b;
    }
    case SystemKind::boson3: {
      Boson3State c;
      for (auto& z : c.c) z = g();
      const double nn = c.norm();
      for (auto& z : c.c) z /= nn;
      return c;
    }
    case SystemKind::qubit_fermion4: {
      QubitFermion4State d;
      for (auto& row : d.d)
        for (auto& z : row) z = g();
      const double nn = d.norm();
      for (auto& row : d.d)
        for (auto& z : row) z /= nn;
      return d;
    }
  }
  throw ShapeError("unknown system");
}

/// U diag(s) V with Haar-like unitaries and singular values in [0.5, 2]; with
/// unit_det each block is rescaled to determinant 1.
inline Eigen::MatrixXcd random_invertible(int n, std::mt19937_64& rng, bool unit_det) {
  std::uniform_real_distribution<double> ud(0.5, 2.0);
  Eigen::VectorXcd s(n);
  for (int i = 0; i < n; ++i) s(i) = ud(rng);
  Eigen::MatrixXcd g = detail::random_unitary(n, rng) * s.asDiagonal() * detail::random_unitary(n, rng);
  if (unit_det) g /= std::pow(g.determinant(), 1.0 / n);
  return g;
}

inline GroupElement random_group_element(const AnyState& like, std::uint64_t seed, bool unit_det = false) {
  std::mt19937_64 rng(seed);
  std::vector<Eigen::MatrixXcd> blocks;
  for (int n : block_sizes(like)) blocks.push_back(random_invertible(n, rng, unit_det));
  return GroupElement(std::move(blocks));
}

}  // namespace entangle::classify
