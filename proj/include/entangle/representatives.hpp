#pragma once

// Orbit representatives for the five tripartite systems, and the four-qubit
// pair whose classes split under the fermionic embedding.

#include <string>
#include <vector>

#include "entangle/classify.hpp"

namespace entangle::reps {

using classify::AnyState;
using classify::ClassName;

struct Representative {
  std::string system;  // state-file system name
  std::string row;     // GHZ, W, B1, B2, B3, S
  ClassName expected;
  int rank;
  std::vector<std::string> cuts;  // expected cut pattern, e.g. {"AC|B"}
  AnyState state;

  std::string stem() const { return system + "_" + row; }
};

namespace detail {
inline const double r2 = 1.0 / std::sqrt(2.0);
inline const double r3 = 1.0 / std::sqrt(3.0);

inline fermion::State fermion_rep(std::initializer_list<std::pair<std::array<int, 3>, double>> terms) {
  fermion::State p(3, 6);
  for (const auto& [modes, c] : terms) p.add(modes, c);
  return p;
}

inline embed::Qubit3State qubit3(std::initializer_list<std::pair<std::array<int, 3>, double>> terms) {
  embed::Qubit3State q;
  for (const auto& [l, c] : terms) q(l[0], l[1], l[2]) = c;
  return q;
}

inline embed::QubitFermion4State qf4(std::initializer_list<std::pair<std::array<int, 3>, double>> terms) {
  embed::QubitFermion4State d;
  for (const auto& [l, c] : terms) d.set(l[0], l[1], l[2], c);
  return d;
}

inline embed::Boson2QState boson2q(std::initializer_list<std::pair<std::array<int, 2>, double>> terms) {
  embed::Boson2QState b;
  for (const auto& [l, c] : terms) b.b[static_cast<std::size_t>(l[0])][static_cast<std::size_t>(l[1])] = c;
  return b;
}
}  // namespace detail

/// All 22 representatives. Fermion modes are 0-based here (e1 -> 0, e1b -> 3).
inline std::vector<Representative> table_representatives() {
  using detail::r2;
  using detail::r3;
  using CN = ClassName;
  std::vector<Representative> out;

  // Three fermions in six modes.
  out.push_back({"fermion", "GHZ", CN::GHZ, 4, {}, detail::fermion_rep({{{0, 1, 2}, r2}, {{3, 4, 5}, r2}})});
  out.push_back({"fermion", "W", CN::W, 3, {},
                 detail::fermion_rep({{{3, 1, 2}, r3}, {{0, 4, 2}, r3}, {{0, 1, 5}, r3}})});
  out.push_back({"fermion", "B1", CN::biseparable, 2, {}, detail::fermion_rep({{{0, 1, 2}, r2}, {{0, 4, 5}, r2}})});
  out.push_back({"fermion", "S", CN::separable, 1, {}, detail::fermion_rep({{{0, 1, 2}, 1.0}})});

  // A qubit and two fermions in four modes; d_{ijk} antisymmetric in (j, k).
  out.push_back({"qubit_fermion4", "GHZ", CN::GHZ, 4, {}, detail::qf4({{{0, 0, 1}, r2}, {{1, 2, 3}, r2}})});
  out.push_back({"qubit_fermion4", "W", CN::W, 3, {},
                 detail::qf4({{{0, 2, 3}, r3}, {{1, 0, 3}, r3}, {{1, 2, 1}, r3}})});
  out.push_back({"qubit_fermion4", "B1", CN::biseparable, 2, {"A|B"}, detail::qf4({{{0, 0, 1}, r2}, {{0, 2, 3}, r2}})});
  out.push_back({"qubit_fermion4", "B2", CN::biseparable, 2, {}, detail::qf4({{{0, 0, 1}, r2}, {{1, 0, 3}, r2}})});
  out.push_back({"qubit_fermion4", "S", CN::separable, 1, {}, detail::qf4({{{0, 0, 1}, 1.0}})});

  // Three qubits.
  out.push_back({"qubit3", "GHZ", CN::GHZ, 4, {}, detail::qubit3({{{0, 0, 0}, r2}, {{1, 1, 1}, r2}})});
  out.push_back({"qubit3", "W", CN::W, 3, {}, detail::qubit3({{{1, 0, 0}, r3}, {{0, 1, 0}, r3}, {{0, 0, 1}, r3}})});
  out.push_back({"qubit3", "B1", CN::biseparable, 2, {"A|BC"}, detail::qubit3({{{0, 0, 0}, r2}, {{0, 1, 1}, r2}})});
  out.push_back({"qubit3", "B2", CN::biseparable, 2, {"AC|B"}, detail::qubit3({{{0, 0, 0}, r2}, {{1, 0, 1}, r2}})});
  out.push_back({"qubit3", "B3", CN::biseparable, 2, {"AB|C"}, detail::qubit3({{{0, 0, 0}, r2}, {{1, 1, 0}, r2}})});
  out.push_back({"qubit3", "S", CN::separable, 1, {}, detail::qubit3({{{0, 0, 0}, 1.0}})});

  // A qubit and two bosonic qubits, occupation coordinates.
  out.push_back({"boson2q", "GHZ", CN::GHZ, 4, {}, detail::boson2q({{{0, 0}, r2}, {{1, 2}, r2}})});
  out.push_back({"boson2q", "W", CN::W, 3, {}, detail::boson2q({{{1, 0}, r3}, {{0, 1}, r3}})});
  out.push_back({"boson2q", "B1", CN::biseparable, 2, {"A|B"}, detail::boson2q({{{0, 0}, r2}, {{0, 2}, r2}})});
  out.push_back({"boson2q", "S", CN::separable, 1, {}, detail::boson2q({{{0, 0}, 1.0}})});

  // Three bosonic qubits.
  out.push_back({"boson3", "GHZ", CN::GHZ, 4, {}, embed::Boson3State{{r2, 0.0, 0.0, r2}}});
  out.push_back({"boson3", "W", CN::W, 3, {}, embed::Boson3State{{0.0, r3, 0.0, 0.0}}});
  out.push_back({"boson3", "S", CN::separable, 1, {}, embed::Boson3State{{1.0, 0.0, 0.0, 0.0}}});
  return out;
}

/// e1 (x) e3 (x) (e5 (x) e7 + e6 (x) e8) / sqrt 2 as four qubits (levels 0-based).
inline embed::MultiState four_qubit_P() {
  embed::MultiState m(embed::SystemShape::qudits(4, 2));
  m.set_levels(std::array{0, 0, 0, 0}, detail::r2);
  m.set_levels(std::array{0, 0, 1, 1}, detail::r2);
  return m;
}

/// (e1 (x) e3 + e2 (x) e4) (x) e5 (x) e7 / sqrt 2.
inline embed::MultiState four_qubit_Q() {
  embed::MultiState m(embed::SystemShape::qudits(4, 2));
  m.set_levels(std::array{0, 0, 0, 0}, detail::r2);
  m.set_levels(std::array{1, 1, 0, 0}, detail::r2);
  return m;
}

/// X (x) I (x) I on the eight modes: swaps mode m with m + 4.
inline Eigen::MatrixXcd x_on_first_factor() {
  Eigen::MatrixXcd x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  const Eigen::MatrixXcd id4 = Eigen::MatrixXcd::Identity(4, 4);
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(8, 8);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) g.block(4 * i, 4 * j, 4, 4) = x(i, j) * id4;
  return g;
}

/// N-qudit GHZ-type state sum_i e_i (x) ... (x) e_i / sqrt d.
inline embed::MultiState qudit_ghz(int parties, int d) {
  embed::MultiState m(embed::SystemShape::qudits(parties, d));
  std::vector<int> lv(static_cast<std::size_t>(parties));
  for (int i = 0; i < d; ++i) {
    std::fill(lv.begin(), lv.end(), i);
    m.set_levels(lv, 1.0 / std::sqrt(static_cast<double>(d)));
  }
  return m;
}

/// N-qudit W-type state: one party in level 1, the rest in level 0.
inline embed::MultiState qudit_w(int parties, int d) {
  embed::MultiState m(embed::SystemShape::qudits(parties, d));
  std::vector<int> lv(static_cast<std::size_t>(parties), 0);
  for (int j = 0; j < parties; ++j) {
    lv[static_cast<std::size_t>(j)] = 1;
    m.set_levels(lv, 1.0 / std::sqrt(static_cast<double>(parties)));
    lv[static_cast<std::size_t>(j)] = 0;
  }
  return m;
}

}  // namespace entangle::reps
