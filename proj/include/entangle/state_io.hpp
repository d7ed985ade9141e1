#pragma once

// JSON state files, group-element matrix files and label records.
//
// State file:
//   {"system": "qubit3" | "boson2q" | "boson3" | "qubit_fermion4" | "fermion" | "multi",
//    "shape": {"k": 3, "n": 6} | {"species": [{"k": 1, "n": 2}, ...]} | {},
//    "norm_check": true,
//    "amplitudes": [{"key": [...], "re": 0.7, "im": 0.0}, ...]}
// Fermion and multi keys use 1-based modes; the other systems use 0-based levels.

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "entangle/classify.hpp"

namespace entangle::io {

using json = nlohmann::json;
using classify::AnyState;
using classify::SystemKind;

/// Malformed input; `line` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct StateFile {
  AnyState state;
  bool norm_check = false;
  std::vector<std::string> warnings;
};

namespace detail {

inline int line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

/// Line of the idx-th "key" member in the raw text.
inline int line_of_key(std::string_view text, std::size_t idx) {
  std::size_t pos = 0;
  for (std::size_t seen = 0;; ++seen) {
    pos = text.find("\"key\"", pos);
    if (pos == std::string_view::npos) return 0;
    if (seen == idx) return line_of_offset(text, pos);
    pos += 5;
  }
}

inline int parse_mode(const json& j, int n) {
  int m = 0;
  if (j.is_number_integer()) {
    m = j.get<int>();
  } else if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s.size() == 2 && s[1] == 'b' && s[0] >= '1' && s[0] <= '3')
      m = (s[0] - '0') + 3;
    else
      throw ParseError("mode label '" + s + "' is not an integer or 1b/2b/3b", 0);
  } else {
    throw ParseError("mode labels must be integers", 0);
  }
  if (m < 1 || m > n) throw ShapeError("mode " + std::to_string(m) + " outside 1.." + std::to_string(n));
  return m - 1;
}

inline int parse_level(const json& j, int levels) {
  if (!j.is_number_integer()) throw ParseError("levels must be integers", 0);
  const int v = j.get<int>();
  if (v < 0 || v >= levels) throw ShapeError("level " + std::to_string(v) + " outside 0.." + std::to_string(levels - 1));
  return v;
}

inline const json& require_array(const json& j, std::size_t size) {
  if (!j.is_array()) throw ParseError("key must be a list", 0);
  if (j.size() != size)
    throw ShapeError("key must be a list of " + std::to_string(size) + " entries");
  return j;
}

/// Fermion key: 1-based modes in any order; returns the sorted set and the sign.
inline std::pair<fermion::ModeSet, int> fermion_key(const json& j, int k, int n) {
  if (!j.is_array()) throw ParseError("key must be a list", 0);
  if (static_cast<int>(j.size()) != k)
    throw ShapeError("key must list " + std::to_string(k) + " modes");
  std::vector<int> modes;
  for (const auto& e : j) modes.push_back(parse_mode(e, n));
  const int sign = fermion::sort_sign(modes);
  if (sign == 0) throw ShapeError("key repeats a mode");
  return {fermion::ModeSet::of(modes), sign};
}

inline embed::SystemShape parse_species(const json& shape) {
  if (!shape.is_object() || !shape.contains("species") || !shape["species"].is_array())
    throw ShapeError("multi shape needs a \"species\" list");
  std::vector<embed::Species> sp;
  for (const auto& s : shape["species"]) {
    if (!s.is_object() || !s.contains("k") || !s.contains("n") || !s["k"].is_number_integer() ||
        !s["n"].is_number_integer())
      throw ShapeError("each species needs integer k and n");
    sp.push_back({s["k"].get<int>(), s["n"].get<int>()});
  }
  return embed::SystemShape(sp);
}

inline double number(const json& j, const char* field) {
  if (!j.contains(field)) return 0.0;
  if (!j[field].is_number()) throw ParseError(std::string("\"") + field + "\" must be a number", 0);
  return j[field].get<double>();
}

}  // namespace detail

/// Parses a state file. Malformed input (syntax, value types, duplicate keys)
/// raises ParseError with a line number; well-formed keys that do not fit the
/// declared shape raise ShapeError.
inline StateFile parse_state(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), detail::line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  if (!doc.is_object()) throw ParseError("state file must be a JSON object", 1);
  if (!doc.contains("system") || !doc["system"].is_string()) throw ParseError("missing \"system\"", 1);
  const auto system = classify::parse_system(doc["system"].get<std::string>());
  if (!system) throw ParseError("unknown system '" + doc["system"].get<std::string>() + "'", 1);
  if (!doc.contains("amplitudes") || !doc["amplitudes"].is_array()) throw ParseError("missing \"amplitudes\" list", 1);
  const json shape = doc.value("shape", json::object());

  StateFile out{AnyState{embed::Qubit3State{}}, doc.value("norm_check", false), {}};
  std::set<std::string> seen;

  // Each entry yields a canonical key string (duplicate detection) and a setter.
  auto for_entries = [&](auto&& handle) {
    std::size_t idx = 0;
    for (const auto& entry : doc["amplitudes"]) {
      const int line = detail::line_of_key(text, idx);
      try {
        if (!entry.is_object() || !entry.contains("key")) throw ParseError("amplitude entry needs a \"key\"", line);
        const cplx v(detail::number(entry, "re"), detail::number(entry, "im"));
        checked(v, "amplitude");
        const std::string canon = handle(entry["key"], v);
        if (!seen.insert(canon).second) throw ParseError("duplicate key " + entry["key"].dump(), line);
      } catch (const ParseError& e) {
        if (e.line() > 0) throw;
        throw ParseError(e.what(), line);
      } catch (const ShapeError& e) {
        throw ShapeError((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + e.what());
      } catch (const NonFiniteValue& e) {
        throw ParseError(e.what(), line);
      }
      ++idx;
    }
  };

  switch (*system) {
    case SystemKind::fermion: {
      if (!shape.contains("k") || !shape.contains("n") || !shape["k"].is_number_integer() ||
          !shape["n"].is_number_integer())
        throw ShapeError("fermion shape needs integer k and n");
      fermion::State p(shape["k"].get<int>(), shape["n"].get<int>());
      for_entries([&](const json& key, cplx v) {
        const auto [set, sign] = detail::fermion_key(key, p.k(), p.n());
        p.add(set, static_cast<double>(sign) * v);
        return std::to_string(set.bits());
      });
      out.state = std::move(p);
      break;
    }
    case SystemKind::multi: {
      embed::MultiState m(detail::parse_species(shape));
      const auto& sh = m.shape();
      for_entries([&](const json& key, cplx v) {
        detail::require_array(key, sh.species_count());
        embed::LocalKey lk;
        double sign = 1.0;
        std::string canon;
        for (std::size_t i = 0; i < sh.species_count(); ++i) {
          const json local = key[i].is_array() ? key[i] : json::array({key[i]});
          const auto [set, s] = detail::fermion_key(local, sh.species(i).k, sh.species(i).n);
          lk.push_back(set);
          sign *= s;
          canon += std::to_string(set.bits()) + ",";
        }
        m.add(lk, sign * v);
        return canon;
      });
      out.state = std::move(m);
      break;
    }
    case SystemKind::qubit3: {
      embed::Qubit3State q;
      for_entries([&](const json& key, cplx v) {
        detail::require_array(key, 3);
        const int i = detail::parse_level(key[0], 2), j = detail::parse_level(key[1], 2), k = detail::parse_level(key[2], 2);
        q(i, j, k) = v;
        return std::to_string(4 * i + 2 * j + k);
      });
      out.state = q;
      break;
    }
    case SystemKind::boson2q: {
      embed::Boson2QState b;
      for_entries([&](const json& key, cplx v) {
        detail::require_array(key, 2);
        const int i = detail::parse_level(key[0], 2), j = detail::parse_level(key[1], 3);
        b.b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
        return std::to_string(3 * i + j);
      });
      out.state = b;
      break;
    }
    case SystemKind::boson3: {
      embed::Boson3State c;
      for_entries([&](const json& key, cplx v) {
        detail::require_array(key, 1);
        const int j = detail::parse_level(key[0], 4);
        c.c[static_cast<std::size_t>(j)] = v;
        return std::to_string(j);
      });
      out.state = c;
      break;
    }
    case SystemKind::qubit_fermion4: {
      embed::QubitFermion4State d;
      for_entries([&](const json& key, cplx v) {
        detail::require_array(key, 3);
        const int i = detail::parse_level(key[0], 2), j = detail::parse_level(key[1], 4), k = detail::parse_level(key[2], 4);
        if (j == k) throw ShapeError("fermion modes of a key must differ");
        d.set(i, j, k, v);
        return std::to_string(i) + ":" + std::to_string(embed::QubitFermion4State::pair_index(j, k));
      });
      out.state = d;
      break;
    }
  }

  if (out.norm_check) {
    const double nn = classify::state_norm(out.state);
    if (std::abs(nn - 1.0) > 1e-6) {
      std::ostringstream w;
      w << "state norm is " << nn << ", not 1";
      out.warnings.push_back(w.str());
    }
  }
  return out;
}

inline StateFile read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_state(ss.str());
}

namespace detail {
inline json amp(json key, cplx v) { return {{"key", std::move(key)}, {"re", v.real()}, {"im", v.imag()}}; }

inline json one_based(fermion::ModeSet s) {
  json out = json::array();
  for (int m : s.indices()) out.push_back(m + 1);
  return out;
}
}  // namespace detail

inline json state_to_json(const AnyState& s, bool norm_check = false) {
  json doc;
  doc["system"] = classify::name(classify::kind_of(s));
  json amps = json::array();
  switch (classify::kind_of(s)) {
    case SystemKind::fermion: {
      const auto& p = std::get<fermion::State>(s);
      doc["shape"] = {{"k", p.k()}, {"n", p.n()}};
      for (const auto& [key, v] : p.terms()) amps.push_back(detail::amp(detail::one_based(key), v));
      break;
    }
    case SystemKind::multi: {
      const auto& m = std::get<embed::MultiState>(s);
      json species = json::array();
      for (const auto& sp : m.shape().all()) species.push_back({{"k", sp.k}, {"n", sp.n}});
      doc["shape"] = {{"species", species}};
      for (const auto& [key, v] : m.terms()) {
        json k = json::array();
        for (auto local : key) k.push_back(detail::one_based(local));
        amps.push_back(detail::amp(k, v));
      }
      break;
    }
    case SystemKind::qubit3: {
      const auto& q = std::get<embed::Qubit3State>(s);
      doc["shape"] = json::object();
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k)
            if (q(i, j, k) != cplx(0.0)) amps.push_back(detail::amp({i, j, k}, q(i, j, k)));
      break;
    }
    case SystemKind::boson2q: {
      const auto& b = std::get<embed::Boson2QState>(s);
      doc["shape"] = json::object();
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) {
          const cplx v = b.b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
          if (v != cplx(0.0)) amps.push_back(detail::amp({i, j}, v));
        }
      break;
    }
    case SystemKind::boson3: {
      const auto& c = std::get<embed::Boson3State>(s);
      doc["shape"] = json::object();
      for (int j = 0; j < 4; ++j)
        if (c.c[static_cast<std::size_t>(j)] != cplx(0.0)) amps.push_back(detail::amp({j}, c.c[static_cast<std::size_t>(j)]));
      break;
    }
    case SystemKind::qubit_fermion4: {
      const auto& d = std::get<embed::QubitFermion4State>(s);
      doc["shape"] = json::object();
      for (int i = 0; i < 2; ++i)
        for (std::size_t p = 0; p < 6; ++p) {
          const cplx v = d.d[static_cast<std::size_t>(i)][p];
          const auto& jk = embed::QubitFermion4State::pairs[p];
          if (v != cplx(0.0)) amps.push_back(detail::amp({i, jk[0], jk[1]}, v));
        }
      break;
    }
  }
  doc["norm_check"] = norm_check;
  doc["amplitudes"] = std::move(amps);
  return doc;
}

/// Writes one amplitude per line so files stay diffable.
inline std::string dump_state(const AnyState& s, bool norm_check = false) {
  const json doc = state_to_json(s, norm_check);
  std::ostringstream out;
  out << "{\n  \"system\": " << doc["system"].dump() << ",\n  \"shape\": " << doc["shape"].dump()
      << ",\n  \"norm_check\": " << doc["norm_check"].dump() << ",\n  \"amplitudes\": [";
  const auto& amps = doc["amplitudes"];
  for (std::size_t i = 0; i < amps.size(); ++i) {
    nlohmann::ordered_json a;
    a["key"] = amps[i]["key"];
    a["re"] = amps[i]["re"];
    a["im"] = amps[i]["im"];
    out << (i ? ",\n    " : "\n    ") << a.dump();
  }
  out << (amps.empty() ? "]\n}\n" : "\n  ]\n}\n");
  return out.str();
}

// ---------------------------------------------------------------------------
// Matrix files: {"blocks": [M1, M2, ...]} or a bare list, each M a list of rows
// of [re, im] pairs.

inline Eigen::MatrixXcd parse_matrix(const json& m) {
  if (!m.is_array() || m.empty()) throw ShapeError("matrix must be a non-empty list of rows");
  const auto rows = static_cast<Eigen::Index>(m.size());
  const auto cols = static_cast<Eigen::Index>(m[0].size());
  Eigen::MatrixXcd out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = m[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw ShapeError("ragged matrix rows");
    for (Eigen::Index j = 0; j < cols; ++j) {
      const auto& z = row[static_cast<std::size_t>(j)];
      if (z.is_number())
        out(i, j) = z.get<double>();
      else if (z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number())
        out(i, j) = cplx(z[0].get<double>(), z[1].get<double>());
      else
        throw ShapeError("matrix entries must be numbers or [re, im] pairs");
    }
  }
  return out;
}

inline std::vector<Eigen::MatrixXcd> parse_matrices(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), detail::line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  const json& blocks = doc.is_object() ? doc.value("blocks", json()) : doc;
  if (!blocks.is_array()) throw ParseError("matrix file needs a \"blocks\" list", 1);
  std::vector<Eigen::MatrixXcd> out;
  for (const auto& m : blocks) out.push_back(parse_matrix(m));
  return out;
}

inline json matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Matrix file text with one row per line.
inline std::string dump_matrices(const std::vector<Eigen::MatrixXcd>& blocks) {
  std::ostringstream out;
  out << "{\n  \"blocks\": [";
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const json rows = matrix_to_json(blocks[b]);
    out << (b ? ",\n    [" : "\n    [");
    for (std::size_t i = 0; i < rows.size(); ++i) out << (i ? ",\n      " : "\n      ") << rows[i].dump();
    out << "\n    ]";
  }
  out << (blocks.empty() ? "]\n}\n" : "\n  ]\n}\n");
  return out.str();
}

// ---------------------------------------------------------------------------

inline json label_to_json(const classify::ClassLabel& l) {
  json j;
  j["rank"] = l.rank ? json(freudenthal::to_int(*l.rank)) : json(nullptr);
  j["name"] = classify::name(l.name);
  json cuts = json::array();
  for (const auto& c : l.cut_pattern) cuts.push_back(c.to_string());
  j["cut_pattern"] = std::move(cuts);
  json inv = json::object();
  if (l.invariants.tangle) inv["tangle"] = *l.invariants.tangle;
  if (l.invariants.tangle_embedded) inv["tangle_embedded"] = *l.invariants.tangle_embedded;
  if (l.invariants.xi) inv["xi"] = *l.invariants.xi;
  j["invariants"] = std::move(inv);
  return j;
}

}  // namespace entangle::io
