#pragma once

// Command-line front end. `run` is the whole program minus process plumbing,
// so tests can drive it with in-memory streams.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entangle/entangle.hpp"

namespace entangle::cli {

enum ExitCode : int { ok = 0, usage = 1, parse_error = 2, shape_error = 3, degenerate = 4 };

using io::json;

struct Options {
  double tol = default_tolerance;
  bool tol_given = false;
  bool as_json = false;
  bool strict = false;
  bool list_violations = false;
  std::string file;
  std::string batch_dir;
  std::string matrix_file;
  std::string system;
  std::string shape;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Output of one command: stdout text, stderr text, exit code. Nothing reaches
/// stdout unless the command succeeds.
struct Outcome {
  std::string out;
  std::string err;
  int code = ok;
};

namespace detail {

inline std::string fixed(double v, int digits = 6) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

inline std::string sci(double v) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(3) << v;
  return s.str();
}

inline std::string cplx_str(cplx z) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(6) << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return s.str();
}

inline std::string one_based(fermion::ModeSet s) {
  std::string out = "{";
  bool first = true;
  for (int m : s.indices()) {
    out += (first ? "" : ",") + std::to_string(m + 1);
    first = false;
  }
  return out + "}";
}

inline json matrix_json(const Eigen::MatrixXcd& m) { return io::matrix_to_json(m); }

inline void print_matrix(std::ostream& os, const Eigen::MatrixXcd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << "  ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? "  " : "") << cplx_str(m(i, j));
    os << "\n";
  }
}

/// Decisive quantities that sit within three decades of the threshold.
inline std::vector<std::string> degeneracy_warnings(const classify::AnyState& s, double tol) {
  std::vector<std::string> w;
  auto near = [&](double v) { return v > tol * 1e-3 && v <= tol * 1e3; };
  if (const auto x = classify::freudenthal_vector(s)) {
    const auto rep = freudenthal::rank_report(*x, tol);
    if (near(rep.quartic)) w.push_back("quartic value " + sci(rep.quartic) + " is near the tolerance");
    if (near(rep.cubic)) w.push_back("cubic value " + sci(rep.cubic) + " is near the tolerance");
    if (near(rep.quadratic)) w.push_back("quadratic value " + sci(rep.quadratic) + " is near the tolerance");
  } else {
    const auto p = classify::fermionic_image(s);
    const double nn = p.norm();
    const double v = fermion::pluecker_scan(p).max_violation / (nn * nn);
    if (near(v)) w.push_back("Pluecker violation " + sci(v) + " is near the tolerance");
  }
  return w;
}

inline embed::MultiState party_state(const classify::AnyState& s) {
  using namespace classify;
  switch (kind_of(s)) {
    case SystemKind::fermion: {
      const auto& p = std::get<fermion::State>(s);
      embed::MultiState m(embed::SystemShape({{p.k(), p.n()}}));
      for (const auto& [key, v] : p.terms()) m.set({key}, v);
      return m;
    }
    case SystemKind::multi: return std::get<embed::MultiState>(s);
    case SystemKind::qubit3: return embed::to_multi(std::get<embed::Qubit3State>(s));
    case SystemKind::boson2q: return embed::to_multi(embed::to_qubit3(std::get<embed::Boson2QState>(s)));
    case SystemKind::boson3: return embed::to_multi(embed::to_qubit3(std::get<embed::Boson3State>(s)));
    case SystemKind::qubit_fermion4: return embed::to_multi(std::get<embed::QubitFermion4State>(s));
  }
  throw ShapeError("unknown system");
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io::ParseError("cannot open " + path, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// "k/n" per species, comma separated: "3/6" or "1/2,1/2,2/4".
inline embed::SystemShape parse_shape(const std::string& text) {
  std::vector<embed::Species> sp;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto slash = item.find('/');
    if (slash == std::string::npos) throw ShapeError("shape entries are written k/n");
    try {
      sp.push_back({std::stoi(item.substr(0, slash)), std::stoi(item.substr(slash + 1))});
    } catch (const std::logic_error&) {
      throw ShapeError("shape entries are written k/n");
    }
  }
  return embed::SystemShape(sp);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Commands. Each takes a parsed state and writes into an Outcome.

inline void cmd_invariant(const io::StateFile& f, const Options& o, Outcome& r) {
  std::ostringstream os;
  const auto& s = f.state;
  const auto x = classify::freudenthal_vector(s);
  const auto xi = classify::xi_if_defined(s);
  if (!x && !xi) throw ShapeError("no quartic invariant or xi defined for this shape");
  json j;
  j["system"] = classify::name(classify::kind_of(s));
  if (x) {
    const double direct = classify::invariant_for(s);
    const double embedded = classify::embedding_invariant(s);
    const auto rank = freudenthal::rank(*x, o.tol);
    j["tangle"] = direct;
    j["tangle_embedded"] = embedded;
    j["difference"] = std::abs(direct - embedded);
    j["rank"] = freudenthal::to_int(rank);
    os << "system: " << classify::name(classify::kind_of(s)) << "\n"
       << "|T| = " << detail::fixed(direct) << "\n"
       << "|T| via embedding = " << detail::fixed(embedded) << "\n"
       << "difference = " << detail::sci(std::abs(direct - embedded)) << "\n"
       << "rank " << freudenthal::to_int(rank) << "\n";
  } else {
    os << "system: " << classify::name(classify::kind_of(s)) << "\n";
  }
  if (xi) {
    j["xi"] = *xi;
    os << "xi = " << detail::fixed(*xi) << "\n";
  }
  r.out = o.as_json ? j.dump(2) + "\n" : os.str();
}

inline void cmd_classify(const io::StateFile& f, const Options& o, Outcome& r) {
  const auto label = classify::classify_state(f.state, o.tol);
  if (o.as_json) {
    json j = io::label_to_json(label);
    j["system"] = classify::name(classify::kind_of(f.state));
    r.out = j.dump(2) + "\n";
    return;
  }
  std::ostringstream os;
  os << "system: " << classify::name(classify::kind_of(f.state)) << "\n"
     << "class: " << classify::name(label.name) << "\n";
  if (label.rank) os << "rank: " << freudenthal::to_int(*label.rank) << "\n";
  if (!label.cut_pattern.empty()) {
    os << "cuts:";
    for (const auto& c : label.cut_pattern) os << " " << c.to_string();
    os << "\n";
  }
  if (label.invariants.tangle) os << "|T| = " << detail::fixed(*label.invariants.tangle) << "\n";
  if (label.invariants.xi) os << "xi = " << detail::fixed(*label.invariants.xi) << "\n";
  r.out = os.str();
}

inline void cmd_pluecker(const io::StateFile& f, const Options& o, Outcome& r) {
  const auto p = classify::fermionic_image(f.state);
  if (p.is_zero()) throw NumericalError("decomposability of the zero state is undefined");
  const auto scan = fermion::pluecker_scan(p, o.threads);
  const double nn2 = p.norm() * p.norm();
  const bool decomposable = scan.max_violation <= o.tol * nn2;
  json j;
  j["k"] = p.k();
  j["n"] = p.n();
  j["max_violation"] = scan.max_violation;
  j["decomposable"] = decomposable;
  std::ostringstream os;
  os << "fermionic image: k=" << p.k() << " n=" << p.n() << "\n"
     << "max |Pi_{A,B}| = " << detail::sci(scan.max_violation) << "\n";
  if (scan.max_violation > 0.0) {
    os << "at A=" << detail::one_based(scan.arg_a) << " B=" << detail::one_based(scan.arg_b) << "\n";
    j["argmax"] = {{"A", io::detail::one_based(scan.arg_a)}, {"B", io::detail::one_based(scan.arg_b)}};
  }
  os << (decomposable ? "decomposable (separable)" : "not decomposable (entangled)") << "\n";
  if (o.list_violations) {
    json list = json::array();
    const fermion::detail::DenseLookup lookup(p);
    for (auto a : fermion::combinations(p.n(), p.k() - 1))
      for (auto b : fermion::combinations(p.n(), p.k() + 1)) {
        const cplx v = fermion::detail::pluecker_sorted(lookup, a, b);
        if (std::abs(v) <= o.tol * nn2) continue;
        os << "  A=" << detail::one_based(a) << " B=" << detail::one_based(b) << " Pi=" << detail::cplx_str(v) << "\n";
        list.push_back({{"A", io::detail::one_based(a)}, {"B", io::detail::one_based(b)}, {"re", v.real()}, {"im", v.imag()}});
      }
    j["violations"] = std::move(list);
  }
  r.out = o.as_json ? j.dump(2) + "\n" : os.str();
}

inline void cmd_rdm(const io::StateFile& f, const Options& o, Outcome& r) {
  const auto m = detail::party_state(f.state);
  const auto blocks = embed::embedded_rdm_blocks(m);
  const double defect = fermion::gamma_idempotency_defect(embed::phi(m));
  json j;
  j["rho"] = detail::matrix_json(blocks.global.rho);
  j["gamma_defect"] = defect;
  std::ostringstream os;
  os << "rho (one-particle, trace 1):\n";
  detail::print_matrix(os, blocks.global.rho);
  os << "|gamma^2 - gamma| = " << detail::sci(defect) << "\n";
  if (m.shape().species_count() > 1) {
    json sp = json::array();
    for (std::size_t i = 0; i < blocks.species.size(); ++i) {
      os << "rho_" << (i + 1) << " (weight " << detail::fixed(blocks.weights[i], 4) << "):\n";
      detail::print_matrix(os, blocks.species[i]);
      sp.push_back({{"weight", blocks.weights[i]}, {"rho", detail::matrix_json(blocks.species[i])}});
    }
    os << "block identity residual = " << detail::sci(blocks.residual()) << "\n";
    j["species"] = std::move(sp);
    j["block_residual"] = blocks.residual();
  }
  r.out = o.as_json ? j.dump(2) + "\n" : os.str();
}

inline void cmd_act(const io::StateFile& f, const Options& o, Outcome& r) {
  if (o.matrix_file.empty()) throw std::invalid_argument("act needs --matrix-file");
  const classify::GroupElement g(io::parse_matrices(detail::read_text(o.matrix_file)));
  r.out = io::dump_state(classify::slocc_act(f.state, g), f.norm_check);
}

inline void cmd_random(const Options& o, Outcome& r) {
  const auto kind = classify::parse_system(o.system);
  if (!kind) throw std::invalid_argument("unknown --system '" + o.system + "'");
  classify::SystemSpec spec;
  if (*kind == classify::SystemKind::fermion || *kind == classify::SystemKind::multi) {
    if (o.shape.empty()) throw std::invalid_argument("--shape is required for fermion and multi systems");
    const auto shape = detail::parse_shape(o.shape);
    if (*kind == classify::SystemKind::fermion) {
      if (shape.species_count() != 1) throw ShapeError("fermion shape is a single k/n");
      spec = classify::SystemSpec::fermion(shape.species(0).k, shape.species(0).n);
    } else {
      spec = classify::SystemSpec::multi(shape);
    }
  } else {
    spec = classify::SystemSpec::of(*kind);
  }
  r.out = io::dump_state(classify::random_state(spec, o.seed), true);
}

/// Fixed-seed end-to-end checks. One PASS/FAIL line each.
inline void cmd_selftest(const Options& o, Outcome& r) {
  std::ostringstream os;
  bool all = true;
  auto report = [&](bool pass, const std::string& what) {
    os << (pass ? "PASS " : "FAIL ") << what << "\n";
    all = all && pass;
  };

  int matched = 0;
  const auto table = reps::table_representatives();
  for (const auto& rep : table) {
    const auto l = classify::classify_state(rep.state, o.tol);
    std::vector<std::string> cuts;
    for (const auto& c : l.cut_pattern) cuts.push_back(c.to_string());
    bool good = l.name == rep.expected && l.rank && freudenthal::to_int(*l.rank) == rep.rank && cuts == rep.cuts;
    if (rep.row == "GHZ") good = good && std::abs(*l.invariants.tangle - 1.0) <= 1e-9;
    if (rep.row == "W") good = good && *l.invariants.tangle <= 1e-9;
    matched += good ? 1 : 0;
  }
  report(matched == static_cast<int>(table.size()),
         "representative table: " + std::to_string(matched) + "/" + std::to_string(table.size()) + " classified");

  double worst = 0.0;
  for (auto kind : {classify::SystemKind::qubit3, classify::SystemKind::boson2q, classify::SystemKind::boson3,
                    classify::SystemKind::qubit_fermion4})
    for (std::uint64_t i = 0; i < 50; ++i) {
      const auto s = classify::random_state(classify::SystemSpec::of(kind), classify::derive_seed(7, i));
      const double a = classify::invariant_for(s), b = classify::embedding_invariant(s);
      worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::max(a, b)));
    }
  report(worst <= 1e-9, "invariant identities, worst relative gap " + detail::sci(worst));

  const auto moved = fermion::apply_compound(embed::phi(reps::four_qubit_P()), reps::x_on_first_factor());
  const auto lp = classify::classify_state(reps::four_qubit_P(), o.tol);
  const auto lq = classify::classify_state(reps::four_qubit_Q(), o.tol);
  report(fermion::approx_equal(moved, embed::phi(reps::four_qubit_Q()), 1e-12) && !(lp.cut_pattern == lq.cut_pattern),
         "four-qubit split: images equivalent, cut patterns differ");

  const double xi2 = fermion::xi_invariant(embed::phi_tilde(reps::qudit_ghz(2, 2)));
  const double xi3 = fermion::xi_invariant(embed::phi_tilde(reps::qudit_ghz(2, 3)));
  const double xiw4 = fermion::xi_invariant(embed::phi_tilde(reps::qudit_w(4, 2)));
  const double xiw6 = fermion::xi_invariant(embed::phi_tilde(reps::qudit_w(6, 2)));
  report(std::abs(xi2 - 1.0) <= 1e-9 && std::abs(xi3 - 6.0 / std::pow(3.0, 1.5)) <= 1e-9 && xiw4 <= 1e-12 &&
             xiw6 <= 1e-12,
         "xi: GHZ d=2 " + detail::fixed(xi2) + ", d=3 " + detail::fixed(xi3) + ", W-type " + detail::sci(std::max(xiw4, xiw6)));

  double residual = 0.0;
  const std::vector<embed::SystemShape> shapes{embed::SystemShape::qudits(3, 2), embed::SystemShape({{1, 2}, {2, 4}}),
                                               embed::SystemShape({{2, 3}, {1, 3}}), embed::SystemShape({{1, 3}, {2, 4}, {1, 2}})};
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const auto s = classify::random_state(classify::SystemSpec::multi(shapes[i]), classify::derive_seed(11, i));
    residual = std::max(residual, embed::embedded_rdm_blocks(std::get<embed::MultiState>(s)).residual());
  }
  report(residual <= 1e-9, "RDM block identity, worst residual " + detail::sci(residual));

  os << (all ? "selftest passed" : "selftest FAILED") << "\n";
  r.out = os.str();
  r.code = all ? ok : degenerate;
  if (!all) {
    r.err = os.str();
    r.out.clear();
  }
}

// ---------------------------------------------------------------------------

/// Runs a file-based command with error mapping; never throws.
template <class Command>
Outcome run_on_file(const std::string& path, const Options& o, Command cmd) {
  Outcome r;
  try {
    const auto f = io::parse_state(detail::read_text(path));
    std::vector<std::string> warnings = f.warnings;
    const auto extra = detail::degeneracy_warnings(f.state, o.tol);
    warnings.insert(warnings.end(), extra.begin(), extra.end());
    if (o.strict && !warnings.empty()) {
      for (const auto& w : warnings) r.err += path + ": " + w + "\n";
      r.code = degenerate;
      return r;
    }
    for (const auto& w : warnings) r.err += "warning: " + w + "\n";
    cmd(f, o, r);
  } catch (const io::ParseError& e) {
    r = {"", path + ": parse error: " + e.what() + "\n", parse_error};
  } catch (const io::json::exception& e) {
    r = {"", path + ": parse error: " + e.what() + "\n", parse_error};
  } catch (const ShapeError& e) {
    r = {"", path + ": shape error: " + e.what() + "\n", shape_error};
  } catch (const NumericalError& e) {
    r = {"", path + ": numerical error: " + e.what() + "\n", degenerate};
  } catch (const NonFiniteValue& e) {
    r = {"", path + ": parse error: " + e.what() + "\n", parse_error};
  } catch (const std::invalid_argument& e) {
    r = {"", std::string("error: ") + e.what() + "\n", usage};
  }
  return r;
}

/// Every *.json file of `dir`, processed concurrently, reported in name order.
template <class Command>
Outcome run_batch(const std::string& dir, const Options& o, Command cmd) {
  std::vector<std::string> files;
  std::error_code ec;
  for (const auto& e : std::filesystem::directory_iterator(dir, ec))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path().string());
  if (ec) return {"", "error: cannot read directory " + dir + "\n", usage};
  std::sort(files.begin(), files.end());
  std::vector<std::future<Outcome>> jobs;
  for (const auto& f : files) jobs.push_back(std::async(std::launch::async, [&, f] { return run_on_file(f, o, cmd); }));
  Outcome all;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const Outcome r = jobs[i].get();
    all.out += "== " + files[i] + "\n" + r.out;
    all.err += r.err;
    all.code = std::max(all.code, r.code);
  }
  return all;
}

inline double tolerance_from_env(double fallback) {
  if (const char* env = std::getenv("ENTANGLE_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v > 0.0 && std::isfinite(v)) return v;
  }
  return fallback;
}

/// args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement classification via fermionic embeddings", "entangle"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool file_based) {
    sub->add_option("--tol", o.tol, "vanishing threshold (default 1e-8, or ENTANGLE_TOL)")->check(CLI::PositiveNumber);
    sub->add_flag("--json", o.as_json, "machine-readable output");
    sub->add_flag("--strict", o.strict, "exit 4 on numerical-degeneracy warnings");
    if (file_based) {
      sub->add_option("file", o.file, "state file (JSON)");
      sub->add_option("--batch", o.batch_dir, "process every .json file in a directory");
    }
  };

  auto* inv = app.add_subcommand("invariant", "quartic invariant |T| and xi");
  add_common(inv, true);
  auto* cls = app.add_subcommand("classify", "SLOCC class label");
  add_common(cls, true);
  auto* plu = app.add_subcommand("pluecker", "Pluecker relations of the fermionic image");
  add_common(plu, true);
  plu->add_flag("--list-violations", o.list_violations, "list every violated relation");
  plu->add_option("--threads", o.threads, "worker threads for the relation scan")->check(CLI::Range(1u, 256u));
  auto* rdm = app.add_subcommand("rdm", "one-particle reduced density matrices");
  add_common(rdm, true);
  auto* act = app.add_subcommand("act", "apply a group element, print the new state");
  add_common(act, true);
  act->add_option("--matrix-file", o.matrix_file, "JSON list of matrices, one per local factor")->required();
  auto* rnd = app.add_subcommand("random", "random normalized state");
  add_common(rnd, false);
  rnd->add_option("--system", o.system, "fermion|multi|qubit3|boson2q|boson3|qubit_fermion4")->required();
  rnd->add_option("--shape", o.shape, "k/n per species, comma separated");
  rnd->add_option("--seed", o.seed, "random seed");
  auto* self = app.add_subcommand("selftest", "fixed-seed end-to-end checks");
  add_common(self, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return usage;
  }
  for (const auto* sub : app.get_subcommands())
    if (sub->get_option("--tol")->count() > 0) o.tol_given = true;
  if (!o.tol_given) o.tol = tolerance_from_env(o.tol);

  Outcome r;
  auto file_command = [&](auto cmd) {
    if (!o.batch_dir.empty()) return run_batch(o.batch_dir, o, cmd);
    if (o.file.empty()) return Outcome{"", "usage error: a state file or --batch is required\n", usage};
    return run_on_file(o.file, o, cmd);
  };
  auto plain = [&](auto cmd) {
    Outcome res;
    try {
      cmd(o, res);
    } catch (const ShapeError& e) {
      res = {"", std::string("shape error: ") + e.what() + "\n", shape_error};
    } catch (const std::invalid_argument& e) {
      res = {"", std::string("error: ") + e.what() + "\n", usage};
    } catch (const NumericalError& e) {
      res = {"", std::string("numerical error: ") + e.what() + "\n", degenerate};
    }
    return res;
  };

  if (inv->parsed()) r = file_command(cmd_invariant);
  else if (cls->parsed()) r = file_command(cmd_classify);
  else if (plu->parsed()) r = file_command(cmd_pluecker);
  else if (rdm->parsed()) r = file_command(cmd_rdm);
  else if (act->parsed()) r = file_command(cmd_act);
  else if (rnd->parsed()) r = plain(cmd_random);
  else if (self->parsed()) r = plain(cmd_selftest);

  if (r.code == degenerate && o.strict) r.out.clear();
  out << r.out;
  err << r.err;
  return r.code;
}

}  // namespace entangle::cli
