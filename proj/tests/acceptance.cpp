// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Tolerances below are fixed; do not tune them to make a run pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "oracles.hpp"

using namespace entangle;
using namespace entangle::classify;
using embed::LocalKey;
using embed::Species;

namespace {

constexpr double table_tol = 1e-9;
constexpr double identity_rel_tol = 1e-9;
constexpr double decomposability_tol = 1e-8;
constexpr double witness_tol = 1e-12;
constexpr double xi_tol = 1e-9;
constexpr double xi_w_tol = 1e-12;
constexpr double rdm_tol = 1e-9;
constexpr double gamma_zero_tol = 1e-9;
constexpr double gamma_ghz_floor = 0.1;
constexpr double springer_rel_tol = 1e-9;
constexpr double unit_det_rel_tol = 1e-8;
constexpr double ratio_rel_tol = 1e-6;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

const std::vector<SystemSpec>& freudenthal_specs() {
  static const std::vector<SystemSpec> specs{SystemSpec::fermion(3, 6), SystemSpec::of(SystemKind::qubit3),
                                             SystemSpec::of(SystemKind::boson2q), SystemSpec::of(SystemKind::boson3),
                                             SystemSpec::of(SystemKind::qubit_fermion4)};
  return specs;
}

SystemShape random_shape(std::mt19937_64& rng, int min_species, int max_species, int max_modes) {
  std::uniform_int_distribution<int> count(min_species, max_species), modes(2, 5);
  for (;;) {
    std::vector<Species> sp;
    int total = 0;
    for (int i = count(rng); i > 0; --i) {
      const int n = modes(rng);
      std::uniform_int_distribution<int> kk(1, n - 1);
      sp.push_back({kk(rng), n});
      total += n;
    }
    if (total <= max_modes) return SystemShape(sp);
  }
}

MultiState random_multi(const SystemShape& shape, std::mt19937_64& rng) {
  std::vector<LocalKey> keys{{}};
  for (const auto& sp : shape.all()) {
    std::vector<LocalKey> next;
    for (const auto& k : keys)
      for (auto local : fermion::combinations(sp.n, sp.k)) {
        next.push_back(k);
        next.back().push_back(local);
      }
    keys = std::move(next);
  }
  MultiState m(shape);
  for (const auto& k : keys) m.set(k, oracle::gaussian(rng));
  return m.normalized();
}

MultiState random_product(const SystemShape& shape, std::mt19937_64& rng) {
  std::vector<fermion::State> factors;
  for (const auto& sp : shape.all()) factors.push_back(oracle::random_decomposable(sp.k, sp.n, rng));
  return embed::product_state(factors);
}

// ---------------------------------------------------------------------------

Verdict table_matrix() {
  Verdict v;
  int rows = 0;
  double worst_ghz = 0.0, worst_zero = 0.0;
  for (const auto& rep : reps::table_representatives()) {
    const auto label = classify_state(rep.state);
    const double t = label.invariants.tangle.value_or(-1.0);
    v.require(label.name == rep.expected, rep.stem() + " class " + name(label.name));
    v.require(label.rank && freudenthal::to_int(*label.rank) == rep.rank, rep.stem() + " rank");
    if (rep.row == "GHZ") {
      worst_ghz = std::max(worst_ghz, std::abs(t - 1.0));
      v.require(std::abs(t - 1.0) <= table_tol, rep.stem() + " |T| = " + sci(t));
    } else {
      worst_zero = std::max(worst_zero, t);
      v.require(t >= 0.0 && t <= table_tol, rep.stem() + " |T| = " + sci(t));
    }
    if (rep.row == "W") v.require(rep.rank == 3, rep.stem() + " W row rank");
    if (rep.row[0] == 'B') v.require(rep.rank == 2, rep.stem() + " B row rank");
    if (rep.row == "S") v.require(rep.rank == 1, rep.stem() + " S row rank");
    if (const auto* q = std::get_if<Qubit3State>(&rep.state))
      v.require(std::abs(std::abs(oracle::four_hyperdet(*q)) - t) <= table_tol, rep.stem() + " hyperdeterminant oracle");
    ++rows;
  }
  v.require(rows == 22, "expected 22 rows, found " + std::to_string(rows));
  v.detail << rows << " rows; max ||T|-1| on GHZ " << sci(worst_ghz) << ", max |T| elsewhere " << sci(worst_zero);
  return v;
}

Verdict invariant_identities() {
  Verdict v;
  double worst = 0.0;
  auto check = [&](cplx poly, const freudenthal::Vector& x, const char* sys) {
    const double gap = oracle::rel_gap(std::abs(poly), std::abs(freudenthal::quartic_T_eq5(x)));
    worst = std::max(worst, gap);
    v.require(gap <= identity_rel_tol, std::string(sys) + " gap " + sci(gap));
  };
  for (const auto kind : {SystemKind::qubit3, SystemKind::boson2q, SystemKind::boson3, SystemKind::qubit_fermion4})
    for (std::uint64_t i = 0; i < 1000; ++i) {
      const AnyState s = random_state(SystemSpec::of(kind), derive_seed(200 + static_cast<std::uint64_t>(kind), i));
      switch (kind) {
        case SystemKind::qubit3: {
          const auto& q = std::get<Qubit3State>(s);
          check(three_tangle_polynomial(q), embed::three_qubit_to_freudenthal(q), "qubit3");
          check(oracle::four_hyperdet(q), embed::three_qubit_to_freudenthal(q), "qubit3 oracle");
          break;
        }
        case SystemKind::boson2q: {
          const auto& b = std::get<Boson2QState>(s);
          check(boson2_qubit_polynomial(b), embed::boson2_qubit_to_freudenthal(b), "boson2q");
          break;
        }
        case SystemKind::boson3: {
          const auto& b = std::get<Boson3State>(s);
          check(boson3_polynomial(b), embed::boson3_to_freudenthal(b), "boson3");
          break;
        }
        default: {
          const auto& d = std::get<QubitFermion4State>(s);
          check(qubit_fermion4_polynomial(d), embed::qubit_fermion4_to_freudenthal(d), "qubit_fermion4");
        }
      }
    }
  v.detail << "4 systems x 1000 states; max relative gap " << sci(worst);
  return v;
}

Verdict pluecker_decomposability() {
  Verdict v;
  std::mt19937_64 rng(300);
  int trials = 0;
  for (auto [k, n] : {std::pair{2, 4}, std::pair{2, 6}, std::pair{3, 6}, std::pair{4, 8}}) {
    const std::string tag = std::to_string(k) + "/" + std::to_string(n);
    for (int i = 0; i < 1000; ++i) {
      const auto p = oracle::random_decomposable(k, n, rng, i % 4 == 0);
      const bool scan = fermion::is_decomposable(p, decomposability_tol);
      v.require(scan == fermion::decomposability_oracle(p, decomposability_tol), tag + " decomposable disagreement");
      v.require(scan, tag + " wedge product rejected");
      const auto g = oracle::random_generic(k, n, rng);
      const bool gscan = fermion::is_decomposable(g, decomposability_tol);
      v.require(gscan == fermion::decomposability_oracle(g, decomposability_tol), tag + " generic disagreement");
      v.require(!gscan, tag + " generic state accepted");
      trials += 2;
    }
  }
  v.detail << trials << " trials over (2,4),(2,6),(3,6),(4,8); agreement with kernel oracle";
  return v;
}

Verdict separability_transfer() {
  Verdict v;
  std::mt19937_64 rng(400);
  int products = 0, entangled = 0, direct = 0;
  auto shape_for = [&](int i) {
    if (i % 4 == 0) return SystemShape::qudits(2 + (i / 4) % 2, 2);
    return random_shape(rng, 2, 3, 8);
  };
  for (int i = 0; i < 500; ++i) {
    const SystemShape shape = shape_for(i);
    const MultiState m = random_product(shape, rng);
    const bool sep = embed::separability_via_embedding(m);
    v.require(sep, "product rejected");
    if (shape.is_qubits()) {
      v.require(embed::qubit_separability_direct(m) == sep, "direct test disagrees on product");
      ++direct;
    }
    ++products;
  }
  for (int i = 0; i < 500; ++i) {
    const SystemShape shape = shape_for(i);
    const MultiState m = random_multi(shape, rng);
    const bool sep = embed::separability_via_embedding(m);
    v.require(!sep, "entangled state accepted");
    if (shape.is_qubits()) {
      v.require(embed::qubit_separability_direct(m) == sep, "direct test disagrees on entangled");
      ++direct;
    }
    ++entangled;
  }
  v.detail << products << " products, " << entangled << " entangled, " << direct << " qubit cross-checks";
  return v;
}

Verdict class_splitting() {
  Verdict v;
  const auto gp = fermion::apply_compound(embed::phi(reps::four_qubit_P()), reps::x_on_first_factor());
  const auto fq = embed::phi(reps::four_qubit_Q());
  double worst = 0.0;
  for (auto key : fermion::combinations(fq.n(), fq.k()))
    worst = std::max(worst, std::abs(gp.amplitude(key) - fq.amplitude(key)));
  v.require(worst <= witness_tol, "block action residual " + sci(worst));
  const auto p = classify_state(reps::four_qubit_P());
  const auto q = classify_state(reps::four_qubit_Q());
  v.require(p.cut_pattern != q.cut_pattern, "P and Q share a cut pattern");
  auto cuts = [](const ClassLabel& l) {
    std::string s;
    for (const auto& c : l.cut_pattern) s += (s.empty() ? "" : " ") + c.to_string();
    return s.empty() ? std::string("none") : s;
  };
  v.detail << "entrywise residual " << sci(worst) << "; P cuts {" << cuts(p) << "}, Q cuts {" << cuts(q) << "}";
  return v;
}

Verdict xi_values() {
  Verdict v;
  const double ghz2 = fermion::xi_invariant(embed::phi_tilde(reps::qudit_ghz(2, 2)));
  const double ghz3 = fermion::xi_invariant(embed::phi_tilde(reps::qudit_ghz(2, 3)));
  const double expect3 = 6.0 * std::pow(3.0, -1.5);
  v.require(std::abs(ghz2 - 1.0) <= xi_tol, "d=2 GHZ xi " + sci(ghz2));
  v.require(std::abs(ghz3 - expect3) <= xi_tol, "d=3 GHZ xi " + sci(ghz3));
  v.require(std::abs(oracle::xi_qudit_formula(reps::qudit_ghz(2, 3)) - ghz3) <= xi_tol, "d=3 qudit formula");
  double worst_w = 0.0;
  for (int parties : {4, 6}) {
    const double w = fermion::xi_invariant(embed::phi_tilde(reps::qudit_w(parties, 2)));
    worst_w = std::max(worst_w, w);
    v.require(w <= xi_w_tol, "W xi at N=" + std::to_string(parties) + ": " + sci(w));
  }
  v.detail << "GHZ_2 " << ghz2 << ", GHZ_3 " << ghz3 << " (expected " << expect3 << "), max W " << sci(worst_w);
  return v;
}

Verdict rdm_direct_sum() {
  Verdict v;
  std::mt19937_64 rng(700);
  const std::vector<SystemShape> shapes{SystemShape::qudits(3, 2), SystemShape({{1, 2}, {2, 4}}),
                                        SystemShape({{2, 4}, {1, 3}}), SystemShape({{1, 3}, {1, 2}, {1, 3}}),
                                        SystemShape({{2, 5}, {1, 3}})};
  double worst = 0.0, worst_dec = 0.0, least_ghz = 1e300;
  for (int i = 0; i < 200; ++i) {
    const MultiState m = random_multi(shapes[static_cast<std::size_t>(i) % shapes.size()], rng);
    const double r = embed::embedded_rdm_blocks(m).residual();
    worst = std::max(worst, r);
    v.require(r <= rdm_tol, "block residual " + sci(r));
  }
  for (int i = 0; i < 100; ++i) {
    const auto& shape = shapes[static_cast<std::size_t>(i) % shapes.size()];
    const double d1 = fermion::gamma_idempotency_defect(embed::phi(random_product(shape, rng)));
    const double d2 = fermion::gamma_idempotency_defect(oracle::random_decomposable(3, 7, rng, i % 2 == 0));
    worst_dec = std::max({worst_dec, d1, d2});
    v.require(d1 <= gamma_zero_tol && d2 <= gamma_zero_tol, "decomposable defect " + sci(std::max(d1, d2)));
  }
  std::vector<fermion::State> ghz_type{embed::phi(reps::qudit_ghz(3, 2)), embed::phi(reps::qudit_ghz(4, 2)),
                                       embed::phi_tilde(reps::qudit_ghz(2, 3)), embed::phi(reps::four_qubit_P())};
  for (const auto& rep : reps::table_representatives())
    if (rep.row == "GHZ") ghz_type.push_back(fermionic_image(rep.state));
  for (const auto& p : ghz_type) {
    const double d = fermion::gamma_idempotency_defect(p);
    least_ghz = std::min(least_ghz, d);
    v.require(d > gamma_ghz_floor, "GHZ-type defect " + sci(d));
  }
  v.detail << "200 states over " << shapes.size() << " shapes, max residual " << sci(worst) << "; max decomposable defect "
           << sci(worst_dec) << ", min GHZ-type defect " << sci(least_ghz) << " over " << ghz_type.size() << " states";
  return v;
}

Verdict springer_cross_check() {
  Verdict v;
  std::mt19937_64 rng(800);
  double worst = 0.0;
  for (auto kind : jordan::all_kinds) {
    const auto c = jordan::Element::identity(kind);
    const std::size_t dim = jordan::dimension(kind);
    auto draw = [&] {
      std::vector<cplx> coords(dim);
      for (auto& z : coords) z = oracle::gaussian(rng);
      return jordan::Element::from_coords(kind, coords);
    };
    for (int i = 0; i < 200; ++i) {
      const auto x = draw(), y = draw();
      const double t = oracle::rel_gap(jordan::springer_trace_form(x, y, c), jordan::trace_form(x, y));
      const auto s = jordan::springer_sharp(x, c), e = jordan::sharp(x);
      double sgap = 0.0;
      for (std::size_t j = 0; j < dim; ++j) sgap = std::max(sgap, std::abs(s.coords()[j] - e.coords()[j]));
      sgap /= std::max(1.0, jordan::coordinate_norm(e));
      worst = std::max({worst, t, sgap});
      v.require(t <= springer_rel_tol && sgap <= springer_rel_tol, std::string(jordan::name(kind)) + " gap " + sci(std::max(t, sgap)));
    }
  }
  v.detail << jordan::all_kinds.size() << " algebras x 200 elements; max relative gap " << sci(worst);
  return v;
}

Verdict invariance_suite() {
  Verdict v;
  const auto table = reps::table_representatives();
  double worst_unit = 0.0, worst_ratio = 0.0;
  int label_trials = 0;
  for (const auto& spec : freudenthal_specs()) {
    std::vector<AnyState> pool;
    for (const auto& rep : table)
      if (kind_of(rep.state) == spec.kind) pool.push_back(rep.state);
    for (std::uint64_t i = 0; i < 500; ++i) {
      // Cycle through every row of this system, interleaved with generic states.
      const AnyState s = (i % (pool.size() + 1) == pool.size()) ? random_state(spec, derive_seed(900, i))
                                                                  : pool[i % (pool.size() + 1)];
      const AnyState t = slocc_act(s, random_group_element(s, derive_seed(901, i)));
      v.require(classify_state(t) == classify_state(s), std::string(name(spec.kind)) + " label changed");
      ++label_trials;

      const AnyState r = random_state(spec, derive_seed(902, i));
      const AnyState u = slocc_act(r, random_group_element(r, derive_seed(903, i), true));
      const double gap = oracle::rel_gap(invariant_for(u), invariant_for(r));
      worst_unit = std::max(worst_unit, gap);
      v.require(gap <= unit_det_rel_tol, std::string(name(spec.kind)) + " unit-det gap " + sci(gap));
    }
    for (std::uint64_t gi = 0; gi < 5; ++gi) {
      const GroupElement g = random_group_element(random_state(spec, 1), derive_seed(904, gi));
      std::optional<double> ratio;
      for (std::uint64_t si = 0; si < 20; ++si) {
        const AnyState s = random_state(spec, derive_seed(905, si));
        const double q = invariant_for(slocc_act(s, g)) / invariant_for(s);
        if (!ratio) ratio = q;
        const double gap = std::abs(q - *ratio) / *ratio;
        worst_ratio = std::max(worst_ratio, gap);
        v.require(gap <= ratio_rel_tol, std::string(name(spec.kind)) + " ratio spread " + sci(gap));
      }
    }
  }
  v.detail << label_trials << " label trials; max unit-det gap " << sci(worst_unit) << ", max ratio spread " << sci(worst_ratio);
  return v;
}

bool off_diagonal_zero(const jordan::Mat3& m) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j && m(i, j) != 0.0) return false;
  return true;
}

Verdict subspace_shapes() {
  Verdict v;
  std::uint64_t seed = 1000;
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    const auto b3 = std::get<Boson3State>(random_state(SystemSpec::of(SystemKind::boson3), ++seed));
    const auto b2 = std::get<Boson2QState>(random_state(SystemSpec::of(SystemKind::boson2q), ++seed));
    const auto q3 = std::get<Qubit3State>(random_state(SystemSpec::of(SystemKind::qubit3), ++seed));
    const auto d4 = std::get<QubitFermion4State>(random_state(SystemSpec::of(SystemKind::qubit_fermion4), ++seed));

    const auto x3 = embed::boson3_to_freudenthal(b3);
    for (const auto* e : {&x3.a(), &x3.b()}) {
      const auto m = e->matrix();
      v.require(off_diagonal_zero(m) && m(0, 0) == m(1, 1) && m(1, 1) == m(2, 2), "boson3 not scalar");
    }
    const auto x2 = embed::boson2_qubit_to_freudenthal(b2);
    for (const auto* e : {&x2.a(), &x2.b()}) {
      const auto m = e->matrix();
      v.require(off_diagonal_zero(m) && m(1, 1) == m(2, 2), "boson2q not doubled-diagonal");
    }
    const auto xq = embed::three_qubit_to_freudenthal(q3);
    v.require(off_diagonal_zero(xq.a().matrix()) && off_diagonal_zero(xq.b().matrix()), "qubit3 not diagonal");
    const auto xd = embed::qubit_fermion4_to_freudenthal(d4);
    for (const auto* e : {&xd.a(), &xd.b()}) {
      const auto m = e->matrix();
      v.require(m(0, 1) == 0.0 && m(0, 2) == 0.0 && m(1, 0) == 0.0 && m(2, 0) == 0.0, "qubit_fermion4 not block form");
    }
    v.require(embed::boson3_native(b3).kind() == jordan::AlgebraKind::J1 &&
                  embed::boson2_qubit_native(b2).kind() == jordan::AlgebraKind::J11 &&
                  embed::three_qubit_native(q3).kind() == jordan::AlgebraKind::J111 &&
                  embed::qubit_fermion4_native(d4).kind() == jordan::AlgebraKind::J12,
              "native algebra kind");
    checked += 4;
  }
  v.detail << checked << " vectors; exact zero patterns";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"representative table", table_matrix},
      {"invariant identities", invariant_identities},
      {"Pluecker vs decomposability", pluecker_decomposability},
      {"separability transfer", separability_transfer},
      {"class splitting witness", class_splitting},
      {"xi values", xi_values},
      {"RDM direct sum and gamma", rdm_direct_sum},
      {"Springer cross-check", springer_cross_check},
      {"SLOCC invariance", invariance_suite},
      {"embedding subspace shapes", subspace_shapes},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2zu %s: %s (%.2fs)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), v.detail.str().c_str(), secs);
    failures += v.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
