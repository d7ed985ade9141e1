#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace entangle;
using namespace entangle::fermion;

namespace {

const double r2 = 1.0 / std::sqrt(2.0);

State ghz3() {
  State p(3, 6);
  p.add({0, 1, 2}, r2);
  p.add({3, 4, 5}, r2);
  return p;
}

State e(int n, std::initializer_list<int> modes) { return State::basis(n, modes); }

bool close(const State& a, const State& b, double tol = 1e-10) { return approx_equal(a, b, tol); }

}  // namespace

TEST(ModeSetTest, Basics) {
  const ModeSet s = ModeSet::of({4, 1, 2});
  EXPECT_EQ(s.size(), 3);
  EXPECT_EQ(s.indices(), (std::vector<int>{1, 2, 4}));
  EXPECT_EQ(s.count_below(3), 2);
  EXPECT_EQ(s.span_end(), 5);
  EXPECT_THROW(ModeSet::of({1, 1}), ShapeError);
  EXPECT_THROW(ModeSet::of({64}), ShapeError);
}

TEST(ModeSetTest, CombinationsCountAndOrder) {
  for (int n = 1; n <= 9; ++n)
    for (int k = 0; k <= n; ++k) {
      const auto c = combinations(n, k);
      EXPECT_EQ(static_cast<double>(c.size()), binomial(n, k));
      for (std::size_t i = 1; i < c.size(); ++i) EXPECT_LT(c[i - 1], c[i]);
      for (auto s : c) EXPECT_EQ(s.size(), k);
    }
}

TEST(Wedge, Examples) {
  EXPECT_TRUE(close(wedge(e(6, {0, 1}), e(6, {2})), e(6, {0, 1, 2})));
  EXPECT_TRUE(close(wedge(e(6, {2}), e(6, {0, 1})), e(6, {0, 1, 2})));
  EXPECT_TRUE(wedge(e(6, {0}), e(6, {0})).is_zero());
  EXPECT_TRUE(close(wedge(e(4, {1}), e(4, {0})), -1.0 * e(4, {0, 1})));
  EXPECT_THROW(wedge(e(3, {0, 1}), e(3, {1, 2})), ShapeError);
}

TEST(Wedge, BasisSignFolding) {
  // e4 ^ e2 ^ e3 = + e2 ^ e3 ^ e4 (two transpositions), e2 ^ e1 = - e1 ^ e2.
  EXPECT_EQ(State::basis(6, {3, 1, 2}).amplitude(ModeSet::of({1, 2, 3})), cplx(1.0));
  EXPECT_EQ(State::basis(4, {1, 0}).amplitude(ModeSet::of({0, 1})), cplx(-1.0));
  EXPECT_EQ(ghz3().amplitude({2, 1, 0}), cplx(-r2));
}

TEST(Wedge, MatchesConcatenationOracle) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const State u = oracle::random_generic(2, 7, rng), v = oracle::random_generic(3, 7, rng);
    EXPECT_TRUE(close(wedge(u, v), oracle::wedge(u, v)));
  }
}

TEST(Wedge, GradedAnticommutativityAndAssociativity) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    for (auto [k1, k2] : {std::pair{1, 2}, std::pair{2, 2}, std::pair{1, 3}, std::pair{3, 3}}) {
      const State u = oracle::random_generic(k1, 8, rng), v = oracle::random_generic(k2, 8, rng);
      const double sign = ((k1 * k2) % 2 == 0) ? 1.0 : -1.0;
      EXPECT_TRUE(close(wedge(u, v), sign * wedge(v, u)));
    }
    const State a = oracle::random_generic(1, 7, rng), b = oracle::random_generic(2, 7, rng);
    const State c = oracle::random_generic(2, 7, rng);
    EXPECT_TRUE(close(wedge(wedge(a, b), c), wedge(a, wedge(b, c))));
  }
}

TEST(StateTest, InnerNormAndPruning) {
  std::mt19937_64 rng(3);
  const State p = oracle::random_generic(3, 6, rng);
  EXPECT_NEAR(std::abs(inner(p, p) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(p.norm(), 1.0, 1e-12);
  State q = p - p;
  EXPECT_TRUE(q.is_zero());
  State r(2, 4);
  r.set(ModeSet::of({0, 1}), 1e-15);
  EXPECT_TRUE(r.is_zero());
  EXPECT_THROW(r.set(ModeSet::of({0, 1}), cplx(INFINITY, 0.0)), NonFiniteValue);
  EXPECT_THROW(r.set(ModeSet::of({0}), 1.0), ShapeError);
  EXPECT_THROW(State(3, 2), ShapeError);
}

TEST(Pluecker, GhzRelationValue) {
  const std::array<int, 2> a{0, 1};
  const std::array<int, 4> b{2, 3, 4, 5};
  EXPECT_NEAR(std::abs(pluecker_poly(ghz3(), a, b)), 0.5, 1e-12);
}

TEST(Pluecker, SortedAndGeneralFormsAgree) {
  std::mt19937_64 rng(4);
  const State p = oracle::random_generic(3, 6, rng);
  const detail::DenseLookup lookup(p);
  for (auto a : combinations(6, 2))
    for (auto b : combinations(6, 4)) {
      const auto ai = a.indices(), bi = b.indices();
      EXPECT_LT(std::abs(pluecker_poly(p, ai, bi) - detail::pluecker_sorted(lookup, a, b)), 1e-12);
    }
}

TEST(Pluecker, SeparableStateSatisfiesAllRelations) {
  EXPECT_EQ(pluecker_scan(e(6, {0, 1, 2})).max_violation, 0.0);
  EXPECT_TRUE(is_decomposable(e(6, {0, 1, 2})));
  EXPECT_FALSE(is_decomposable(ghz3()));
  EXPECT_THROW(is_decomposable(State(3, 6)), NumericalError);
  const std::array<int, 1> bad_a{0};
  const std::array<int, 4> b{1, 2, 3, 4};
  EXPECT_THROW(pluecker_poly(ghz3(), bad_a, b), ShapeError);
}

TEST(Pluecker, ThreadedScanMatchesSerial) {
  std::mt19937_64 rng(5);
  const State p = oracle::random_generic(4, 8, rng);
  const auto serial = pluecker_scan(p, 1);
  for (unsigned t : {2u, 3u, 8u}) {
    const auto par = pluecker_scan(p, t);
    EXPECT_EQ(par.max_violation, serial.max_violation);
    EXPECT_EQ(par.arg_a, serial.arg_a);
    EXPECT_EQ(par.arg_b, serial.arg_b);
    EXPECT_EQ(par.pairs, serial.pairs);
  }
}

TEST(Pluecker, AgreesWithKernelOracle) {
  std::mt19937_64 rng(6);
  for (auto [k, n] : {std::pair{2, 4}, std::pair{2, 5}, std::pair{3, 6}, std::pair{3, 7}, std::pair{4, 8}}) {
    for (int trial = 0; trial < 40; ++trial) {
      const State d = oracle::random_decomposable(k, n, rng, trial % 2 == 1);
      EXPECT_TRUE(is_decomposable(d));
      EXPECT_TRUE(decomposability_oracle(d));
      const State g = oracle::random_generic(k, n, rng);
      EXPECT_FALSE(is_decomposable(g));
      EXPECT_FALSE(decomposability_oracle(g));
    }
  }
  EXPECT_TRUE(decomposability_oracle(e(6, {0, 1, 2})));
  EXPECT_FALSE(decomposability_oracle(ghz3()));
}

TEST(Pluecker, SingleParticleAndTopDegreeAreAlwaysDecomposable) {
  std::mt19937_64 rng(7);
  EXPECT_TRUE(is_decomposable(oracle::random_generic(1, 5, rng)));
  EXPECT_TRUE(is_decomposable(oracle::random_generic(5, 5, rng)));
  EXPECT_TRUE(is_decomposable(oracle::random_generic(4, 5, rng)));
  EXPECT_TRUE(decomposability_oracle(oracle::random_generic(4, 5, rng)));
}

TEST(Xi, MatchesPermutationSum) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const State p = oracle::random_generic(2, 4, rng);
    EXPECT_NEAR(xi_invariant(p), oracle::xi_permutation_sum(p), 1e-10);
  }
  for (int trial = 0; trial < 5; ++trial) {
    const State p = oracle::random_generic(2, 6, rng);
    EXPECT_NEAR(xi_invariant(p), oracle::xi_permutation_sum(p), 1e-10);
  }
  const State p = oracle::random_generic(4, 8, rng);
  EXPECT_NEAR(xi_invariant(p), oracle::xi_permutation_sum(p), 1e-10);
}

TEST(Xi, HomogeneityAndPreconditions) {
  std::mt19937_64 rng(9);
  const State p = oracle::random_generic(2, 6, rng);
  const cplx lambda(0.4, 1.1);
  EXPECT_NEAR(xi_invariant(lambda * p), std::pow(std::abs(lambda), 3) * xi_invariant(p), 1e-10);
  EXPECT_THROW(xi_invariant(ghz3()), ShapeError);
  EXPECT_THROW(xi_invariant(oracle::random_generic(2, 5, rng)), ShapeError);
}

TEST(Xi, ScalesByDeterminant) {
  std::mt19937_64 rng(10);
  const State p = oracle::random_generic(2, 6, rng);
  const Eigen::MatrixXcd g = oracle::random_matrix(6, rng);
  EXPECT_NEAR(xi_invariant(apply_compound(p, g)), std::abs(g.determinant()) * xi_invariant(p),
              1e-9 * std::max(1.0, xi_invariant(p)));
}

TEST(Rdm, SeparableExample) {
  const auto rho = one_particle_rdm(e(6, {0, 1, 2})).rho;
  Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(6, 6);
  for (int i = 0; i < 3; ++i) expect(i, i) = 1.0 / 3.0;
  EXPECT_LT((rho - expect).norm(), 1e-12);
  EXPECT_LT(gamma_idempotency_defect(e(6, {0, 1, 2})), 1e-12);
}

TEST(Rdm, GhzExample) {
  const auto rho = one_particle_rdm(ghz3()).rho;
  EXPECT_LT((rho - Eigen::MatrixXcd::Identity(6, 6) / 6.0).norm(), 1e-12);
  EXPECT_NEAR(gamma_idempotency_defect(ghz3()), 0.25 * std::sqrt(6.0), 1e-12);
}

TEST(Rdm, MatchesDenseTensorPartialTrace) {
  std::mt19937_64 rng(11);
  for (auto [k, n] : {std::pair{2, 4}, std::pair{3, 6}, std::pair{3, 7}, std::pair{4, 8}}) {
    for (int trial = 0; trial < 5; ++trial) {
      const State p = oracle::random_generic(k, n, rng);
      EXPECT_LT((one_particle_rdm(p).rho - oracle::dense_rdm(p)).norm(), 1e-12);
    }
  }
}

TEST(Rdm, PropertiesOnRandomStates) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const State p = oracle::random_generic(3, 7, rng);
    const auto r = one_particle_rdm(p);
    EXPECT_LT(r.hermiticity_defect(), 1e-12);
    EXPECT_GE(r.min_eigenvalue(), -1e-9);
    EXPECT_NEAR(std::abs(r.rho.trace() - 1.0), 0.0, 1e-12);
  }
  EXPECT_THROW(one_particle_rdm(2.0 * ghz3()), NumericalError);
}

TEST(Rdm, DefectVanishesExactlyOnDecomposable) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const State d = oracle::random_decomposable(3, 7, rng);
    const State g = oracle::random_generic(3, 7, rng);
    EXPECT_LE(gamma_idempotency_defect(d), 1e-9);
    EXPECT_GT(gamma_idempotency_defect(g), 1e-3);
    EXPECT_EQ(gamma_idempotency_defect(d) <= 1e-8, is_decomposable(d));
    EXPECT_EQ(gamma_idempotency_defect(g) <= 1e-8, is_decomposable(g));
  }
}

TEST(Compound, ActsOnEveryFactor) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXcd g = oracle::random_matrix(6, rng);
    std::vector<State> vs;
    for (int i = 0; i < 3; ++i) vs.push_back(oracle::random_vector(6, rng));
    auto apply1 = [&](const State& v) {
      std::vector<cplx> c(6);
      for (int i = 0; i < 6; ++i) {
        c[static_cast<std::size_t>(i)] = 0.0;
        for (int j = 0; j < 6; ++j) c[static_cast<std::size_t>(i)] += g(i, j) * v.amplitude(ModeSet::of({j}));
      }
      return mode_vector(6, c);
    };
    const State p = wedge(wedge(vs[0], vs[1]), vs[2]);
    const State gp = wedge(wedge(apply1(vs[0]), apply1(vs[1])), apply1(vs[2]));
    EXPECT_TRUE(approx_equal(apply_compound(p, g), gp, 1e-9));
  }
  const State p = ghz3();
  EXPECT_TRUE(approx_equal(apply_compound(p, Eigen::MatrixXcd::Identity(6, 6)), p, 0.0));
  EXPECT_THROW(apply_compound(p, Eigen::MatrixXcd::Identity(5, 5)), ShapeError);
}

TEST(ThreeFermion, FreudenthalCoordinatesOfRepresentatives) {
  const auto g = to_freudenthal(ghz3());
  EXPECT_NEAR(std::abs(g.alpha() - r2), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(g.beta() - r2), 0.0, 1e-15);
  EXPECT_EQ(jordan::coordinate_norm(g.a()), 0.0);
  EXPECT_EQ(jordan::coordinate_norm(g.b()), 0.0);

  const double r3 = 1.0 / std::sqrt(3.0);
  State w(3, 6);
  w.add({3, 1, 2}, r3);
  w.add({0, 4, 2}, r3);
  w.add({0, 1, 5}, r3);
  const auto x = to_freudenthal(w);
  EXPECT_EQ(x.alpha(), cplx(0.0));
  EXPECT_EQ(x.beta(), cplx(0.0));
  EXPECT_EQ(jordan::coordinate_norm(x.a()), 0.0);
  EXPECT_LT((x.b().matrix() - r3 * jordan::Mat3::Identity()).norm(), 1e-15);
  EXPECT_THROW(to_freudenthal(State(3, 7)), ShapeError);
}

TEST(ThreeFermion, CoordinateMapIsABijection) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const State p = oracle::random_generic(3, 6, rng);
    EXPECT_TRUE(approx_equal(from_freudenthal(to_freudenthal(p)), p, 1e-14));
    EXPECT_NEAR(to_freudenthal(p).norm(), p.norm(), 1e-12);
  }
  std::set<ModeSet> hit;
  for (std::size_t i = 0; i < 20; ++i) {
    const State p = from_freudenthal(freudenthal::Vector::basis(jordan::AlgebraKind::J3, i));
    ASSERT_EQ(p.nnz(), 1u);
    hit.insert(p.terms().begin()->first);
  }
  EXPECT_EQ(hit.size(), 20u);
}
