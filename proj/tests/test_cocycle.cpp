#include <gtest/gtest.h>

#include <algorithm>

#include "nilkit/cocycle.hpp"

using namespace nilkit;

namespace {

using El = FiniteAbelianGroup::Element;

const FiniteAbelianGroup Z3 = FiniteAbelianGroup::cyclic(3);
const FiniteAbelianGroup Z5 = FiniteAbelianGroup::cyclic(5);

GroupCube cyc(int n, std::vector<std::int64_t> v) {
  std::vector<El> out;
  for (auto a : v) {
    El x(1);
    x(0) = a;
    out.push_back(x);
  }
  return GroupCube(n, std::move(out));
}

CircleMap linear(std::int64_t N, std::int64_t a) {
  CircleMap g;
  for (std::int64_t x = 0; x < N; ++x) g.push_back(frac(Rational(a * x, N)));
  return g;
}

CircleMap random_map(std::int64_t N, std::int64_t den, Rng& rng) {
  CircleMap g;
  for (std::int64_t x = 0; x < N; ++x) g.push_back(Rational(rng.between(0, den - 1), den));
  return g;
}

Cocycle constant(const FiniteAbelianGroup& X, int k, Rational c) {
  return Cocycle(X, k, CircleTarget::circle(), [c](const GroupCube&) { return c; });
}

}  // namespace

TEST(Coboundary, Examples) {
  const auto zero = coboundary_from(Z5, CircleMap(5, Rational(0)), 1);
  for_each_cube(Z5, 2, [&](const GroupCube& q) { ASSERT_EQ(zero(q), 0); });
  const auto rho = coboundary_from(Z5, linear(5, 1), 1);
  EXPECT_EQ(rho(cyc(2, {0, 1, 2, 3})), 0);
  EXPECT_EQ(rho(cyc(2, {0, 1, 2, 4})), Rational(1, 5));
  EXPECT_THROW(rho(cyc(1, {0, 1})), MismatchError);
}

TEST(Coboundary, TargetMembership) {
  EXPECT_NO_THROW(coboundary_from(Z5, linear(5, 2), 1, CircleTarget::cyclic(5)));
  EXPECT_THROW(coboundary_from(Z5, CircleMap(5, Rational(1, 3)), 1, CircleTarget::cyclic(5)),
               MismatchError);
  EXPECT_THROW(coboundary_from(Z5, CircleMap(4, Rational(0)), 1), MismatchError);
  EXPECT_EQ(CircleTarget::cyclic(5).distance(Rational(4, 5), 0), Rational(1, 5));
}

TEST(CocycleAxioms, Examples) {
  Rng rng(17);
  const auto rho = coboundary_from(Z5, random_map(5, 7, rng), 1);
  const auto ok = check_cocycle_axioms(rho);
  EXPECT_TRUE(ok.pass());
  EXPECT_EQ(ok.automorphism_checks, 125u * 8u);
  EXPECT_GT(ok.concatenation_checks, 0u);

  const GroupCube q = cyc(2, {0, 1, 2, 3});
  const auto bad = check_cocycle_axioms(rho.perturbed(q, rho(q) + Rational(1, 2)));
  EXPECT_FALSE(bad.pass());
  const CubeKey key = cube_key(Z5, q);
  bool cited = false;
  for (const auto& v : bad.violations) {
    cited = cited || std::find(v.cubes.begin(), v.cubes.end(), key) != v.cubes.end();
  }
  EXPECT_TRUE(cited);

  EXPECT_FALSE(check_cocycle_axioms(constant(Z5, 1, Rational(1, 3))).pass());
  // 1/2 = -1/2 survives the reflections, so only concatenation can fail.
  const auto c = check_cocycle_axioms(constant(Z5, 1, Rational(1, 2)));
  EXPECT_FALSE(c.pass());
  EXPECT_EQ(c.violation_count, c.concatenation_checks);
  for (const auto& v : c.violations) EXPECT_EQ(v.axiom, "concatenation");
}

TEST(CocycleAxioms, SampleModeFindsConstantFailure) {
  SamplingOptions opt;
  opt.mode = Mode::Sample;
  opt.samples = 500;
  opt.seed = 5;
  EXPECT_FALSE(check_cocycle_axioms(constant(Z5, 1, Rational(1, 4)), opt).pass());
  EXPECT_TRUE(check_cocycle_axioms(coboundary_from(Z5, linear(5, 3), 2), opt).pass());
}

TEST(CocycleAxioms, DegreeMinusOneIsVacuous) {
  const auto r = check_cocycle_axioms(constant(Z5, -1, Rational(1, 3)));
  EXPECT_TRUE(r.vacuous);
  EXPECT_EQ(r.concatenation_checks, 0u);
}

TEST(D1, Examples) {
  EXPECT_EQ(d1_to_zero(coboundary_from(Z5, CircleMap(5, Rational(0)), 1)).value, 0.0);
  const auto half = d1_to_zero(constant(Z5, 1, Rational(1, 2)));
  EXPECT_EQ(*half.exact, Rational(1, 2));
  EXPECT_EQ(half.cubes, 125u);

  Rng rng(23);
  for (int t = 0; t < 10; ++t) {
    const CircleMap g = random_map(5, 11, rng);
    Rational direct = 0;
    for (const auto& q : enumerate_cubes(Z5, 2)) {
      Rational s = 0;
      for (Vertex v = 0; v < 4; ++v) s += (weight(v) & 1 ? -1 : 1) * g[q[v](0)];
      direct += circle_distance(s);
    }
    EXPECT_EQ(*d1_to_zero(coboundary_from(Z5, g, 1)).exact, direct / Rational(125));
  }
}

TEST(D1, SampleModeEstimates) {
  SamplingOptions opt;
  opt.mode = Mode::Sample;
  opt.samples = 4000;
  opt.seed = 8;
  Rng rng(2);
  const auto rho = coboundary_from(Z5, random_map(5, 9, rng), 1);
  EXPECT_NEAR(d1_to_zero(rho, opt).value, d1_to_zero(rho).value, 0.02);
}

TEST(Defect, Examples) {
  const std::vector<Rational> deltas{Rational(1, 100), Rational(1, 10), Rational(1, 2)};
  for (const auto& row : quasimorphism_defect(Z5, linear(5, 2), 1, deltas)) {
    EXPECT_EQ(row.failures, 0u);
    EXPECT_TRUE(row.quasi);
  }

  // One point moved by eps0: a 2-cube fails exactly when the signed number of
  // its vertices landing on that point is nonzero.
  const Rational eps0(1, 1000);
  for (std::int64_t x0 = 0; x0 < 5; ++x0) {
    CircleMap phi = linear(5, 1);
    phi[x0] += eps0;
    std::uint64_t expected = 0, touching = 0;
    for (const auto& q : enumerate_cubes(Z5, 2)) {
      int signed_hits = 0;
      bool hit = false;
      for (Vertex v = 0; v < 4; ++v) {
        if (q[v](0) != x0) continue;
        hit = true;
        signed_hits += (weight(v) & 1) ? -1 : 1;
      }
      if (signed_hits != 0) ++expected;
      if (hit) ++touching;
    }
    const auto rows = quasimorphism_defect(Z5, phi, 1, {eps0 / 2, eps0 * 3});
    EXPECT_EQ(rows[0].failures, expected);
    EXPECT_EQ(rows[0].cubes, 125u);
    // Degenerate cubes can hit x0 twice with opposite signs and cancel.
    EXPECT_LT(expected, touching);
    EXPECT_EQ(rows[1].failures, 0u);
  }

  int above = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng r(seed);
    CircleMap phi(5);
    for (auto& x : phi) x = Rational(r.between(0, 999999), 1000000);
    const auto rows = quasimorphism_defect(Z5, phi, 1, {Rational(1, 100)});
    if (rows[0].failure_fraction > 0.5) ++above;
  }
  EXPECT_EQ(above, 20);
}

TEST(Defect, SpreadRuleDividesDistance) {
  CircleMap phi = linear(5, 1);
  phi[0] += Rational(1, 100);
  const auto one = quasimorphism_defect(Z5, phi, 1, {Rational(1, 200)});
  const auto spread =
      quasimorphism_defect(Z5, phi, 1, {Rational(1, 200)}, {}, CorrectionRule::Spread);
  EXPECT_GT(one[0].failures, 0u);
  EXPECT_EQ(spread[0].failures, 0u);
  EXPECT_THROW(quasimorphism_defect(Z5, phi, 1, {Rational(1, 2)}, {}, CorrectionRule::Spread,
                                    CircleTarget::cyclic(5)),
               MismatchError);
}

// ---------------------------------------------------------------------------
// Invariants

TEST(CocycleProperty, CoboundariesPassExhaustively) {
  Rng rng(31);
  for (const auto& X : {Z3, Z5}) {
    for (int k = 0; k <= 2; ++k) {
      for (int t = 0; t < 3; ++t) {
        const auto r = check_cocycle_axioms(coboundary_from(X, random_map(X.order(), 13, rng), k));
        ASSERT_TRUE(r.pass()) << "N " << X.order() << " k " << k;
      }
    }
  }
}

TEST(CocycleProperty, D1VanishesExactlyOnPolynomialMaps) {
  for (int k = 1; k <= 2; ++k) {
    for (int code = 0; code < 27; ++code) {
      CircleMap g;
      for (int x = 0, c = code; x < 3; ++x, c /= 3) g.push_back(Rational(c % 3, 3));
      bool all_zero = true;
      for_each_cube(Z3, k + 1, [&](const GroupCube& q) {
        Rational s = 0;
        for (Vertex v = 0; v < q.size(); ++v) s += (weight(v) & 1 ? -1 : 1) * g[q[v](0)];
        all_zero = all_zero && is_integer(s);
      });
      const bool zero = *d1_to_zero(coboundary_from(Z3, g, k)).exact == 0;
      ASSERT_EQ(zero, all_zero);
      // Degree 1: exactly the affine maps (9 of the 27). Degree 2: every map.
      const bool affine = frac(g[2] - 2 * g[1] + g[0]) == 0;
      ASSERT_EQ(zero, k == 2 || affine) << "code " << code << " k " << k;
    }
  }
}

TEST(CocycleProperty, OneVertexCorrectionIsACube) {
  Rng rng(41);
  for (int t = 0; t < 20; ++t) {
    const CircleMap phi = random_map(5, 17, rng);
    for (int k = 0; k <= 2; ++k) {
      for_each_cube(Z5, k + 1, [&](const GroupCube& q) {
        std::vector<Rational> corrected(q.size());
        Rational sigma = 0;
        for (Vertex v = 0; v < q.size(); ++v) {
          corrected[v] = phi[q[v](0)];
          sigma += (weight(v) & 1 ? -1 : 1) * corrected[v];
        }
        corrected[0] -= sigma;
        Rational s = 0;
        for (Vertex v = 0; v < q.size(); ++v) s += (weight(v) & 1 ? -1 : 1) * corrected[v];
        ASSERT_EQ(frac(s), 0);
      });
    }
  }
}
