#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nilkit/nilmanifold.hpp"
#include "nilkit/samplers.hpp"

using namespace nilkit;

namespace {

RationalVector q1(const Rational& a) {
  RationalVector v(1);
  v(0) = a;
  return v;
}

const Heisenberg H;

FilteredGroup<Heisenberg> heis_lcs() { return FilteredGroup<Heisenberg>(H, Filtration({1, 1, 2})); }
FilteredGroup<AbelianGroup> line(int deg) {
  return FilteredGroup<AbelianGroup>(AbelianGroup(1), Filtration({deg}));
}

// n -> a n^2 / p on Q.
PolySeq<AbelianGroup> square(std::int64_t a, std::int64_t p) {
  return PolySeq<AbelianGroup>(line(2), {q1(0), q1(Rational(a, p)), q1(Rational(2 * a, p))});
}

template <Carrier C>
bool in_fundamental_domain(const C& c, const typename C::Element& g) {
  const RationalVector x = c.coordinates(g);
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (x(j) < 0 || x(j) >= 1) return false;
  }
  return true;
}

}  // namespace

TEST(Reduce, Examples) {
  const auto id = reduce_mod_gamma(H, H.identity());
  EXPECT_TRUE(H.equal(id.rep, H.identity()));
  EXPECT_TRUE(H.equal(id.gamma, H.identity()));

  const AbelianGroup A(1);
  const auto a = reduce_mod_gamma(A, q1(Rational(7, 5)));
  EXPECT_EQ(a.rep(0), Rational(2, 5));
  EXPECT_EQ(a.gamma(0), 1);

  const auto g = H.from_xyz(Rational(3, 2), 1, Rational(5, 4));
  const auto r = reduce_mod_gamma(H, g);
  EXPECT_TRUE(H.equal(r.rep, H.from_xyz(Rational(1, 2), 0, Rational(3, 4))));
  EXPECT_TRUE(in_lattice(H, r.gamma));
  EXPECT_TRUE(H.equal(H.multiply(r.rep, r.gamma), g));
  EXPECT_TRUE(in_fundamental_domain(H, H.multiply(g, H.inverse(r.gamma))));
}

TEST(Periodicity, Examples) {
  const auto g = square(1, 5);
  EXPECT_TRUE(is_p_periodic(g, 5, 20).periodic());
  const auto r3 = is_p_periodic(g, 3, 20);
  EXPECT_FALSE(r3.periodic());
  EXPECT_FALSE(r3.window_ok);
  EXPECT_TRUE(r3.agree);
  // At n = 0 the difference is 9/5.
  EXPECT_FALSE(is_integer(poly_eval(g, 3)(0) - poly_eval(g, 0)(0)));
  const PolySeq<Heisenberg> c(heis_lcs(), {H.from_xyz(Rational(1, 3), 0, Rational(1, 7))});
  for (std::int64_t p : {1, 2, 7, 30}) EXPECT_TRUE(is_p_periodic(c, p, 10).periodic());
}

TEST(NilsequenceEval, Examples) {
  const Nilsequence<AbelianGroup> one{square(1, 5), FExpr::one(), 5, 0.0};
  for (int n = -3; n < 8; ++n) EXPECT_NEAR(std::abs(nilsequence_eval(one, n) - 1.0), 0.0, 1e-15);
  const Nilsequence<AbelianGroup> ns{square(1, 5), FExpr::parse("e(t)"), 5, 2 * std::numbers::pi};
  for (int n = -6; n < 12; ++n) {
    const std::int64_t r = ((n * n) % 5 + 5) % 5;
    EXPECT_NEAR(std::abs(nilsequence_eval(ns, n) - unit_phase(r, 5)), 0.0, 1e-12);
  }
}

TEST(Nilsequence, Validation) {
  EXPECT_THROW(validate(Nilsequence<AbelianGroup>{square(1, 5), FExpr::parse("2*e(x)"), 5, 0.0}),
               MismatchError);
  EXPECT_THROW(validate(Nilsequence<AbelianGroup>{square(1, 5), FExpr::parse("e(y)"), 5, 0.0}),
               MismatchError);
  EXPECT_NO_THROW(validate(Nilsequence<Heisenberg>{
      PolySeq<Heisenberg>(heis_lcs(), {H.identity()}), FExpr::parse("e(x)*tent(y)*e(z)"), 3, 0.0}));
}

TEST(Correlate, Examples) {
  const auto Z5 = FiniteAbelianGroup::cyclic(5);
  const Nilsequence<AbelianGroup> ns{square(1, 5), FExpr::parse("e(t)"), 5, 0.0};
  const auto c1 = correlate(Signal::quadratic_phase(Z5, 1), ns);
  EXPECT_NEAR(std::abs(c1.value - 1.0), 0.0, 1e-12);
  EXPECT_TRUE(c1.periodic);
  EXPECT_TRUE(c1.warnings.empty());
  // The sum over x of e((x - x^2)/5) is a quadratic Gauss sum of modulus sqrt 5,
  // so this average has modulus 5^{-1/2}, not 0.
  Complex direct = 0;
  for (int x = 0; x < 5; ++x) direct += unit_phase(x - x * x, 5);
  direct /= 5.0;
  const Complex c2 = correlate(Signal::character(Z5, {1}), ns).value;
  EXPECT_NEAR(std::abs(c2 - direct), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(c2), 1.0 / std::sqrt(5.0), 1e-12);

  const auto Z31 = FiniteAbelianGroup::cyclic(31);
  const Nilsequence<AbelianGroup> m{square(3, 31), FExpr::parse("e(t)"), 31, 0.0};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_LE(std::abs(correlate(Signal::random_sign(Z31, seed), m).value), 1.0);
  }
}

TEST(Correlate, NonPeriodicWarnsOrThrows) {
  const auto Z6 = FiniteAbelianGroup::cyclic(6);
  const Nilsequence<AbelianGroup> ns{square(1, 5), FExpr::parse("e(t)"), 5, 0.0};
  const auto c = correlate(Signal::constant(Z6, 1.0), ns);
  EXPECT_FALSE(c.periodic);
  EXPECT_EQ(c.warnings.size(), 2u);
  EXPECT_THROW(correlate(Signal::constant(Z6, 1.0), ns, true), MismatchError);
}

TEST(Lift, Examples) {
  const auto g = square(1, 5);
  const auto phi = phi_table(g, 5);
  const auto lifted = lift_morphism(phi, line(2));
  for (std::int64_t n = 0; n < 10; ++n) {
    EXPECT_EQ(reduce(AbelianGroup(1), poly_eval(lifted, n))(0), phi[n % 5](0));
  }
  const std::vector<Heisenberg::Element> constant(7, H.from_xyz(Rational(1, 2), 0, Rational(2, 3)));
  const auto c = lift_morphism(constant, heis_lcs());
  EXPECT_TRUE(H.equal(c.coefficient(0), constant[0]));
  for (int i = 1; i < c.length(); ++i) EXPECT_TRUE(H.equal(c.coefficient(i), H.identity()));
}

TEST(Lift, RejectsNonMorphisms) {
  // x -> x^2 / 7 on Z_6 is not a morphism into the circle.
  std::vector<RationalVector> phi;
  for (int x = 0; x < 6; ++x) phi.push_back(q1(frac(Rational(x * x, 7))));
  EXPECT_THROW(lift_morphism(phi, line(2)), LiftError);
  EXPECT_FALSE(morphism_check(phi, line(2), 3));
}

TEST(MorphismCheck, Examples) {
  Rng rng(3);
  const auto g = random_periodic_heisenberg(heis_lcs(), 7, rng);
  EXPECT_TRUE(morphism_check(phi_table(g, 7), heis_lcs(), 3));
  EXPECT_TRUE(morphism_check(std::vector<Heisenberg::Element>(7, H.from_xyz(0, Rational(1, 3), 0)),
                             heis_lcs(), 3));
  int rejected = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng r(seed);
    std::vector<Heisenberg::Element> phi;
    for (int x = 0; x < 7; ++x) {
      phi.push_back(H.from_xyz(Rational(r.between(0, 6), 7), Rational(r.between(0, 6), 7),
                               Rational(r.between(0, 6), 7)));
    }
    if (!morphism_check(phi, heis_lcs(), 3, {200, seed})) ++rejected;
  }
  EXPECT_GE(rejected, 99);
}

// ---------------------------------------------------------------------------
// Invariants

template <Carrier C>
void reduce_properties(const FilteredGroup<C>& group, std::uint64_t seed) {
  const C& c = group.carrier();
  Rng rng(seed);
  for (int t = 0; t < 1000; ++t) {
    const auto g = random_element(group, 0, rng, 9);
    const auto r = reduce_mod_gamma(c, g);
    ASSERT_TRUE(in_fundamental_domain(c, r.rep));
    ASSERT_TRUE(in_lattice(c, r.gamma));
    ASSERT_TRUE(c.equal(c.multiply(r.rep, r.gamma), g));
    ASSERT_TRUE(c.equal(reduce(c, r.rep), r.rep));
    RationalVector k(c.dimension());
    for (int j = 0; j < c.dimension(); ++j) k(j) = rng.between(-5, 5);
    ASSERT_TRUE(c.equal(reduce(c, c.multiply(g, c.from_coordinates(k))), r.rep));
  }
}

TEST(NilmanifoldProperty, ReduceIdempotentAndGammaInvariant) {
  reduce_properties(FilteredGroup<AbelianGroup>(AbelianGroup(3), Filtration::uniform(3, 2)), 1);
  reduce_properties(heis_lcs(), 2);
}

TEST(NilmanifoldProperty, CorrelationChain) {
  for (std::int64_t p : {5, 11, 31}) {
    for (std::int64_t a = 1; a < 4; ++a) {
      const Nilsequence<AbelianGroup> ns{square(a, p), FExpr::parse("e(t)"), p, 0.0};
      const Signal f = nilsequence_signal(ns);
      const Complex corr = correlate(f, ns).value;
      const double l2 = l2_norm_squared(f);
      EXPECT_NEAR(std::abs(corr - l2), 0.0, 1e-12);
      EXPECT_GE(l2, std::pow(u_norm_recursive(f, 3), 8) - 1e-9);
    }
  }
  // A Heisenberg output function that is not a phase: the chain inequality
  // is the nontrivial part.
  Rng rng(4);
  for (int t = 0; t < 5; ++t) {
    const auto g = random_periodic_heisenberg(heis_lcs(), 13, rng);
    const Nilsequence<Heisenberg> ns{g, FExpr::parse("tent(x)*e(z)"), 13, 0.0};
    const Signal f = nilsequence_signal(ns);
    EXPECT_NEAR(std::abs(correlate(f, ns).value - l2_norm_squared(f)), 0.0, 1e-12);
    EXPECT_GE(l2_norm_squared(f), std::pow(u_norm_recursive(f, 3), 8) - 1e-9);
  }
}

TEST(NilmanifoldProperty, LiftsOfPeriodicMapsArePeriodic) {
  Rng rng(9);
  for (std::int64_t p : {5, 7}) {
    for (int t = 0; t < 50; ++t) {
      const auto g = random_periodic_heisenberg(heis_lcs(), p, rng);
      ASSERT_TRUE(is_p_periodic(g, p, 3 * p).periodic());
      const auto lifted = lift_morphism(phi_table(g, p), heis_lcs());
      const auto rep = is_p_periodic(lifted, p, 3 * p);
      ASSERT_TRUE(rep.periodic());
      ASSERT_TRUE(rep.agree);
      const auto ga = random_periodic_abelian(line(3), p, rng);
      ASSERT_TRUE(is_p_periodic(lift_morphism(phi_table(ga, p), line(3)), p, 3 * p).periodic());
    }
  }
}

// ---------------------------------------------------------------------------
// Output functions

TEST(FExpr, EvaluatesAndBounds) {
  const auto f = FExpr::parse("e(x) * tent(y) + 0.5*cos(z)");
  EXPECT_EQ(f.arity(), 3);
  EXPECT_NEAR(f.sup_bound(), 1.5, 1e-12);
  const auto v = f({0.25, 0.5, 0.0});
  EXPECT_NEAR(v.real(), 0.5, 1e-12);
  EXPECT_NEAR(v.imag(), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(FExpr::parse("e(t0 - t1)")({0.3, 0.3}) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(FExpr::parse("(x - 1/2)^2 * 4")({0.0}).real(), 1.0, 1e-12);
  EXPECT_THROW(FExpr::parse("x / y"), ParseError);
  EXPECT_THROW(FExpr::parse("e(x"), ParseError);
  EXPECT_THROW(FExpr::parse("foo(x)"), ParseError);
  EXPECT_THROW(FExpr::parse("x^y"), ParseError);
}

TEST(FExpr, LipschitzEstimate) {
  const double est = FExpr::parse("e(x)").lipschitz_estimate(1, 2000, 1);
  EXPECT_LE(est, 2 * std::numbers::pi * (1 + 1e-9));
  EXPECT_GE(est, 2 * std::numbers::pi * 0.95);
  EXPECT_NEAR(FExpr::parse("tent(x)").lipschitz_estimate(1, 2000, 1), 2.0, 0.05);
}
