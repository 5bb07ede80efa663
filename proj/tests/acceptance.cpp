// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "nilkit/balance.hpp"
#include "nilkit/cocycle.hpp"
#include "nilkit/finprob.hpp"
#include "nilkit/gowers.hpp"
#include "nilkit/nilmanifold.hpp"
#include "nilkit/samplers.hpp"

using namespace nilkit;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Check {
  std::string id;
  std::string title;
  double limit_s;  // 0 for no runtime bound
  std::function<Outcome()> body;
};

// Collects failures without stopping at the first one.
class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) {
      ++failed_;
      if (first_.empty()) first_ = what;
    }
  }
  void near(double a, double b, double tol, const std::string& what) {
    std::ostringstream s;
    s << what << ": " << a << " vs " << b;
    expect(std::abs(a - b) <= tol, s.str());
  }
  Outcome outcome(const std::string& summary = "") const {
    std::ostringstream s;
    s << checks_ - failed_ << "/" << checks_ << " checks";
    if (!summary.empty()) s << "; " << summary;
    if (failed_) s << "; first failure: " << first_;
    return {failed_ == 0, s.str()};
  }

 private:
  long checks_ = 0, failed_ = 0;
  std::string first_;
};

RationalVector q1(const Rational& a) {
  RationalVector v(1);
  v(0) = a;
  return v;
}

Outcome ac1() {
  Tally t;
  for (std::int64_t N = 1; N <= 12; ++N) {
    const Signal one = Signal::constant(FiniteAbelianGroup::cyclic(N), 1.0);
    for (int d = 1; d <= 4; ++d) {
      t.near(u_norm_naive(one, d), 1.0, 1e-12, "U" + std::to_string(d) + " of 1 on Z" + std::to_string(N));
    }
  }
  const auto Z5 = FiniteAbelianGroup::cyclic(5);
  const Signal chr = Signal::character(Z5, {1});
  const Signal quad = Signal::quadratic_phase(Z5, 1);
  t.near(u_norm_naive(chr, 2), 1.0, 1e-9, "U2 of character");
  t.near(u2_fourier(chr), 1.0, 1e-9, "Fourier U2 of character");
  t.near(u_norm_naive(quad, 2), std::pow(5.0, -0.25), 1e-9, "U2 of quadratic phase");
  t.near(u2_fourier(quad), std::pow(5.0, -0.25), 1e-9, "Fourier U2 of quadratic phase");
  t.near(u_norm_naive(quad, 3), 1.0, 1e-9, "U3 of quadratic phase");
  return t.outcome();
}

Outcome ac2() {
  Tally t;
  double worst = 0.0;
  for (std::int64_t N : {5, 8, 9, 12}) {
    const auto G = FiniteAbelianGroup::cyclic(N);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const Signal f = Signal::random(G, 1000 * N + seed);
      for (int d = 2; d <= 4; ++d) {
        const double naive = u_norm_naive(f, d);
        const double rec = u_norm_recursive(f, d);
        worst = std::max(worst, std::abs(naive - rec));
        t.near(rec, naive, 1e-9, "recursive Z" + std::to_string(N));
        if (d == 2) {
          worst = std::max(worst, std::abs(naive - u2_fourier(f)));
          t.near(u2_fourier(f), naive, 1e-9, "fft Z" + std::to_string(N));
        }
      }
    }
  }
  std::ostringstream s;
  s << "max deviation " << worst;
  return t.outcome(s.str());
}

Outcome ac3() {
  Tally t;
  const std::vector<FiniteAbelianGroup> groups{FiniteAbelianGroup::cyclic(5),
                                               FiniteAbelianGroup::cyclic(8),
                                               FiniteAbelianGroup::parse("Z3xZ3")};
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto& G = groups[i % groups.size()];
    const Signal f = Signal::random(G, 2 * i + 7), h = Signal::random(G, 2 * i + 8);
    const Complex c(std::cos(0.1 * static_cast<double>(i)), 0.5);
    for (int d = 2; d <= 4; ++d) {
      const double nf = u_norm_recursive(f, d), nh = u_norm_recursive(h, d);
      t.expect(u_norm_recursive(f + h, d) <= nf + nh + 1e-9, "triangle");
      t.near(u_norm_recursive(f * c, d), std::abs(c) * nf, 1e-9, "homogeneity");
      if (d < 4) t.expect(nf <= u_norm_recursive(f, d + 1) + 1e-9, "monotone");
    }
    t.expect(u_norm_recursive(f, 4) <= f.bound() + 1e-9, "bounded by sup");
  }
  return t.outcome();
}

Outcome ac4() {
  Tally t;
  const auto Z5 = FiniteAbelianGroup::cyclic(5);
  std::uint64_t autos = 0, concats = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    CircleMap g;
    for (int x = 0; x < 5; ++x) g.push_back(Rational(rng.between(0, 30), 31));
    const auto r = check_cocycle_axioms(coboundary_from(Z5, g, 1));
    t.expect(r.pass(), "coboundary seed " + std::to_string(seed));
    t.expect(r.automorphism_checks == 125u * 8u, "125 cubes x 8 automorphisms");
    autos += r.automorphism_checks;
    concats += r.concatenation_checks;
  }
  t.expect(enumerate_cubes(Z5, 2).size() == 125u, "cube count");
  return t.outcome(std::to_string(autos) + " automorphism and " + std::to_string(concats) +
                   " concatenation checks");
}

template <Carrier C>
void lift_round_trip(Tally& t, const FilteredGroup<C>& group, const PolySeq<C>& g, std::int64_t p,
                     const std::string& what) {
  const C& c = group.carrier();
  const auto phi = phi_table(g, p);
  try {
    const auto lifted = lift_morphism(phi, group);
    bool ok = true;
    for (std::int64_t n = 0; n < 2 * p; ++n) {
      ok = ok && c.equal(reduce(c, poly_eval(lifted, n)), reduce(c, poly_eval(g, n)));
    }
    t.expect(ok, what);
  } catch (const LiftError& e) {
    t.expect(false, what + ": " + e.what());
  }
}

Outcome ac5() {
  Tally t;
  const Heisenberg H;
  const FilteredGroup<Heisenberg> heis(H, Filtration({1, 1, 2}));
  int count = 0;
  for (std::int64_t p : {5, 7, 31}) {
    Rng rng(derive_seed(55, static_cast<std::uint64_t>(p)));
    for (int i = 0; i < 100; ++i) {
      const int deg = 1 + i % 3;
      const FilteredGroup<AbelianGroup> ab(AbelianGroup(2), Filtration({deg, std::max(deg - 1, 0)}));
      lift_round_trip(t, ab, random_periodic_abelian(ab, p, rng), p, "abelian p=" + std::to_string(p));
      lift_round_trip(t, heis, random_periodic_heisenberg(heis, p, rng), p, "heis p=" + std::to_string(p));
      count += 2;
    }
  }
  return t.outcome(std::to_string(count) + " round trips");
}

Outcome ac6() {
  Tally t;
  const Heisenberg H;
  const FilteredGroup<Heisenberg> heis(H, Filtration({1, 1, 2}));
  const FilteredGroup<AbelianGroup> ab(AbelianGroup(1), Filtration({3}));
  int periodic = 0, failing = 0;
  for (int i = 0; i < 200; ++i) {
    Rng rng(derive_seed(66, static_cast<std::uint64_t>(i)));
    const std::int64_t p = std::vector<std::int64_t>{5, 7, 31}[i % 3];
    const bool design_fail = (i / 3) % 2 == 1;
    PeriodicityReport r;
    if (i % 2 == 0) {
      auto g = random_periodic_abelian(ab, p, rng);
      if (design_fail) {
        auto coeffs = g.coefficients();
        coeffs[3](0) += Rational(1, p * p);
        g = PolySeq<AbelianGroup>(ab, coeffs);
      }
      r = is_p_periodic(g, p, p);
    } else {
      auto g = random_periodic_heisenberg(heis, p, rng);
      if (design_fail) {
        // Moving the z-coordinate of g_1 off the lattice breaks periodicity.
        auto coeffs = g.coefficients();
        coeffs[1] = H.multiply(coeffs[1], H.from_xyz(0, 0, Rational(1, 2 * p)));
        g = PolySeq<Heisenberg>(heis, coeffs);
      }
      r = is_p_periodic(g, p, p);
    }
    t.expect(r.agree, "window and algebraic tests disagree at instance " + std::to_string(i));
    t.expect(r.periodic() != design_fail, "wrong verdict at instance " + std::to_string(i));
    (r.periodic() ? periodic : failing)++;
  }
  return t.outcome(std::to_string(periodic) + " periodic, " + std::to_string(failing) +
                   " designed failures");
}

Outcome ac7() {
  Tally t;
  constexpr std::int64_t p = 31;
  const FilteredGroup<AbelianGroup> line(AbelianGroup(1), Filtration({2}));
  const PolySeq<AbelianGroup> g(line, {q1(0), q1(Rational(1, p)), q1(Rational(2, p))});
  const Nilsequence<AbelianGroup> ns{g, FExpr::parse("e(t)"), p, 0.0};
  validate(ns);
  const Signal f = nilsequence_signal(ns);
  const auto corr = correlate(f, ns, true);
  t.near(std::abs(corr.value - 1.0), 0.0, 1e-12, "correlation");
  const double u3 = u_norm_recursive(f, 3);
  t.near(u3, 1.0, 1e-9, "U3");
  const double l2 = l2_norm_squared(f);
  t.near(std::abs(corr.value - l2), 0.0, 1e-12, "correlation equals L2 norm squared");
  t.expect(l2 >= std::pow(u3, 8) - 1e-9, "L2^2 >= U3^8");
  for (double delta : {1.0, 0.75, 0.5, 0.25, 0.1, 0.01}) {
    t.expect(std::abs(corr.value) >= std::pow(delta, 8) / 2, "delta bound");
  }
  std::ostringstream s;
  s << "correlation " << std::abs(corr.value) << ", U3 " << u3;
  return t.outcome(s.str());
}

Outcome ac8() {
  Tally t;
  const auto a = find_morphisms(FiniteAbelianGroup::cyclic(3), 1, FiniteAbelianGroup::cyclic(2), 2);
  const auto b = find_morphisms(FiniteAbelianGroup::cyclic(4), 1, FiniteAbelianGroup::cyclic(3), 1);
  t.expect(a.size() == 2u, "Z3 -> D2(Z2) count " + std::to_string(a.size()));
  t.expect(b.size() == 3u, "Z4 -> D1(Z3) count " + std::to_string(b.size()));
  for (const auto* maps : {&a, &b}) {
    for (const auto& m : *maps) {
      bool constant = true;
      for (const auto& v : m) constant = constant && v == m.front();
      t.expect(constant, "non-constant morphism found");
    }
  }
  return t.outcome(std::to_string(a.size()) + " and " + std::to_string(b.size()) + " morphisms");
}

Outcome ac9() {
  Tally t;
  const auto T1 = BalanceTarget::torus(1, 1);
  BalanceOptions opt;
  opt.samples = 10000;
  opt.seed = 2024;
  opt.R = 8;
  opt.bootstrap = 0;
  const double d11 = balance_distance(T1, linear_circle_map(11, 1), 1, opt).d;
  const double d31 = balance_distance(T1, linear_circle_map(31, 1), 1, opt).d;
  const double d101 = balance_distance(T1, linear_circle_map(101, 1), 1, opt).d;
  t.expect(d101 < d31, "d(101) < d(31)");
  t.expect(d31 < d11, "d(31) < d(11)");
  const auto c = balance_of(T1, PointMap(11, std::vector<double>{0.0}), {0.3}, opt);
  bool n1_fails = false;
  for (const auto& row : c.table) n1_fails = n1_fails || (row.n == 1 && !row.pass);
  t.expect(n1_fails && !c.verdicts.front().second, "constant map fails b = 0.3");
  std::ostringstream s;
  s << "d(11)=" << d11 << " d(31)=" << d31 << " d(101)=" << d101;
  return t.outcome(s.str());
}

Outcome ac10() {
  Tally t;
  std::ostringstream s;
  for (const auto& r : {run_level_set_suite(2024, 1000), run_intersection_suite(2025, 1000),
                        run_invariant_suite(2026, 1000)}) {
    t.expect(r.instances == 1000u, r.lemma + " instance count");
    t.expect(r.violations == 0u, r.lemma + " violations " + std::to_string(r.violations));
    s << r.lemma << " worst ratio " << r.worst_ratio << " ";
  }
  return t.outcome(s.str());
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome ac11() {
  Tally t;
  const Signal big = Signal::random(FiniteAbelianGroup::cyclic(65536), 1);
  auto t0 = std::chrono::steady_clock::now();
  const double u2 = u2_fourier(big);
  const double fft_s = seconds_since(t0);
  t.expect(fft_s < 1.0, "U2 FFT on Z65536 took " + std::to_string(fft_s) + " s");
  t.expect(std::isfinite(u2) && u2 > 0.0, "U2 value");

  const Signal mid = Signal::random(FiniteAbelianGroup::cyclic(1024), 2);
  t0 = std::chrono::steady_clock::now();
  const double u3 = u_norm_recursive(mid, 3);
  const double rec_s = seconds_since(t0);
  t.expect(rec_s < 10.0, "U3 recursive on Z1024 took " + std::to_string(rec_s) + " s");
  t.expect(std::isfinite(u3) && u3 > 0.0, "U3 value");
  std::ostringstream s;
  s << "fft " << fft_s << " s, recursive " << rec_s << " s";
  return t.outcome(s.str());
}

}  // namespace

int main() {
  const std::vector<Check> checks{
      {"AC1", "norm identities", 1, ac1},
      {"AC2", "naive vs recursive/FFT evaluators", 30, ac2},
      {"AC3", "seminorm and monotonicity", 0, ac3},
      {"AC4", "cocycle axioms for coboundaries on Z5", 5, ac4},
      {"AC5", "lift round trip", 60, ac5},
      {"AC6", "periodicity tests agree", 0, ac6},
      {"AC7", "inverse demo on Z31", 0, ac7},
      {"AC8", "coprime-order morphism counts", 5, ac8},
      {"AC9", "balance of linear maps", 30, ac9},
      {"AC10", "finite probability lemma suites", 60, ac10},
      {"AC11", "performance targets", 0, ac11},
  };
  int failures = 0;
  for (const auto& c : checks) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = seconds_since(t0);
    if (c.limit_s > 0 && s >= c.limit_s) {
      o.pass = false;
      o.detail += "; over the " + std::to_string(static_cast<int>(c.limit_s)) + " s limit";
    }
    if (!o.pass) ++failures;
    std::printf("%s %s %s (%.3f s) %s\n", c.id.c_str(), o.pass ? "PASS" : "FAIL", c.title.c_str(), s,
                o.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(checks.size()) - failures, checks.size());
  return failures == 0 ? 0 : 1;
}
