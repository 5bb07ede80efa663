#pragma once

// Seeded random elements and polynomial sequences for tests and demos.

#include "nilkit/filtered_group.hpp"
#include "nilkit/nilmanifold.hpp"

namespace nilkit {

/// num / den with den in [1, max_den] and num in [-3 max_den, 3 max_den].
inline Rational random_rational(Rng& rng, int max_den) {
  const std::int64_t den = rng.between(1, max_den);
  const std::int64_t num = rng.between(-3 * max_den, 3 * max_den);
  return Rational(num, den);
}

/// Random element of G_level: the coordinates allowed at that level are drawn
/// with random_rational, all others are zero.
template <Carrier C>
typename C::Element random_element(const FilteredGroup<C>& group, int level, Rng& rng,
                                   int max_den = 12) {
  RationalVector c = RationalVector::Zero(group.carrier().dimension());
  for (int j = 0; j < c.size(); ++j) {
    if (group.filtration().level(j) >= std::max(level, 0)) c(j) = random_rational(rng, max_den);
  }
  return group.carrier().from_coordinates(c);
}

/// Random Taylor coefficients g_i in G_i, i = 0..degree.
template <Carrier C>
PolySeq<C> random_polyseq(const FilteredGroup<C>& group, Rng& rng, int max_den = 12) {
  std::vector<typename C::Element> coeffs;
  for (int i = 0; i <= std::max(group.degree(), 0); ++i) {
    coeffs.push_back(random_element(group, i, rng, max_den));
  }
  return PolySeq<C>(group, std::move(coeffs));
}

/// Random p-periodic sequence on Q^m. Per coordinate, the differences
/// c_j = sum_{i>j} binom(p, i-j) g_i are drawn as random integers, and the
/// coefficients are solved for from the top down:
///   g_{j+1} = (c_j - sum_{i>=j+2} binom(p, i-j) g_i) / p.
inline PolySeq<AbelianGroup> random_periodic_abelian(const FilteredGroup<AbelianGroup>& group,
                                                     std::int64_t p, Rng& rng) {
  const int m = group.carrier().dimension();
  const int s = std::max(group.degree(), 0);
  std::vector<RationalVector> g(s + 1, RationalVector::Zero(m));
  for (int k = 0; k < m; ++k) {
    const int top = group.filtration().level(k);
    if (top < 0) continue;
    g[0](k) = random_rational(rng, 12);
    for (int j = top - 1; j >= 0; --j) {
      Rational rest = 0;
      for (int i = j + 2; i <= top; ++i) rest += Rational(binomial(p, i - j)) * g[i](k);
      const Rational cj = rng.between(-2 * p, 2 * p);
      g[j + 1](k) = (cj - rest) / Rational(p);
    }
  }
  return PolySeq<AbelianGroup>(group, std::move(g));
}

/// Random p-periodic quadratic sequence on the Heisenberg group with the lower
/// central series. With g_1 = (a, b, c) and g_2 = (0, 0, d),
///   g(n)^{-1} g(n+p) = g_1^p g_2^{np + binom(p,2)},
/// which is integral for all n iff pa, pb, pd are integers and
/// pc + binom(p,2)(ab + d) is an integer.
inline PolySeq<Heisenberg> random_periodic_heisenberg(const FilteredGroup<Heisenberg>& group,
                                                      std::int64_t p, Rng& rng) {
  const Heisenberg& h = group.carrier();
  const Rational P(p);
  const Rational a = Rational(rng.between(-2 * p, 2 * p)) / P;
  const Rational b = Rational(rng.between(-2 * p, 2 * p)) / P;
  const Rational d = Rational(rng.between(-2 * p, 2 * p)) / P;
  const Rational m = rng.between(-3 * p, 3 * p);
  const Rational c = (m - Rational(binomial(p, 2)) * (a * b + d)) / P;
  const auto g0 = h.from_xyz(random_rational(rng, 12), random_rational(rng, 12),
                             random_rational(rng, 12));
  return PolySeq<Heisenberg>(group, {g0, h.from_xyz(a, b, c), h.from_xyz(0, 0, d)});
}

}  // namespace nilkit
