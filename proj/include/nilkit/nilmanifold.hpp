#pragma once

// Coset nilmanifolds G/Gamma with Gamma = integer Mal'cev coordinates.

#include <optional>
#include <string>
#include <vector>

#include "nilkit/fexpr.hpp"
#include "nilkit/filtered_group.hpp"
#include "nilkit/gowers.hpp"
#include "nilkit/pairwise_sum.hpp"

namespace nilkit {

template <Carrier C>
bool in_lattice(const C& carrier, const typename C::Element& g) {
  const RationalVector c = carrier.coordinates(g);
  for (Eigen::Index j = 0; j < c.size(); ++j) {
    if (!is_integer(c(j))) return false;
  }
  return true;
}

template <Carrier C>
struct Reduction {
  /// Canonical representative, every coordinate in [0, 1).
  typename C::Element rep;
  /// Lattice element with g = rep * gamma.
  typename C::Element gamma;
};

/// Walks the coordinates in Mal'cev order and right-multiplies by the
/// elementary lattice element that moves the current coordinate into [0, 1).
template <Carrier C>
Reduction<C> reduce_mod_gamma(const C& carrier, const typename C::Element& g) {
  typename C::Element rep = g;
  typename C::Element correction = carrier.identity();
  for (int j = 0; j < carrier.dimension(); ++j) {
    const Integer t = floor(carrier.coordinates(rep)(j));
    if (t == 0) continue;
    const auto step = coordinate_generator(carrier, j, Rational(-t));
    rep = carrier.multiply(rep, step);
    correction = carrier.multiply(correction, step);
  }
  return {rep, carrier.inverse(correction)};
}

template <Carrier C>
typename C::Element reduce(const C& carrier, const typename C::Element& g) {
  return reduce_mod_gamma(carrier, g).rep;
}

template <Carrier C>
std::vector<double> nil_coordinates(const C& carrier, const typename C::Element& rep) {
  const RationalVector c = carrier.coordinates(rep);
  std::vector<double> out(static_cast<std::size_t>(c.size()));
  for (Eigen::Index j = 0; j < c.size(); ++j) out[j] = to_double(c(j));
  return out;
}

/// Right-multiplies h by a lattice element so that it lands in G_level, or
/// returns nothing when h is not in G_level * Gamma.
template <Carrier C>
std::optional<typename C::Element> correct_into_level(const FilteredGroup<C>& group,
                                                      const typename C::Element& h, int level) {
  const C& c = group.carrier();
  typename C::Element r = h;
  for (int j = 0; j < c.dimension(); ++j) {
    if (group.filtration().level(j) >= level) continue;
    const Rational v = c.coordinates(r)(j);
    if (!is_integer(v)) return std::nullopt;
    if (v != 0) r = c.multiply(r, coordinate_generator(c, j, -v));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Periodicity

struct PeriodicityReport {
  bool window_ok = true;
  /// First n in the window with g(n)^{-1} g(n + p) outside Gamma.
  std::optional<std::int64_t> counterexample;
  /// Exact test independent of the window.
  std::optional<bool> algebraic_ok;
  bool agree = true;
  bool periodic() const { return window_ok && algebraic_ok.value_or(true); }
};

/// g(n+p) - g(n) = sum_j c_j binom(n, j) with c_j = sum_{i>j} binom(p, i-j) g_i;
/// it is lattice-valued for every n iff every c_j is integral.
inline bool abelian_periodic_exact(const PolySeq<AbelianGroup>& g, std::int64_t p) {
  for (int j = 0; j < g.length(); ++j) {
    RationalVector c = RationalVector::Zero(g.group().carrier().dimension());
    for (int i = j + 1; i < g.length(); ++i) c += g.coefficient(i) * Rational(binomial(p, i - j));
    for (Eigen::Index k = 0; k < c.size(); ++k) {
      if (!is_integer(c(k))) return false;
    }
  }
  return true;
}

/// The coordinates of n -> g(n)^{-1} g(n + p) are rational polynomials in n of
/// degree at most 2s (s = degree of the filtration): x and y have degree <= s,
/// and z picks up products of x and y terms. A rational polynomial of degree
/// <= D that is integral at D + 1 consecutive integers is integral everywhere,
/// so checking n = 0..2s decides periodicity.
inline bool heisenberg_periodic_exact(const PolySeq<Heisenberg>& g, std::int64_t p) {
  const Heisenberg& c = g.group().carrier();
  const int s = std::max(g.group().degree(), g.length() - 1);
  for (std::int64_t n = 0; n <= 2 * std::max(s, 0); ++n) {
    if (!in_lattice(c, c.multiply(c.inverse(poly_eval(g, n)), poly_eval(g, n + p)))) return false;
  }
  return true;
}

template <Carrier C>
PeriodicityReport is_p_periodic(const PolySeq<C>& g, std::int64_t p, std::int64_t window) {
  if (p < 1) throw MismatchError("period must be >= 1");
  const C& c = g.group().carrier();
  PeriodicityReport r;
  for (std::int64_t n = -window; n <= window; ++n) {
    const auto q = c.multiply(c.inverse(poly_eval(g, n)), poly_eval(g, n + p));
    if (!in_lattice(c, q)) {
      r.window_ok = false;
      r.counterexample = n;
      break;
    }
  }
  if constexpr (std::is_same_v<C, AbelianGroup>) {
    r.algebraic_ok = abelian_periodic_exact(g, p);
  } else {
    r.algebraic_ok = heisenberg_periodic_exact(g, p);
  }
  r.agree = *r.algebraic_ok == r.window_ok;
  return r;
}

// ---------------------------------------------------------------------------
// Nilsequences

template <Carrier C>
struct Nilsequence {
  PolySeq<C> poly;
  FExpr F;
  std::int64_t period = 1;
  /// Declared Lipschitz constant, compared against sampled difference quotients.
  double lipschitz = 0.0;
};

/// Rejects output functions whose syntactic sup bound exceeds 1 or that read
/// more coordinates than the carrier has.
template <Carrier C>
void validate(const Nilsequence<C>& ns) {
  if (ns.F.arity() > ns.poly.group().carrier().dimension()) {
    throw MismatchError("F reads more coordinates than the nilmanifold has");
  }
  if (ns.F.sup_bound() > 1.0 + 1e-12) {
    throw MismatchError("F is not provably 1-bounded (bound " +
                        std::to_string(ns.F.sup_bound()) + ")");
  }
  if (ns.period < 1) throw MismatchError("period must be >= 1");
}

template <Carrier C>
Complex nilsequence_eval(const Nilsequence<C>& ns, const Integer& n) {
  const C& c = ns.poly.group().carrier();
  return ns.F(nil_coordinates(c, reduce(c, poly_eval(ns.poly, n))));
}

template <Carrier C>
Complex nilsequence_eval(const Nilsequence<C>& ns, std::int64_t n) {
  return nilsequence_eval(ns, Integer(n));
}

/// x -> F(g(x) Gamma) on Z_N, N = ns.period.
template <Carrier C>
Signal nilsequence_signal(const Nilsequence<C>& ns) {
  const auto group = FiniteAbelianGroup::cyclic(ns.period);
  std::vector<Complex> v(static_cast<std::size_t>(ns.period));
  for (std::int64_t x = 0; x < ns.period; ++x) v[x] = nilsequence_eval(ns, x);
  return Signal(group, std::move(v));
}

struct Correlation {
  Complex value;
  bool periodic = true;
  std::vector<std::string> warnings;
};

/// E_{x in Z_p} f(x) conj(F(g(x) Gamma)). A sequence that is not p-periodic
/// gives a warning, or an error when strict.
template <Carrier C>
Correlation correlate(const Signal& f, const Nilsequence<C>& ns, bool strict = false) {
  if (!f.group().is_cyclic()) throw MismatchError("correlate needs a signal on Z_p");
  const std::int64_t p = f.group().order();
  Correlation out;
  if (ns.period != p) {
    out.warnings.push_back("nilsequence period " + std::to_string(ns.period) +
                           " differs from the signal's group order " + std::to_string(p));
  }
  const auto report = is_p_periodic(ns.poly, p, p);
  out.periodic = report.periodic();
  if (!out.periodic) {
    out.warnings.push_back("polynomial sequence is not " + std::to_string(p) +
                           "-periodic modulo the lattice");
  }
  if (strict && !out.warnings.empty()) throw MismatchError(out.warnings.front());
  PairwiseSum<Complex> s;
  for (std::int64_t x = 0; x < p; ++x) s.add(f[x] * std::conj(nilsequence_eval(ns, x)));
  out.value = s.total() / static_cast<double>(p);
  return out;
}

// ---------------------------------------------------------------------------
// Maps Z_N -> G/Gamma and their polynomial lifts

/// Canonical representatives n -> reduce(g(n)), n = 0..N-1.
template <Carrier C>
std::vector<typename C::Element> phi_table(const PolySeq<C>& g, std::int64_t n) {
  const C& c = g.group().carrier();
  std::vector<typename C::Element> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) out.push_back(reduce(c, poly_eval(g, i)));
  return out;
}

/// Lifts phi: Z_N -> G/Gamma (given by representatives) to a polynomial
/// sequence g with pi(g(n)) = phi(n mod N) on [0, 2N).
///
/// Level by level, j = 0..s: on the coordinates of level exactly j, the map is
/// fitted mod 1 by Newton differences a_l at n = 0..s; b_l is the element with
/// coordinates a_l in [0, 1) there and zeros elsewhere, and must lie in G_l.
/// Dividing out alpha_j(n) = prod_l b_l^{binom(n, l)} and correcting by the
/// lattice moves the residual into G_{j+1}. The lift is alpha_0 ... alpha_s.
template <Carrier C>
PolySeq<C> lift_morphism(const std::vector<typename C::Element>& phi,
                         const FilteredGroup<C>& group) {
  using E = typename C::Element;
  const C& c = group.carrier();
  const std::int64_t N = static_cast<std::int64_t>(phi.size());
  if (N < 1) throw MismatchError("empty map");
  const int s = std::max(group.degree(), 0);
  const std::int64_t span = std::max<std::int64_t>(2 * N, s + 1);

  std::vector<E> residual(static_cast<std::size_t>(span));
  for (std::int64_t n = 0; n < span; ++n) {
    residual[n] = phi[n % N];
    if (!group.contains(residual[n], 0)) {
      throw LiftError(0, "value at " + std::to_string(n % N) + " is outside G_0");
    }
  }
  std::vector<E> psi(static_cast<std::size_t>(span), c.identity());

  for (int j = 0; j <= s; ++j) {
    std::vector<int> coords;
    for (int k = 0; k < c.dimension(); ++k) {
      if (group.filtration().level(k) == j) coords.push_back(k);
    }
    if (!coords.empty()) {
      std::vector<RationalVector> a(s + 1);
      for (int n = 0; n <= s; ++n) {
        const RationalVector x = c.coordinates(residual[n]);
        a[n] = RationalVector(coords.size());
        for (std::size_t k = 0; k < coords.size(); ++k) a[n](k) = frac(x(coords[k]));
      }
      std::vector<E> b(s + 1);
      for (int l = 0; l <= s; ++l) {
        RationalVector full = RationalVector::Zero(c.dimension());
        for (std::size_t k = 0; k < coords.size(); ++k) {
          Rational acc = 0;
          for (int i = 0; i <= l; ++i) {
            const Integer sign = ((l - i) % 2 == 0) ? 1 : -1;
            acc += Rational(sign * binomial(Integer(l), i)) * a[i](k);
          }
          full(coords[k]) = frac(acc);
        }
        b[l] = c.from_coordinates(full);
        if (!group.contains(b[l], l)) {
          throw LiftError(j, "level " + std::to_string(j) + " needs a degree-" +
                                 std::to_string(l) + " term outside G_" + std::to_string(l));
        }
      }
      for (std::int64_t n = 0; n < span; ++n) {
        E alpha = c.identity();
        for (int l = 0; l <= s; ++l) alpha = c.multiply(alpha, c.power(b[l], binomial(n, l)));
        psi[n] = c.multiply(psi[n], alpha);
        residual[n] = c.multiply(c.inverse(alpha), residual[n]);
      }
    }
    for (std::int64_t n = 0; n < span; ++n) {
      auto corrected = correct_into_level(group, residual[n], j + 1);
      if (!corrected) {
        throw LiftError(j, "residual at n = " + std::to_string(n) + " is not in G_" +
                               std::to_string(j + 1) + " * Gamma");
      }
      residual[n] = *corrected;
    }
  }

  std::vector<E> head(psi.begin(), psi.begin() + (s + 1));
  PolySeq<C> g = taylor_from_values(head, group);
  for (std::int64_t n = 0; n < 2 * N; ++n) {
    if (!c.equal(reduce(c, poly_eval(g, n)), reduce(c, phi[n % N]))) {
      throw LiftError(s, "lift disagrees with the map at n = " + std::to_string(n));
    }
  }
  return g;
}

struct MorphismCheckOptions {
  int samples = 200;
  std::uint64_t seed = 0;
};

/// One-sided test that phi: Z_N -> G/Gamma sends sampled n-cubes of Z_N to
/// cubes of C^n(G_.)/C^n(Gamma). The lattice corrections are chosen during
/// the face peeling: at vertex v, any gamma with prefix^{-1} phi(q(v)) gamma
/// in G_{|v|} will do, and none exists exactly when the image is not a cube.
template <Carrier C>
bool morphism_check(const std::vector<typename C::Element>& phi, const FilteredGroup<C>& group,
                    int n_dim, const MorphismCheckOptions& opt = {}) {
  const C& c = group.carrier();
  const auto zn = FiniteAbelianGroup::cyclic(static_cast<std::int64_t>(phi.size()));
  Rng rng(opt.seed);
  const auto order = canonical_vertex_order(n_dim);
  for (int s = 0; s < opt.samples; ++s) {
    const GroupCube q = sample_cube(zn, n_dim, rng);
    std::vector<typename C::Element> prefix(q.size(), c.identity());
    for (Vertex v : order) {
      const auto h = c.multiply(c.inverse(prefix[v]), phi[q[v](0)]);
      const auto g = correct_into_level(group, h, weight(v));
      if (!g) return false;
      const Face f = Face::upper(n_dim, v);
      for (Vertex w = 0; w < q.size(); ++w) {
        if (f.contains(w)) prefix[w] = c.multiply(prefix[w], *g);
      }
    }
  }
  return true;
}

}  // namespace nilkit
