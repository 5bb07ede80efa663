#pragma once

// Filtered nilpotent groups with exact rational arithmetic, polynomial
// sequences in Taylor form, and the cube groups C^n(G_.).
//
// A carrier is a group with Mal'cev coordinates c_1..c_d. A filtration is
// recorded as one level per coordinate: coordinate j belongs to G_i exactly
// for i <= level(j), and level -1 removes it from the group altogether. So
//   G_i = { g : c_j(g) = 0 whenever level(j) < i }.

#include <concepts>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nilkit/error.hpp"
#include "nilkit/group_cube.hpp"
#include "nilkit/rational.hpp"
#include "nilkit/rng.hpp"

namespace nilkit {

template <class C>
concept Carrier = requires(const C& c, const typename C::Element& a, const Integer& n,
                           const RationalVector& coords) {
  { c.dimension() } -> std::convertible_to<int>;
  { c.identity() } -> std::same_as<typename C::Element>;
  { c.multiply(a, a) } -> std::same_as<typename C::Element>;
  { c.inverse(a) } -> std::same_as<typename C::Element>;
  { c.power(a, n) } -> std::same_as<typename C::Element>;
  { c.coordinates(a) } -> std::same_as<RationalVector>;
  { c.from_coordinates(coords) } -> std::same_as<typename C::Element>;
  { c.equal(a, a) } -> std::same_as<bool>;
  { c.name() } -> std::convertible_to<std::string>;
};

/// Q^m under addition; lattice Z^m.
class AbelianGroup {
 public:
  using Element = RationalVector;

  explicit AbelianGroup(int m) : m_(m) {
    if (m < 1) throw MismatchError("abelian carrier needs m >= 1");
  }
  int dimension() const { return m_; }
  std::string name() const { return "abelian"; }
  Element identity() const { return Element::Zero(m_); }
  Element multiply(const Element& a, const Element& b) const { return a + b; }
  Element inverse(const Element& a) const { return -a; }
  Element power(const Element& a, const Integer& n) const { return a * Rational(n); }
  RationalVector coordinates(const Element& a) const { return a; }
  Element from_coordinates(const RationalVector& c) const {
    if (c.size() != m_) throw MismatchError("coordinate vector has the wrong length");
    return c;
  }
  bool equal(const Element& a, const Element& b) const {
    return a.size() == b.size() && a == b;
  }

 private:
  int m_;
};

/// Unitriangular 3x3 rational matrices
///   [1 x z]
///   [0 1 y]
///   [0 0 1]
/// with coordinates (x, y, z); lattice = integer entries.
class Heisenberg {
 public:
  using Element = Eigen::Matrix<Rational, 3, 3>;

  int dimension() const { return 3; }
  std::string name() const { return "heis"; }
  Element identity() const { return Element::Identity(); }
  Element multiply(const Element& a, const Element& b) const { return a * b; }
  Element inverse(const Element& a) const {
    // (I + N)^{-1} = I - N + N^2 for nilpotent N of order 3.
    const Element n = a - Element::Identity();
    return Element::Identity() - n + n * n;
  }
  Element power(const Element& a, const Integer& k) const {
    const Element n = a - Element::Identity();
    return Element::Identity() + n * Rational(k) + (n * n) * Rational(binomial(k, 2));
  }
  RationalVector coordinates(const Element& a) const {
    RationalVector c(3);
    c << a(0, 1), a(1, 2), a(0, 2);
    return c;
  }
  Element from_coordinates(const RationalVector& c) const {
    if (c.size() != 3) throw MismatchError("Heisenberg coordinates are (x, y, z)");
    Element e = Element::Identity();
    e(0, 1) = c(0);
    e(1, 2) = c(1);
    e(0, 2) = c(2);
    return e;
  }
  Element from_xyz(const Rational& x, const Rational& y, const Rational& z) const {
    RationalVector c(3);
    c << x, y, z;
    return from_coordinates(c);
  }
  bool equal(const Element& a, const Element& b) const { return a == b; }
};

/// Elementary one-parameter subgroup of coordinate j, evaluated at t.
template <Carrier C>
typename C::Element coordinate_generator(const C& carrier, int j, const Rational& t) {
  RationalVector c = RationalVector::Zero(carrier.dimension());
  c(j) = t;
  return carrier.from_coordinates(c);
}

template <Carrier C>
typename C::Element commutator(const C& carrier, const typename C::Element& a,
                               const typename C::Element& b) {
  return carrier.multiply(carrier.multiply(carrier.inverse(a), carrier.inverse(b)),
                          carrier.multiply(a, b));
}

template <Carrier C>
std::string element_to_string(const C& carrier, const typename C::Element& a) {
  const RationalVector c = carrier.coordinates(a);
  std::string s = "(";
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (i) s += ",";
    s += to_string(c(i));
  }
  return s + ")";
}

// ---------------------------------------------------------------------------

class Filtration {
 public:
  Filtration() = default;
  explicit Filtration(std::vector<int> levels) : levels_(std::move(levels)) {
    for (int l : levels_) {
      if (l < -1) throw MismatchError("filtration levels must be >= -1");
    }
  }
  /// Every coordinate at level k: G_0 = ... = G_k = carrier, G_{k+1} = {id}.
  static Filtration uniform(int dimension, int k) {
    return Filtration(std::vector<int>(static_cast<std::size_t>(dimension), k));
  }

  const std::vector<int>& levels() const { return levels_; }
  int level(int j) const { return levels_[j]; }
  int size() const { return static_cast<int>(levels_.size()); }
  /// Largest s with G_s nontrivial; -1 for the trivial filtration.
  int degree() const {
    int d = -1;
    for (int l : levels_) d = std::max(d, l);
    return d;
  }
  /// Term j is G_{j + shift}.
  Filtration shifted(int shift) const {
    if (shift < 0) throw MismatchError("shift must be >= 0");
    std::vector<int> out(levels_.size());
    for (std::size_t j = 0; j < levels_.size(); ++j) {
      out[j] = levels_[j] < shift ? -1 : levels_[j] - shift;
    }
    return Filtration(std::move(out));
  }

  friend bool operator==(const Filtration&, const Filtration&) = default;

 private:
  std::vector<int> levels_;
};

template <Carrier C>
class FilteredGroup {
 public:
  using Element = typename C::Element;

  FilteredGroup(C carrier, Filtration filtration)
      : carrier_(std::move(carrier)), filtration_(std::move(filtration)) {
    if (filtration_.size() != carrier_.dimension()) {
      throw MismatchError("filtration needs one level per coordinate");
    }
    // [G_i, G_j] <= G_{i+j}, checked on coordinate generators.
    for (int a = 0; a < carrier_.dimension(); ++a) {
      for (int b = 0; b < carrier_.dimension(); ++b) {
        const int la = filtration_.level(a), lb = filtration_.level(b);
        if (la < 0 || lb < 0) continue;
        const Element c = commutator(carrier_, coordinate_generator(carrier_, a, Rational(1)),
                                     coordinate_generator(carrier_, b, Rational(1)));
        if (!contains(c, la + lb)) {
          throw MismatchError("commutator of coordinates " + std::to_string(a) + " and " +
                              std::to_string(b) + " leaves G_" + std::to_string(la + lb));
        }
      }
    }
  }

  const C& carrier() const { return carrier_; }
  const Filtration& filtration() const { return filtration_; }
  int degree() const { return filtration_.degree(); }

  bool contains(const Element& g, int i) const {
    const RationalVector c = carrier_.coordinates(g);
    const int threshold = std::max(i, 0);
    for (int j = 0; j < carrier_.dimension(); ++j) {
      if (filtration_.level(j) < threshold && c(j) != 0) return false;
    }
    return true;
  }

  /// The group G_0 itself with the shifted filtration (G_{j+shift})_j.
  FilteredGroup shifted(int shift) const {
    return FilteredGroup(carrier_, filtration_.shifted(shift));
  }

  // Group operations, so a FilteredGroup can be used wherever a filtered
  // group interface is expected (see is_poly_check).
  Element identity() const { return carrier_.identity(); }
  Element multiply(const Element& a, const Element& b) const { return carrier_.multiply(a, b); }
  Element inverse(const Element& a) const { return carrier_.inverse(a); }
  bool equal(const Element& a, const Element& b) const { return carrier_.equal(a, b); }

 private:
  C carrier_;
  Filtration filtration_;
};

template <Carrier C>
FilteredGroup<C> shifted_filtration(const FilteredGroup<C>& g, int shift) {
  return g.shifted(shift);
}

// ---------------------------------------------------------------------------
// Polynomial sequences

template <Carrier C>
class PolySeq {
 public:
  using Element = typename C::Element;

  PolySeq(FilteredGroup<C> group, std::vector<Element> coefficients)
      : group_(std::move(group)), coefficients_(std::move(coefficients)) {
    if (coefficients_.empty()) coefficients_.push_back(group_.identity());
    for (std::size_t i = 0; i < coefficients_.size(); ++i) {
      if (!group_.contains(coefficients_[i], static_cast<int>(i))) {
        throw FiltrationError(static_cast<int>(i),
                              "Taylor coefficient g_" + std::to_string(i) + " is not in G_" +
                                  std::to_string(i));
      }
    }
  }

  const FilteredGroup<C>& group() const { return group_; }
  const std::vector<Element>& coefficients() const { return coefficients_; }
  const Element& coefficient(int i) const { return coefficients_[i]; }
  int length() const { return static_cast<int>(coefficients_.size()); }

 private:
  FilteredGroup<C> group_;
  std::vector<Element> coefficients_;
};

/// g(n) = g_0 g_1^n g_2^{binom(n,2)} ... g_s^{binom(n,s)}.
template <Carrier C>
typename C::Element poly_eval(const PolySeq<C>& g, const Integer& n) {
  const C& c = g.group().carrier();
  typename C::Element acc = g.coefficient(0);
  for (int i = 1; i < g.length(); ++i) {
    acc = c.multiply(acc, c.power(g.coefficient(i), binomial(n, i)));
  }
  return acc;
}

template <Carrier C>
typename C::Element poly_eval(const PolySeq<C>& g, std::int64_t n) {
  return poly_eval(g, Integer(n));
}

/// Unique Taylor coefficients matching values[0..k] at n = 0..k.
template <Carrier C>
PolySeq<C> taylor_from_values(const std::vector<typename C::Element>& values,
                              const FilteredGroup<C>& group) {
  const C& c = group.carrier();
  std::vector<typename C::Element> coeffs;
  for (std::size_t j = 0; j < values.size(); ++j) {
    typename C::Element partial = c.identity();
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      partial = c.multiply(partial, c.power(coeffs[i], binomial(Integer(j), static_cast<int>(i))));
    }
    coeffs.push_back(c.multiply(c.inverse(partial), values[j]));
    if (!group.contains(coeffs.back(), static_cast<int>(j))) {
      throw FiltrationError(static_cast<int>(j), "recovered Taylor coefficient g_" +
                                                     std::to_string(j) + " is not in G_" +
                                                     std::to_string(j));
    }
  }
  return PolySeq<C>(group, std::move(coeffs));
}

template <class E>
using SequenceMap = std::function<E(const Integer&)>;

template <Carrier C>
SequenceMap<typename C::Element> as_map(const PolySeq<C>& g) {
  return [g](const Integer& n) { return poly_eval(g, n); };
}

/// n -> g(n)^{-1} g(n + h).
template <Carrier C>
SequenceMap<typename C::Element> discrete_derivative(const C& carrier,
                                                     SequenceMap<typename C::Element> g,
                                                     const Integer& h) {
  return [carrier, g = std::move(g), h](const Integer& n) {
    return carrier.multiply(carrier.inverse(g(n)), g(n + h));
  };
}

/// Pointwise product n -> a(n) b(n).
template <Carrier C>
SequenceMap<typename C::Element> pointwise_product(const C& carrier,
                                                   SequenceMap<typename C::Element> a,
                                                   SequenceMap<typename C::Element> b) {
  return [carrier, a = std::move(a), b = std::move(b)](const Integer& n) {
    return carrier.multiply(a(n), b(n));
  };
}

template <Carrier C>
SequenceMap<typename C::Element> pointwise_inverse(const C& carrier,
                                                   SequenceMap<typename C::Element> a) {
  return [carrier, a = std::move(a)](const Integer& n) { return carrier.inverse(a(n)); };
}

// ---------------------------------------------------------------------------
// Sampled polynomiality test

/// Anything with identity/multiply/inverse/contains(g, i)/degree().
template <class G>
concept FilteredGroupLike = requires(const G& g, const typename G::Element& a) {
  { g.identity() } -> std::same_as<typename G::Element>;
  { g.multiply(a, a) } -> std::same_as<typename G::Element>;
  { g.inverse(a) } -> std::same_as<typename G::Element>;
  { g.contains(a, 0) } -> std::same_as<bool>;
  { g.degree() } -> std::convertible_to<int>;
};

struct PolyCheckOptions {
  int window = 12;
  int samples = 200;
  std::uint64_t seed = 0;
};

/// One-sided polynomiality test for maps Z^D -> G. Each sample draws a base
/// point in [-window, window]^D and directions h_1..h_{s+1} (s = degree) and
/// checks that the i-fold derivative at the base point lies in G_i for every
/// i <= s + 1. For D = 1 directions are drawn from [1, window]; otherwise each
/// component is drawn from [-window, window], excluding the zero vector.
template <FilteredGroupLike G>
bool is_poly_check_multi(const G& group,
                         const std::function<typename G::Element(const std::vector<Integer>&)>& g,
                         int domain_dim, const PolyCheckOptions& opt) {
  using E = typename G::Element;
  if (opt.window < 1) throw MismatchError("window must be >= 1");
  Rng rng(opt.seed);
  const int s = group.degree();
  const int top = s + 1;
  for (int sample = 0; sample < opt.samples; ++sample) {
    std::vector<Integer> base(domain_dim);
    for (auto& b : base) b = rng.between(-opt.window, opt.window);
    std::vector<std::vector<Integer>> dirs(top, std::vector<Integer>(domain_dim));
    for (auto& h : dirs) {
      if (domain_dim == 1) {
        h[0] = rng.between(1, opt.window);
        continue;
      }
      bool nonzero = false;
      while (!nonzero) {
        for (auto& x : h) {
          x = rng.between(-opt.window, opt.window);
          nonzero = nonzero || x != 0;
        }
      }
    }
    if (!group.contains(g(base), 0)) return false;
    for (int i = 1; i <= top; ++i) {
      // Values on the i-dimensional cube base + v . (h_1..h_i), then take
      // left-quotient derivatives along each coordinate in turn.
      std::vector<E> vals;
      vals.reserve(std::size_t{1} << i);
      for (Vertex v = 0; v < (Vertex{1} << i); ++v) {
        std::vector<Integer> pt = base;
        for (int j = 0; j < i; ++j) {
          if (v & (Vertex{1} << j)) {
            for (int c = 0; c < domain_dim; ++c) pt[c] += dirs[j][c];
          }
        }
        vals.push_back(g(pt));
      }
      for (int j = 0; j < i; ++j) {
        // Derivative along coordinate j (always the lowest remaining bit).
        std::vector<E> next;
        next.reserve(vals.size() / 2);
        for (std::size_t w = 0; w < vals.size(); w += 2) {
          next.push_back(group.multiply(group.inverse(vals[w]), vals[w + 1]));
        }
        vals = std::move(next);
      }
      if (!group.contains(vals[0], i)) return false;
    }
  }
  return true;
}

template <FilteredGroupLike G>
bool is_poly_check(const G& group, const SequenceMap<typename G::Element>& g,
                   const PolyCheckOptions& opt = {}) {
  return is_poly_check_multi<G>(
      group, [&](const std::vector<Integer>& n) { return g(n[0]); }, 1, opt);
}

// ---------------------------------------------------------------------------
// Cubes over G: face factorization

template <Carrier C>
struct FaceFactor {
  Face face;
  typename C::Element element;
};

template <Carrier C>
using FaceFactorization = std::vector<FaceFactor<C>>;

template <Carrier C>
using GCube = Cube<typename C::Element>;

/// The cube g^F: g on the vertices of F, identity elsewhere.
template <Carrier C>
GCube<C> face_element(const C& carrier, const Face& f, const typename C::Element& g) {
  std::vector<typename C::Element> values(std::size_t{1} << f.ambient, carrier.identity());
  for (Vertex v = 0; v < values.size(); ++v) {
    if (f.contains(v)) values[v] = g;
  }
  return GCube<C>(f.ambient, std::move(values));
}

/// Vertexwise product of the face elements, leftmost factor first.
template <Carrier C>
GCube<C> face_product(const C& carrier, int n, const FaceFactorization<C>& factors) {
  std::vector<typename C::Element> values(std::size_t{1} << n, carrier.identity());
  for (const auto& ff : factors) {
    if (ff.face.ambient != n) throw MismatchError("face does not belong to this cube");
    for (Vertex v = 0; v < values.size(); ++v) {
      if (ff.face.contains(v)) values[v] = carrier.multiply(values[v], ff.element);
    }
  }
  return GCube<C>(n, std::move(values));
}

template <Carrier C>
struct CubeMembership {
  bool ok = false;
  FaceFactorization<C> factors;
  /// First face whose factor leaves G_{codim F}; set when !ok.
  std::optional<Face> failing_face;
};

/// Greedy peeling over the upper faces F_v = {w >= v}, ordered by decreasing
/// dimension and then lexicographically by anchor. The factor at F_v is the
/// value left at its anchor once the earlier factors are divided out; membership
/// in C^n(G_.) holds iff every factor lies in G_{|v|}.
template <Carrier C>
CubeMembership<C> cube_membership(const GCube<C>& q, const FilteredGroup<C>& group) {
  const C& c = group.carrier();
  const int n = q.dimension();
  CubeMembership<C> out;
  std::vector<typename C::Element> prefix(q.size(), c.identity());
  for (Vertex v : canonical_vertex_order(n)) {
    const typename C::Element g = c.multiply(c.inverse(prefix[v]), q[v]);
    const Face f = Face::upper(n, v);
    if (!group.contains(g, f.codimension())) {
      out.failing_face = f;
      return out;
    }
    out.factors.push_back({f, g});
    for (Vertex w = 0; w < q.size(); ++w) {
      if (f.contains(w)) prefix[w] = c.multiply(prefix[w], g);
    }
  }
  out.ok = true;
  return out;
}

/// C^n(G_.) with the filtration tilde-G_i = (G_i)^{{0,1}^n} intersected with
/// C^n(G_.): a cube lies in level i when every vertex is in G_i and the cube
/// itself is in C^n(G_.).
template <Carrier C>
class CubeGroup {
 public:
  using Element = GCube<C>;

  CubeGroup(FilteredGroup<C> group, int n) : group_(std::move(group)), n_(n) {}

  int dimension() const { return n_; }
  int degree() const { return group_.degree(); }
  const FilteredGroup<C>& base() const { return group_; }

  Element identity() const { return Element::constant(n_, group_.carrier().identity()); }
  Element multiply(const Element& a, const Element& b) const {
    std::vector<typename C::Element> v(a.size());
    for (Vertex i = 0; i < a.size(); ++i) v[i] = group_.carrier().multiply(a[i], b[i]);
    return Element(n_, std::move(v));
  }
  Element inverse(const Element& a) const {
    return a.map([&](const auto& x) { return group_.carrier().inverse(x); });
  }
  bool contains(const Element& q, int i) const {
    for (Vertex v = 0; v < q.size(); ++v) {
      if (!group_.contains(q[v], i)) return false;
    }
    return cube_membership(q, group_).ok;
  }

 private:
  FilteredGroup<C> group_;
  int n_;
};

/// (n_0, ..., n_k) -> (g(n_0 + v . (n_1, ..., n_k)))_v.
template <Carrier C>
std::function<GCube<C>(const std::vector<Integer>&)> g_upper_k(const PolySeq<C>& g, int k) {
  if (k < 0 || k > kMaxCubeDimension) throw MismatchError("cube dimension out of range");
  return [g, k](const std::vector<Integer>& n) {
    if (n.size() != static_cast<std::size_t>(k + 1)) {
      throw MismatchError("g^(k) takes k + 1 integer arguments");
    }
    std::vector<typename C::Element> values;
    values.reserve(std::size_t{1} << k);
    for (Vertex v = 0; v < (Vertex{1} << k); ++v) {
      Integer t = n[0];
      for (int i = 0; i < k; ++i) {
        if (v & (Vertex{1} << i)) t += n[i + 1];
      }
      values.push_back(poly_eval(g, t));
    }
    return GCube<C>(k, std::move(values));
  };
}

}  // namespace nilkit
