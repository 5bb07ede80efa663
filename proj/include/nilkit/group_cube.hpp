#pragma once

// Finite abelian groups, discrete cubes {0,1}^n and their combinatorics.
//
// Vertex layout: a vertex v = (v_1, ..., v_n) of {0,1}^n is stored as the
// integer whose bit i-1 is v_i (binary little-endian). Every module uses this
// order for Cube values.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "nilkit/error.hpp"
#include "nilkit/rng.hpp"

namespace nilkit {

using Vertex = std::uint32_t;

inline int weight(Vertex v) { return std::popcount(v); }

inline constexpr int kMaxCubeDimension = 16;

// ---------------------------------------------------------------------------
// Finite abelian groups Z_{m_1} x ... x Z_{m_r}

class FiniteAbelianGroup {
 public:
  using Element = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

  explicit FiniteAbelianGroup(std::vector<std::int64_t> cyclic_orders);
  static FiniteAbelianGroup cyclic(std::int64_t n) { return FiniteAbelianGroup({n}); }
  /// Parses "Z5", "Z2xZ3", "Z_4 x Z_6".
  static FiniteAbelianGroup parse(std::string_view text);

  const std::vector<std::int64_t>& cyclic_orders() const { return orders_; }
  int rank() const { return static_cast<int>(orders_.size()); }
  std::int64_t order() const { return order_; }
  bool is_cyclic() const { return orders_.size() == 1; }

  Element zero() const { return Element::Zero(rank()); }
  Element element(std::int64_t index) const;
  std::int64_t index(const Element& x) const;
  bool contains(const Element& x) const;

  Element add(const Element& a, const Element& b) const;
  Element sub(const Element& a, const Element& b) const;
  Element neg(const Element& a) const;
  Element scale(const Element& a, std::int64_t k) const;

  /// Group operations on canonical indices (first coordinate varies fastest).
  std::int64_t add_index(std::int64_t a, std::int64_t b) const;
  std::int64_t sub_index(std::int64_t a, std::int64_t b) const;
  std::int64_t neg_index(std::int64_t a) const;

  std::string to_string() const;

  friend bool operator==(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) {
    return a.orders_ == b.orders_;
  }

 private:
  std::vector<std::int64_t> orders_;
  std::int64_t order_ = 1;
};

// ---------------------------------------------------------------------------
// Cubes

template <class T>
class Cube {
 public:
  Cube() = default;
  Cube(int dimension, std::vector<T> values)
      : dimension_(dimension), values_(std::move(values)) {
    if (dimension < 0 || dimension > kMaxCubeDimension) {
      throw MismatchError("cube dimension out of range");
    }
    if (values_.size() != (std::size_t{1} << dimension)) {
      throw MismatchError("a cube of dimension " + std::to_string(dimension) + " needs " +
                          std::to_string(std::size_t{1} << dimension) + " values, got " +
                          std::to_string(values_.size()));
    }
  }

  static Cube constant(int dimension, const T& value) {
    return Cube(dimension, std::vector<T>(std::size_t{1} << dimension, value));
  }

  int dimension() const { return dimension_; }
  std::size_t size() const { return values_.size(); }
  const T& operator[](Vertex v) const { return values_[v]; }
  T& operator[](Vertex v) { return values_[v]; }
  const std::vector<T>& values() const { return values_; }

  template <class F>
  auto map(F&& f) const -> Cube<std::decay_t<decltype(f(std::declval<const T&>()))>> {
    using U = std::decay_t<decltype(f(std::declval<const T&>()))>;
    std::vector<U> out;
    out.reserve(values_.size());
    for (const auto& x : values_) out.push_back(f(x));
    return Cube<U>(dimension_, std::move(out));
  }

  friend bool operator==(const Cube& a, const Cube& b) {
    if (a.dimension_ != b.dimension_) return false;
    for (std::size_t i = 0; i < a.values_.size(); ++i) {
      if (!(a.values_[i] == b.values_[i])) return false;
    }
    return true;
  }

 private:
  int dimension_ = 0;
  std::vector<T> values_{T{}};
};

/// A face of {0,1}^n: the coordinates in free_mask vary, the others are fixed
/// to the corresponding bits of fixed_bits.
struct Face {
  int ambient = 0;
  Vertex free_mask = 0;
  Vertex fixed_bits = 0;

  int dimension() const { return weight(free_mask); }
  int codimension() const { return ambient - dimension(); }
  bool contains(Vertex v) const { return (v & ~free_mask) == fixed_bits; }
  /// Vertex of the ambient cube at position w of the face (free coordinates
  /// filled in increasing order from the bits of w).
  Vertex embed(Vertex w) const;
  /// Lowest vertex of the face.
  Vertex anchor() const { return fixed_bits; }

  /// Upper face {w : w >= v} with anchor v; its codimension is |v|.
  static Face upper(int ambient, Vertex v);

  friend bool operator==(const Face&, const Face&) = default;
};

/// All faces of {0,1}^n of the given dimension, ordered by free mask then by
/// fixed bits.
std::vector<Face> faces(int ambient, int dimension);

/// Vertices sorted by weight, then lexicographically on (v_1, ..., v_n).
std::vector<Vertex> canonical_vertex_order(int n);

template <class T>
Cube<T> restrict_to(const Cube<T>& q, const Face& f) {
  const int d = f.dimension();
  std::vector<T> out;
  out.reserve(std::size_t{1} << d);
  for (Vertex w = 0; w < (Vertex{1} << d); ++w) out.push_back(q[f.embed(w)]);
  return Cube<T>(d, std::move(out));
}

// ---------------------------------------------------------------------------
// Automorphisms of {0,1}^n

class CubeAutomorphism {
 public:
  /// theta(v)_i = v_{perm[i]} xor reflect_i (coordinates 0-based).
  CubeAutomorphism(std::vector<int> permutation, Vertex reflection_mask);
  static CubeAutomorphism identity(int n);

  int dimension() const { return static_cast<int>(perm_.size()); }
  Vertex operator()(Vertex v) const;
  /// Number of reflected coordinates, i.e. |theta(0)|.
  int reflections() const { return weight(reflect_); }
  const std::vector<int>& permutation() const { return perm_; }
  Vertex reflection_mask() const { return reflect_; }

 private:
  std::vector<int> perm_;
  Vertex reflect_;
};

/// All n! 2^n automorphisms.
std::vector<CubeAutomorphism> all_automorphisms(int n);

template <class T>
Cube<T> apply_automorphism(const Cube<T>& q, const CubeAutomorphism& theta) {
  if (q.dimension() != theta.dimension()) {
    throw MismatchError("automorphism dimension does not match cube");
  }
  std::vector<T> out;
  out.reserve(q.size());
  for (Vertex v = 0; v < q.size(); ++v) out.push_back(q[theta(v)]);
  return Cube<T>(q.dimension(), std::move(out));
}

// ---------------------------------------------------------------------------
// Adjacency and concatenation along the first coordinate v_1: q1 and q2 are
// adjacent when q1 on {v_1 = 1} equals q2 on {v_1 = 0}.

template <class T>
bool adjacent(const Cube<T>& q1, const Cube<T>& q2) {
  if (q1.dimension() != q2.dimension() || q1.dimension() == 0) return false;
  for (Vertex v = 0; v < q1.size(); v += 2) {
    if (!(q1[v | 1] == q2[v])) return false;
  }
  return true;
}

template <class T>
Cube<T> concatenate(const Cube<T>& q1, const Cube<T>& q2) {
  if (!adjacent(q1, q2)) {
    throw MismatchError("cannot concatenate non-adjacent cubes");
  }
  std::vector<T> out = q1.values();
  for (Vertex v = 0; v < q1.size(); v += 2) out[v | 1] = q2[v | 1];
  return Cube<T>(q1.dimension(), std::move(out));
}

// ---------------------------------------------------------------------------
// Gray code sigma(q) = sum_v (-1)^{|v|} q(v)

/// For any additive value type (integers, rationals, Eigen vectors).
template <class T>
T alternating_sum(const Cube<T>& q) {
  T acc = q[0];
  for (Vertex v = 1; v < q.size(); ++v) {
    if (weight(v) & 1) {
      acc = acc - q[v];
    } else {
      acc = acc + q[v];
    }
  }
  return acc;
}

using GroupCube = Cube<FiniteAbelianGroup::Element>;

FiniteAbelianGroup::Element gray_code(const FiniteAbelianGroup& group, const GroupCube& q);

/// q is a cube of D_k(A): the Gray code vanishes on every (k+1)-face.
bool is_cube_Dk(const FiniteAbelianGroup& group, const GroupCube& q, int k);

/// q(v) = x + sum_i v_i h_i.
GroupCube make_parallelepiped(const FiniteAbelianGroup& group,
                              const FiniteAbelianGroup::Element& x,
                              const std::vector<FiniteAbelianGroup::Element>& h);

/// Same thing on canonical indices.
Cube<std::int64_t> make_parallelepiped_index(const FiniteAbelianGroup& group, std::int64_t x,
                                             const std::vector<std::int64_t>& h);

// ---------------------------------------------------------------------------
// Enumeration and sampling of cubes on D_k(A)

inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 26;

/// Number of free parameters of an n-cube on D_k(A): vertices with |v| <= k.
int cube_parameter_count(int n, int k);

/// Number of n-cubes of D_k(A), i.e. |A|^{#{v : |v| <= k}}; saturates at
/// UINT64_MAX.
std::uint64_t cube_count(const FiniteAbelianGroup& group, int n, int k = 1);

/// Calls f(const GroupCube&) for every n-cube of D_k(A). For k = 1 these are
/// exactly the |A|^{n+1} parallelepipeds, in the order of
/// (x, h_1, ..., h_n) with x varying fastest.
void for_each_cube(const FiniteAbelianGroup& group, int n,
                   const std::function<void(const GroupCube&)>& f, int k = 1,
                   std::uint64_t budget = kDefaultBudget);

std::vector<GroupCube> enumerate_cubes(const FiniteAbelianGroup& group, int n, int k = 1,
                                       std::uint64_t budget = kDefaultBudget);

/// Uniform n-cube of D_k(A) drawn from rng.
GroupCube sample_cube(const FiniteAbelianGroup& group, int n, Rng& rng, int k = 1);
GroupCube sample_cube(const FiniteAbelianGroup& group, int n, std::uint64_t seed, int k = 1);

// ---------------------------------------------------------------------------
// Morphisms between abelian nilspaces D_k(A) -> D_l(B)

/// A map A -> B given by its values on canonical indices of A.
using AbelianMap = std::vector<FiniteAbelianGroup::Element>;

/// True iff phi o q is a cube of D_l(B) for every cube q of D_k(A) (checked on
/// all (l+1)-cubes, which suffices).
bool is_morphism(const FiniteAbelianGroup& source, int source_degree,
                 const FiniteAbelianGroup& target, int target_degree, const AbelianMap& phi,
                 std::uint64_t budget = kDefaultBudget);

/// Exhaustive search over all |B|^|A| maps.
std::vector<AbelianMap> find_morphisms(const FiniteAbelianGroup& source, int source_degree,
                                       const FiniteAbelianGroup& target, int target_degree,
                                       std::uint64_t budget = kDefaultBudget);

}  // namespace nilkit
