#include "nilkit/group_cube.hpp"

#include <cctype>
#include <limits>
#include <numeric>

namespace nilkit {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::uint64_t saturating_pow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    r *= base;
  }
  return r;
}

// Parameter vertices for D_k cubes: |v| <= k, sorted by weight then value.
std::vector<Vertex> parameter_vertices(int n, int k) {
  std::vector<Vertex> vs;
  for (Vertex v = 0; v < (Vertex{1} << n); ++v) {
    if (weight(v) <= k) vs.push_back(v);
  }
  std::stable_sort(vs.begin(), vs.end(),
                   [](Vertex a, Vertex b) { return weight(a) < weight(b); });
  return vs;
}

GroupCube assemble(const FiniteAbelianGroup& group, int n, const std::vector<Vertex>& pverts,
                   const std::vector<FiniteAbelianGroup::Element>& params) {
  std::vector<FiniteAbelianGroup::Element> values(std::size_t{1} << n, group.zero());
  for (Vertex w = 0; w < values.size(); ++w) {
    for (std::size_t j = 0; j < pverts.size(); ++j) {
      if ((pverts[j] & w) == pverts[j]) values[w] = group.add(values[w], params[j]);
    }
  }
  return GroupCube(n, std::move(values));
}

}  // namespace

// ---------------------------------------------------------------------------

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<std::int64_t> cyclic_orders)
    : orders_(std::move(cyclic_orders)) {
  if (orders_.empty()) {
    orders_.push_back(1);
  }
  order_ = 1;
  for (auto m : orders_) {
    if (m < 1) {
      throw MismatchError("cyclic orders must be >= 1");
    }
    if (order_ > std::numeric_limits<std::int64_t>::max() / m) {
      throw MismatchError("group order overflows");
    }
    order_ *= m;
  }
}

FiniteAbelianGroup FiniteAbelianGroup::parse(std::string_view text) {
  std::vector<std::int64_t> orders;
  std::string cleaned;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c)) && c != '_') cleaned.push_back(c);
  }
  std::size_t pos = 0;
  while (pos < cleaned.size()) {
    if (cleaned[pos] != 'Z' && cleaned[pos] != 'z') {
      throw ParseError("group spec '" + std::string(text) + "' must look like Z5 or Z2xZ3");
    }
    ++pos;
    std::size_t start = pos;
    while (pos < cleaned.size() && std::isdigit(static_cast<unsigned char>(cleaned[pos]))) ++pos;
    if (start == pos) {
      throw ParseError("missing order in group spec '" + std::string(text) + "'");
    }
    orders.push_back(std::stoll(cleaned.substr(start, pos - start)));
    if (pos < cleaned.size()) {
      if (cleaned[pos] != 'x' && cleaned[pos] != 'X' && cleaned[pos] != '*') {
        throw ParseError("unexpected '" + std::string(1, cleaned[pos]) + "' in group spec");
      }
      ++pos;
      if (pos == cleaned.size()) throw ParseError("dangling product in group spec");
    }
  }
  if (orders.empty()) throw ParseError("empty group spec");
  return FiniteAbelianGroup(std::move(orders));
}

FiniteAbelianGroup::Element FiniteAbelianGroup::element(std::int64_t index) const {
  Element e(rank());
  for (int i = 0; i < rank(); ++i) {
    e(i) = index % orders_[i];
    index /= orders_[i];
  }
  return e;
}

std::int64_t FiniteAbelianGroup::index(const Element& x) const {
  std::int64_t idx = 0;
  for (int i = rank() - 1; i >= 0; --i) idx = idx * orders_[i] + mod(x(i), orders_[i]);
  return idx;
}

bool FiniteAbelianGroup::contains(const Element& x) const {
  if (x.size() != rank()) return false;
  for (int i = 0; i < rank(); ++i) {
    if (x(i) < 0 || x(i) >= orders_[i]) return false;
  }
  return true;
}

FiniteAbelianGroup::Element FiniteAbelianGroup::add(const Element& a, const Element& b) const {
  Element r(rank());
  for (int i = 0; i < rank(); ++i) r(i) = mod(a(i) + b(i), orders_[i]);
  return r;
}

FiniteAbelianGroup::Element FiniteAbelianGroup::sub(const Element& a, const Element& b) const {
  Element r(rank());
  for (int i = 0; i < rank(); ++i) r(i) = mod(a(i) - b(i), orders_[i]);
  return r;
}

FiniteAbelianGroup::Element FiniteAbelianGroup::neg(const Element& a) const {
  Element r(rank());
  for (int i = 0; i < rank(); ++i) r(i) = mod(-a(i), orders_[i]);
  return r;
}

FiniteAbelianGroup::Element FiniteAbelianGroup::scale(const Element& a, std::int64_t k) const {
  Element r(rank());
  for (int i = 0; i < rank(); ++i) {
    r(i) = static_cast<std::int64_t>(
        (static_cast<__int128>(mod(k, orders_[i])) * a(i)) % orders_[i]);
  }
  return r;
}

std::int64_t FiniteAbelianGroup::add_index(std::int64_t a, std::int64_t b) const {
  if (orders_.size() == 1) {
    std::int64_t s = a + b;
    return s >= order_ ? s - order_ : s;
  }
  std::int64_t idx = 0, stride = 1;
  for (auto m : orders_) {
    std::int64_t d = a % m + b % m;
    if (d >= m) d -= m;
    idx += d * stride;
    stride *= m;
    a /= m;
    b /= m;
  }
  return idx;
}

std::int64_t FiniteAbelianGroup::neg_index(std::int64_t a) const {
  if (orders_.size() == 1) return a == 0 ? 0 : order_ - a;
  std::int64_t idx = 0, stride = 1;
  for (auto m : orders_) {
    std::int64_t d = a % m;
    idx += (d == 0 ? 0 : m - d) * stride;
    stride *= m;
    a /= m;
  }
  return idx;
}

std::int64_t FiniteAbelianGroup::sub_index(std::int64_t a, std::int64_t b) const {
  return add_index(a, neg_index(b));
}

std::string FiniteAbelianGroup::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    if (i) s += "x";
    s += "Z" + std::to_string(orders_[i]);
  }
  return s;
}

// ---------------------------------------------------------------------------

Vertex Face::embed(Vertex w) const {
  Vertex v = fixed_bits;
  int bit = 0;
  for (int i = 0; i < ambient; ++i) {
    if (free_mask & (Vertex{1} << i)) {
      if (w & (Vertex{1} << bit)) v |= Vertex{1} << i;
      ++bit;
    }
  }
  return v;
}

Face Face::upper(int ambient, Vertex v) {
  const Vertex full = (Vertex{1} << ambient) - 1;
  return Face{ambient, full & ~v, v};
}

std::vector<Face> faces(int ambient, int dimension) {
  std::vector<Face> out;
  const Vertex full = (Vertex{1} << ambient) - 1;
  for (Vertex mask = 0; mask <= full; ++mask) {
    if (weight(mask) != dimension) continue;
    const Vertex fixed_coords = full & ~mask;
    // Enumerate subsets of fixed_coords.
    Vertex sub = 0;
    while (true) {
      out.push_back(Face{ambient, mask, sub});
      if (sub == fixed_coords) break;
      sub = (sub - fixed_coords) & fixed_coords;
    }
  }
  return out;
}

std::vector<Vertex> canonical_vertex_order(int n) {
  std::vector<Vertex> vs(std::size_t{1} << n);
  std::iota(vs.begin(), vs.end(), Vertex{0});
  auto lex_key = [n](Vertex v) {
    // (v_1, ..., v_n) read as a binary number with v_1 most significant.
    Vertex key = 0;
    for (int i = 0; i < n; ++i) key = (key << 1) | ((v >> i) & 1u);
    return key;
  };
  std::sort(vs.begin(), vs.end(), [&](Vertex a, Vertex b) {
    if (weight(a) != weight(b)) return weight(a) < weight(b);
    return lex_key(a) < lex_key(b);
  });
  return vs;
}

// ---------------------------------------------------------------------------

CubeAutomorphism::CubeAutomorphism(std::vector<int> permutation, Vertex reflection_mask)
    : perm_(std::move(permutation)), reflect_(reflection_mask) {
  std::vector<int> check = perm_;
  std::sort(check.begin(), check.end());
  for (std::size_t i = 0; i < check.size(); ++i) {
    if (check[i] != static_cast<int>(i)) throw MismatchError("not a permutation");
  }
  if (perm_.size() < 32 && (reflect_ >> perm_.size()) != 0) {
    throw MismatchError("reflection mask has bits beyond the cube dimension");
  }
}

CubeAutomorphism CubeAutomorphism::identity(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  return CubeAutomorphism(std::move(p), 0);
}

Vertex CubeAutomorphism::operator()(Vertex v) const {
  Vertex w = 0;
  for (std::size_t i = 0; i < perm_.size(); ++i) {
    w |= ((v >> perm_[i]) & 1u) << i;
  }
  return w ^ reflect_;
}

std::vector<CubeAutomorphism> all_automorphisms(int n) {
  std::vector<CubeAutomorphism> out;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    for (Vertex mask = 0; mask < (Vertex{1} << n); ++mask) out.emplace_back(p, mask);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// ---------------------------------------------------------------------------

FiniteAbelianGroup::Element gray_code(const FiniteAbelianGroup& group, const GroupCube& q) {
  FiniteAbelianGroup::Element acc = group.zero();
  for (Vertex v = 0; v < q.size(); ++v) {
    acc = (weight(v) & 1) ? group.sub(acc, q[v]) : group.add(acc, q[v]);
  }
  return acc;
}

bool is_cube_Dk(const FiniteAbelianGroup& group, const GroupCube& q, int k) {
  if (k < 0) throw MismatchError("degree must be >= 0");
  if (q.dimension() <= k) return true;
  const auto zero = group.zero();
  for (const Face& f : faces(q.dimension(), k + 1)) {
    if (gray_code(group, restrict_to(q, f)) != zero) return false;
  }
  return true;
}

GroupCube make_parallelepiped(const FiniteAbelianGroup& group,
                              const FiniteAbelianGroup::Element& x,
                              const std::vector<FiniteAbelianGroup::Element>& h) {
  if (!group.contains(x)) throw MismatchError("base point is not in the group");
  for (const auto& e : h) {
    if (!group.contains(e)) throw MismatchError("edge is not in the group");
  }
  const int n = static_cast<int>(h.size());
  std::vector<FiniteAbelianGroup::Element> values(std::size_t{1} << n);
  values[0] = x;
  for (int i = 0; i < n; ++i) {
    const Vertex bit = Vertex{1} << i;
    for (Vertex v = 0; v < bit; ++v) values[v | bit] = group.add(values[v], h[i]);
  }
  return GroupCube(n, std::move(values));
}

Cube<std::int64_t> make_parallelepiped_index(const FiniteAbelianGroup& group, std::int64_t x,
                                             const std::vector<std::int64_t>& h) {
  const int n = static_cast<int>(h.size());
  std::vector<std::int64_t> values(std::size_t{1} << n);
  values[0] = x;
  for (int i = 0; i < n; ++i) {
    const Vertex bit = Vertex{1} << i;
    for (Vertex v = 0; v < bit; ++v) values[v | bit] = group.add_index(values[v], h[i]);
  }
  return Cube<std::int64_t>(n, std::move(values));
}

// ---------------------------------------------------------------------------

int cube_parameter_count(int n, int k) {
  int c = 0;
  for (Vertex v = 0; v < (Vertex{1} << n); ++v) c += weight(v) <= k ? 1 : 0;
  return c;
}

std::uint64_t cube_count(const FiniteAbelianGroup& group, int n, int k) {
  return saturating_pow(static_cast<std::uint64_t>(group.order()), cube_parameter_count(n, k));
}

void for_each_cube(const FiniteAbelianGroup& group, int n,
                   const std::function<void(const GroupCube&)>& f, int k,
                   std::uint64_t budget) {
  if (n < 0 || n > kMaxCubeDimension) throw MismatchError("cube dimension out of range");
  const std::uint64_t required = cube_count(group, n, k);
  if (required > budget) throw BudgetExceeded(required, budget);
  const auto pverts = parameter_vertices(n, k);
  std::vector<std::int64_t> digits(pverts.size(), 0);
  std::vector<FiniteAbelianGroup::Element> params(pverts.size(), group.zero());
  for (std::uint64_t count = 0; count < required; ++count) {
    for (std::size_t j = 0; j < pverts.size(); ++j) params[j] = group.element(digits[j]);
    f(assemble(group, n, pverts, params));
    for (std::size_t j = 0; j < digits.size(); ++j) {
      if (++digits[j] < group.order()) break;
      digits[j] = 0;
    }
  }
}

std::vector<GroupCube> enumerate_cubes(const FiniteAbelianGroup& group, int n, int k,
                                       std::uint64_t budget) {
  std::vector<GroupCube> out;
  for_each_cube(group, n, [&](const GroupCube& q) { out.push_back(q); }, k, budget);
  return out;
}

GroupCube sample_cube(const FiniteAbelianGroup& group, int n, Rng& rng, int k) {
  const auto pverts = parameter_vertices(n, k);
  std::vector<FiniteAbelianGroup::Element> params;
  params.reserve(pverts.size());
  for (std::size_t j = 0; j < pverts.size(); ++j) {
    params.push_back(group.element(
        static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(group.order())))));
  }
  return assemble(group, n, pverts, params);
}

GroupCube sample_cube(const FiniteAbelianGroup& group, int n, std::uint64_t seed, int k) {
  Rng rng(seed);
  return sample_cube(group, n, rng, k);
}

// ---------------------------------------------------------------------------

bool is_morphism(const FiniteAbelianGroup& source, int source_degree,
                 const FiniteAbelianGroup& target, int target_degree, const AbelianMap& phi,
                 std::uint64_t budget) {
  if (phi.size() != static_cast<std::size_t>(source.order())) {
    throw MismatchError("map must list one value per source element");
  }
  bool ok = true;
  const auto zero = target.zero();
  // Faces of cubes on D_k(A) are again cubes of D_k(A), so (l+1)-cubes suffice.
  for_each_cube(
      source, target_degree + 1,
      [&](const GroupCube& q) {
        if (!ok) return;
        GroupCube image = q.map([&](const auto& x) { return phi[source.index(x)]; });
        if (gray_code(target, image) != zero) ok = false;
      },
      source_degree, budget);
  return ok;
}

std::vector<AbelianMap> find_morphisms(const FiniteAbelianGroup& source, int source_degree,
                                       const FiniteAbelianGroup& target, int target_degree,
                                       std::uint64_t budget) {
  const std::uint64_t maps = saturating_pow(static_cast<std::uint64_t>(target.order()),
                                            static_cast<int>(source.order()));
  if (maps > budget) throw BudgetExceeded(maps, budget);
  std::vector<AbelianMap> found;
  std::vector<std::int64_t> digits(static_cast<std::size_t>(source.order()), 0);
  for (std::uint64_t count = 0; count < maps; ++count) {
    AbelianMap phi;
    phi.reserve(digits.size());
    for (auto d : digits) phi.push_back(target.element(d));
    if (is_morphism(source, source_degree, target, target_degree, phi, budget)) {
      found.push_back(std::move(phi));
    }
    for (auto& d : digits) {
      if (++d < target.order()) break;
      d = 0;
    }
  }
  return found;
}

}  // namespace nilkit
