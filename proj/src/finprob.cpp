#include "nilkit/finprob.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "nilkit/error.hpp"
#include "nilkit/rng.hpp"

namespace nilkit {

FiniteProbSpace::FiniteProbSpace(std::vector<Rational> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw MismatchError("a probability space needs at least one point");
  Rational total = 0;
  for (const auto& w : weights_) {
    if (w < 0) throw MismatchError("weights must be nonnegative");
    total += w;
  }
  if (total != 1) throw MismatchError("weights must sum to 1, got " + to_string(total));
}

FiniteProbSpace FiniteProbSpace::uniform(int points) {
  if (points < 1) throw MismatchError("a probability space needs at least one point");
  return FiniteProbSpace(std::vector<Rational>(points, Rational(1, points)));
}

PartitionSigma::PartitionSigma(const std::vector<int>& block_of) {
  std::map<int, int> relabel;
  block_of_.reserve(block_of.size());
  for (int b : block_of) {
    auto [it, fresh] = relabel.emplace(b, static_cast<int>(relabel.size()));
    block_of_.push_back(it->second);
  }
  blocks_ = static_cast<int>(relabel.size());
}

PartitionSigma PartitionSigma::from_blocks(int points, const std::vector<std::vector<int>>& blocks) {
  std::vector<int> label(points, -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (int x : blocks[b]) {
      if (x < 0 || x >= points) throw MismatchError("block point out of range");
      if (label[x] != -1) throw MismatchError("blocks overlap at point " + std::to_string(x));
      label[x] = static_cast<int>(b);
    }
  }
  for (int x = 0; x < points; ++x) {
    if (label[x] == -1) throw MismatchError("blocks do not cover point " + std::to_string(x));
  }
  return PartitionSigma(label);
}

PartitionSigma PartitionSigma::finest(int points) {
  std::vector<int> l(points);
  std::iota(l.begin(), l.end(), 0);
  return PartitionSigma(l);
}

PartitionSigma PartitionSigma::coarsest(int points) {
  return PartitionSigma(std::vector<int>(points, 0));
}

std::vector<std::vector<int>> PartitionSigma::blocks() const {
  std::vector<std::vector<int>> out(blocks_);
  for (int x = 0; x < size(); ++x) out[block_of_[x]].push_back(x);
  return out;
}

bool PartitionSigma::refines(const PartitionSigma& other) const {
  if (other.size() != size()) return false;
  std::vector<int> target(blocks_, -1);
  for (int x = 0; x < size(); ++x) {
    int& t = target[block_of_[x]];
    if (t == -1) t = other.block_of(x);
    else if (t != other.block_of(x)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

namespace {

void check_size(int n, int m, const char* what) {
  if (n != m) throw MismatchError(std::string(what) + " does not match the sample space");
}

// Exact comparisons against fractional powers of eps (all quantities >= 0).
bool greater_than_sqrt(const Rational& a, const Rational& eps) { return a > 0 && a * a > eps; }
bool greater_than_fourth_root(const Rational& a, const Rational& eps) {
  return a > 0 && a * a * a * a > eps;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

Rational measure(const FiniteProbSpace& omega, const PointSet& s) {
  check_size(static_cast<int>(s.size()), omega.size(), "set");
  Rational m = 0;
  for (int x = 0; x < omega.size(); ++x) {
    if (s[x]) m += omega.weight(x);
  }
  return m;
}

PointSet symmetric_difference(const PointSet& a, const PointSet& b) {
  if (a.size() != b.size()) throw MismatchError("sets live on different spaces");
  PointSet out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] != b[i];
  return out;
}

PointFunction indicator(const PointSet& s) {
  PointFunction f(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) f[i] = s[i] ? 1 : 0;
  return f;
}

PointFunction cond_expect(const PointFunction& f, const PartitionSigma& p,
                          const FiniteProbSpace& omega) {
  check_size(static_cast<int>(f.size()), omega.size(), "function");
  check_size(p.size(), omega.size(), "partition");
  std::vector<Rational> mass(p.block_count()), integral(p.block_count());
  for (int x = 0; x < omega.size(); ++x) {
    mass[p.block_of(x)] += omega.weight(x);
    integral[p.block_of(x)] += omega.weight(x) * f[x];
  }
  PointFunction out(f.size());
  for (int x = 0; x < omega.size(); ++x) {
    const int b = p.block_of(x);
    out[x] = mass[b] == 0 ? Rational(0) : integral[b] / mass[b];
  }
  return out;
}

bool is_measurable(const PointFunction& f, const PartitionSigma& p, const FiniteProbSpace& omega) {
  check_size(static_cast<int>(f.size()), omega.size(), "function");
  std::vector<std::optional<Rational>> value(p.block_count());
  for (int x = 0; x < omega.size(); ++x) {
    if (omega.weight(x) == 0) continue;
    auto& v = value[p.block_of(x)];
    if (!v) v = f[x];
    else if (*v != f[x]) return false;
  }
  return true;
}

bool is_measurable(const PointSet& s, const PartitionSigma& p, const FiniteProbSpace& omega) {
  return is_measurable(indicator(s), p, omega);
}

PartitionSigma meet(const PartitionSigma& p0, const PartitionSigma& p1,
                    const FiniteProbSpace& omega) {
  check_size(p0.size(), omega.size(), "partition");
  check_size(p1.size(), omega.size(), "partition");
  // Nodes 0..b0-1 are blocks of p0, then the blocks of p1.
  const int b0 = p0.block_count();
  UnionFind uf(b0 + p1.block_count());
  int first_positive = -1;
  for (int x = 0; x < omega.size(); ++x) {
    if (omega.weight(x) == 0) continue;
    if (first_positive == -1) first_positive = x;
    uf.unite(p0.block_of(x), b0 + p1.block_of(x));
  }
  std::vector<int> label(omega.size());
  for (int x = 0; x < omega.size(); ++x) {
    const int anchor = omega.weight(x) == 0 ? first_positive : x;
    label[x] = uf.find(p0.block_of(anchor));
  }
  return PartitionSigma(label);
}

bool check_cond_independence(const PartitionSigma& p0, const PartitionSigma& p1,
                             const FiniteProbSpace& omega) {
  for (const auto& block : p0.blocks()) {
    PointSet s(omega.size(), false);
    for (int x : block) s[x] = true;
    if (!is_measurable(cond_expect(indicator(s), p1, omega), p0, omega)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

LevelSetResult level_set_approx(const PointSet& s, const PartitionSigma& p,
                                const FiniteProbSpace& omega, const Rational& eps) {
  if (eps < 0) throw MismatchError("eps must be >= 0");
  const PointFunction e = cond_expect(indicator(s), p, omega);
  LevelSetResult r;
  r.s_prime.assign(s.size(), false);
  Rational l2sq = 0;
  for (int x = 0; x < omega.size(); ++x) {
    r.s_prime[x] = greater_than_sqrt(e[x], eps);
    const Rational d = Rational(s[x] ? 1 : 0) - e[x];
    l2sq += omega.weight(x) * d * d;
  }
  r.error = measure(omega, symmetric_difference(s, r.s_prime));
  r.precondition = l2sq <= eps * eps;
  // error < 5 eps^{1/2}  <=>  error^2 < 25 eps.
  if (r.precondition) r.bound_holds = r.error * r.error < 25 * eps;
  return r;
}

IntersectionResult ci_intersection_approx(const PointSet& s0, const PointSet& s1,
                                          const PartitionSigma& p0, const PartitionSigma& p1,
                                          const FiniteProbSpace& omega, const Rational& eps) {
  if (eps < 0) throw MismatchError("eps must be >= 0");
  IntersectionResult r;
  if (!check_cond_independence(p0, p1, omega)) {
    r.precondition_failures.push_back("partitions are not conditionally independent");
  }
  if (!is_measurable(s0, p0, omega)) r.precondition_failures.push_back("S0 is not P0-measurable");
  if (!is_measurable(s1, p1, omega)) r.precondition_failures.push_back("S1 is not P1-measurable");
  if (measure(omega, symmetric_difference(s0, s1)) > eps) {
    r.precondition_failures.push_back("lambda(S0 delta S1) exceeds eps");
  }
  const PointFunction e = cond_expect(indicator(s0), p1, omega);
  r.c.assign(s0.size(), false);
  // E > (2 eps^{1/2})^{1/2}  <=>  E^4 > 4 eps.
  for (int x = 0; x < omega.size(); ++x) r.c[x] = greater_than_fourth_root(e[x], 4 * eps);
  r.error0 = measure(omega, symmetric_difference(r.c, s0));
  r.error1 = measure(omega, symmetric_difference(r.c, s1));
  r.meet_measurable = is_measurable(r.c, meet(p0, p1, omega), omega);
  if (r.precondition_failures.empty()) {
    // error <= 10 eps^{1/4}  <=>  error^4 <= 10^4 eps.
    const Rational limit = 10000 * eps;
    auto ok = [&](const Rational& a) { return a * a * a * a <= limit; };
    r.bound_holds = r.meet_measurable && ok(r.error0) && ok(r.error1);
  }
  return r;
}

InvariantResult invariant_approx(const PointSet& s, const GroupAction& action,
                                 const FiniteProbSpace& omega, const Rational& eps) {
  if (eps < 0) throw MismatchError("eps must be >= 0");
  if (action.empty()) throw MismatchError("the group has no elements");
  const int m = omega.size();
  check_size(static_cast<int>(s.size()), m, "set");
  for (const auto& g : action) {
    check_size(static_cast<int>(g.size()), m, "permutation");
    std::vector<bool> hit(m, false);
    for (int x = 0; x < m; ++x) {
      if (g[x] < 0 || g[x] >= m || hit[g[x]]) throw MismatchError("action is not a permutation");
      hit[g[x]] = true;
      if (omega.weight(g[x]) != omega.weight(x)) {
        throw MismatchError("action does not preserve the measure");
      }
    }
  }
  InvariantResult r;
  // g.S = {g.x : x in S}.
  auto image = [&](const std::vector<int>& g) {
    PointSet out(m, false);
    for (int x = 0; x < m; ++x) {
      if (s[x]) out[g[x]] = true;
    }
    return out;
  };
  std::vector<PointSet> images;
  images.reserve(action.size());
  for (const auto& g : action) {
    images.push_back(image(g));
    if (measure(omega, symmetric_difference(s, images.back())) > eps) {
      r.precondition_failures.push_back("lambda(S delta gS) exceeds eps for some g");
      break;
    }
  }
  while (images.size() < action.size()) images.push_back(image(action[images.size()]));
  const Rational order(static_cast<long>(action.size()));
  r.s_prime.assign(m, false);
  for (int x = 0; x < m; ++x) {
    Rational avg = 0;
    for (const auto& img : images) avg += img[x] ? 1 : 0;
    r.s_prime[x] = greater_than_fourth_root(avg / order, eps);
  }
  r.invariant = true;
  for (const auto& g : action) {
    for (int x = 0; x < m; ++x) {
      if (r.s_prime[x] != r.s_prime[g[x]]) r.invariant = false;
    }
  }
  r.error = measure(omega, symmetric_difference(s, r.s_prime));
  if (r.precondition_failures.empty()) {
    // error <= 5 eps^{1/4}  <=>  error^4 <= 625 eps.
    r.bound_holds = r.invariant && r.error * r.error * r.error * r.error <= 625 * eps;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Suites

namespace {

FiniteProbSpace random_space(Rng& rng, int m, bool allow_null) {
  std::vector<std::int64_t> raw(m);
  std::int64_t total = 0;
  while (total == 0) {
    total = 0;
    for (auto& w : raw) {
      w = (allow_null && rng.below(8) == 0) ? 0 : rng.between(1, 9);
      total += w;
    }
  }
  std::vector<Rational> w(m);
  for (int x = 0; x < m; ++x) w[x] = Rational(raw[x], total);
  return FiniteProbSpace(std::move(w));
}

// Smallest dyadic r = k / 2^30 with r^2 >= target, scaled up by a random
// factor in [1, 1.5) so that not every instance is tight.
Rational sqrt_upper(const Rational& target, Rng& rng) {
  const double guess = std::sqrt(to_double(target)) * (1.0 + 0.5 * rng.uniform());
  const Integer scale = Integer(1) << 30;
  Rational r(Integer(static_cast<std::int64_t>(std::ceil(guess * 1073741824.0))), scale);
  while (r * r < target) r += Rational(Integer(1), scale);
  return r;
}

double ratio(const Rational& error, double bound) {
  return bound > 0 ? to_double(error) / bound : (error == 0 ? 0.0 : INFINITY);
}

void tally(SuiteReport& rep, std::uint64_t i, bool ok, double r) {
  ++rep.instances;
  rep.worst_ratio = std::max(rep.worst_ratio, r);
  if (!ok) {
    ++rep.violations;
    if (rep.violating_instances.size() < 100) rep.violating_instances.push_back(i);
  }
}

}  // namespace

SuiteReport run_level_set_suite(std::uint64_t seed, std::uint64_t instances) {
  SuiteReport rep{"B1", 0, 0, {}, 0.0};
  for (std::uint64_t i = 0; i < instances; ++i) {
    Rng rng(derive_seed(seed, i));
    const int m = static_cast<int>(rng.between(1, 64));
    const FiniteProbSpace omega = random_space(rng, m, true);
    const int nb = static_cast<int>(rng.between(1, m));
    std::vector<int> label(m);
    for (auto& l : label) l = static_cast<int>(rng.below(nb));
    const PartitionSigma p(label);
    // A union of blocks with a few points flipped.
    std::vector<bool> chosen(p.block_count());
    for (auto&& c : chosen) c = rng.coin();
    const std::uint64_t flip = rng.between(2, 16);
    PointSet s(m);
    for (int x = 0; x < m; ++x) s[x] = chosen[p.block_of(x)] != (rng.below(flip) == 0);
    const PointFunction e = cond_expect(indicator(s), p, omega);
    Rational l2sq = 0;
    for (int x = 0; x < m; ++x) {
      const Rational d = Rational(s[x] ? 1 : 0) - e[x];
      l2sq += omega.weight(x) * d * d;
    }
    const Rational eps = l2sq == 0 ? Rational(1, rng.between(1, 1000)) : sqrt_upper(l2sq, rng);
    const auto r = level_set_approx(s, p, omega, eps);
    const bool ok = r.precondition && r.bound_holds.value_or(false);
    tally(rep, i, ok, ratio(r.error, 5.0 * std::sqrt(to_double(eps))));
  }
  return rep;
}

SuiteReport run_intersection_suite(std::uint64_t seed, std::uint64_t instances) {
  SuiteReport rep{"B2", 0, 0, {}, 0.0};
  for (std::uint64_t i = 0; i < instances; ++i) {
    Rng rng(derive_seed(seed, i));
    // Omega = A x B x C with lambda(a, b, c) = w(c) w(a | c) w(b | c): the
    // partitions by (a, c) and by (b, c) are independent given c.
    const int na = static_cast<int>(rng.between(1, 4));
    const int nb = static_cast<int>(rng.between(1, 4));
    const int nc = static_cast<int>(rng.between(1, 4));
    const int m = na * nb * nc;
    auto point = [&](int a, int b, int c) { return (c * nb + b) * na + a; };
    const FiniteProbSpace wc = random_space(rng, nc, true);
    std::vector<FiniteProbSpace> wa, wb;
    for (int c = 0; c < nc; ++c) {
      wa.push_back(random_space(rng, na, true));
      wb.push_back(random_space(rng, nb, true));
    }
    std::vector<Rational> w(m);
    std::vector<int> l0(m), l1(m);
    for (int c = 0; c < nc; ++c) {
      for (int b = 0; b < nb; ++b) {
        for (int a = 0; a < na; ++a) {
          const int x = point(a, b, c);
          w[x] = wc.weight(c) * wa[c].weight(a) * wb[c].weight(b);
          l0[x] = c * na + a;
          l1[x] = c * nb + b;
        }
      }
    }
    const FiniteProbSpace omega(std::move(w));
    const PartitionSigma p0(l0), p1(l1);
    // S0, S1: the same set of c-fibres, each with a few (a, c) resp. (b, c)
    // cells flipped.
    std::vector<bool> tc(nc);
    for (auto&& t : tc) t = rng.coin();
    const std::uint64_t flip = rng.between(2, 10);
    std::vector<bool> fa(nc * na), fb(nc * nb);
    for (auto&& f : fa) f = rng.below(flip) == 0;
    for (auto&& f : fb) f = rng.below(flip) == 0;
    PointSet s0(m), s1(m);
    for (int c = 0; c < nc; ++c) {
      for (int b = 0; b < nb; ++b) {
        for (int a = 0; a < na; ++a) {
          const int x = point(a, b, c);
          s0[x] = tc[c] != fa[c * na + a];
          s1[x] = tc[c] != fb[c * nb + b];
        }
      }
    }
    Rational eps = measure(omega, symmetric_difference(s0, s1));
    if (rng.coin()) eps *= Rational(rng.between(100, 150), 100);
    const auto r = ci_intersection_approx(s0, s1, p0, p1, omega, eps);
    const bool ok = r.precondition_failures.empty() && r.bound_holds.value_or(false);
    const double bound = 10.0 * std::pow(to_double(eps), 0.25);
    tally(rep, i, ok, std::max(ratio(r.error0, bound), ratio(r.error1, bound)));
  }
  return rep;
}

SuiteReport run_invariant_suite(std::uint64_t seed, std::uint64_t instances) {
  SuiteReport rep{"B3", 0, 0, {}, 0.0};
  for (std::uint64_t i = 0; i < instances; ++i) {
    Rng rng(derive_seed(seed, i));
    // G = Z_a x Z_b, |G| <= 8, acting on a disjoint union of orbits
    // Z_a' x Z_b' with a' | a and b' | b.
    const int a = static_cast<int>(rng.between(1, 8));
    const int b = static_cast<int>(rng.between(1, 8 / a));
    auto divisor = [&](int n) {
      std::vector<int> d;
      for (int k = 1; k <= n; ++k) {
        if (n % k == 0) d.push_back(k);
      }
      return d[rng.below(d.size())];
    };
    struct Orbit {
      int start, a, b;
    };
    std::vector<Orbit> orbits;
    int m = 0;
    const int target = static_cast<int>(rng.between(1, 32));
    while (true) {
      const int oa = divisor(a), ob = divisor(b);
      if (m + oa * ob > 32 || (m >= target && !orbits.empty())) break;
      orbits.push_back({m, oa, ob});
      m += oa * ob;
    }
    std::vector<std::int64_t> raw(orbits.size());
    std::int64_t total = 0;
    for (std::size_t o = 0; o < orbits.size(); ++o) {
      raw[o] = (o > 0 && rng.below(8) == 0) ? 0 : rng.between(1, 9);
      total += raw[o] * orbits[o].a * orbits[o].b;
    }
    std::vector<Rational> w(m);
    for (std::size_t o = 0; o < orbits.size(); ++o) {
      for (int k = 0; k < orbits[o].a * orbits[o].b; ++k) {
        w[orbits[o].start + k] = Rational(raw[o], total);
      }
    }
    const FiniteProbSpace omega(std::move(w));
    GroupAction action;
    for (int gi = 0; gi < a; ++gi) {
      for (int gj = 0; gj < b; ++gj) {
        std::vector<int> perm(m);
        for (const auto& o : orbits) {
          for (int y = 0; y < o.b; ++y) {
            for (int x = 0; x < o.a; ++x) {
              perm[o.start + y * o.a + x] = o.start + ((y + gj) % o.b) * o.a + (x + gi) % o.a;
            }
          }
        }
        action.push_back(std::move(perm));
      }
    }
    // A union of orbits with a few points flipped.
    const std::uint64_t flip = rng.between(2, 12);
    PointSet s(m);
    for (const auto& o : orbits) {
      const bool in = rng.coin();
      for (int k = 0; k < o.a * o.b; ++k) s[o.start + k] = in != (rng.below(flip) == 0);
    }
    Rational eps = 0;
    for (const auto& g : action) {
      PointSet gs(m, false);
      for (int x = 0; x < m; ++x) {
        if (s[x]) gs[g[x]] = true;
      }
      eps = std::max(eps, measure(omega, symmetric_difference(s, gs)));
    }
    if (eps == 0) eps = Rational(1, rng.between(1, 1000));
    const auto r = invariant_approx(s, action, omega, eps);
    const bool ok = r.precondition_failures.empty() && r.bound_holds.value_or(false);
    tally(rep, i, ok, ratio(r.error, 5.0 * std::pow(to_double(eps), 0.25)));
  }
  return rep;
}

}  // namespace nilkit
