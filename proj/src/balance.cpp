#include "nilkit/balance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nilkit/error.hpp"
#include "nilkit/group_cube.hpp"
#include "nilkit/pairwise_sum.hpp"
#include "nilkit/rng.hpp"

namespace nilkit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double frac(double x) {
  double f = x - std::floor(x);
  return f >= 1.0 ? 0.0 : f;
}

double tent(double u) { return std::max(0.0, 1.0 - std::abs(2.0 * u - 1.0)); }

// All vectors in Z^L with L1 norm s and first nonzero entry positive, in
// descending lexicographic order.
void vectors_of_norm(int L, int s, std::vector<std::vector<int>>& out) {
  std::vector<int> cur(L, 0);
  // Recursive fill, trying larger entries first.
  std::function<void(int, int, bool)> rec = [&](int pos, int left, bool seen_nonzero) {
    if (pos == L) {
      if (left == 0) out.push_back(cur);
      return;
    }
    for (int v = left; v >= -left; --v) {
      if (!seen_nonzero && v < 0) continue;
      const int rest = left - std::abs(v);
      if (pos == L - 1 && rest != 0) continue;
      cur[pos] = v;
      rec(pos + 1, rest, seen_nonzero || v != 0);
    }
    cur[pos] = 0;
  };
  rec(0, s, false);
}

// Torus or Heisenberg element arithmetic in doubles for sampling.
struct H3 {
  double x = 0, y = 0, z = 0;
};
H3 mul(const H3& a, const H3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z + a.x * b.y}; }
H3 reduce(H3 g) {
  const double fx = std::floor(g.x);
  g.x -= fx;
  const double fy = std::floor(g.y);
  g.y -= fy;
  g.z -= g.x * fy;
  g.z = frac(g.z);
  g.x = frac(g.x);
  g.y = frac(g.y);
  return g;
}

// Vertices |v| <= k sorted by weight then value: 0, e_1, ..., e_n, ...
std::vector<Vertex> parameter_order(int n, int k) {
  std::vector<Vertex> vs;
  for (Vertex v = 0; v < (Vertex{1} << n); ++v) {
    if (weight(v) <= k) vs.push_back(v);
  }
  std::stable_sort(vs.begin(), vs.end(), [](Vertex a, Vertex b) { return weight(a) < weight(b); });
  return vs;
}

void check_measures(const EmpiricalCubeMeasure& mu, const EmpiricalCubeMeasure& nu) {
  if (!(mu.target == nu.target) || mu.n != nu.n) {
    throw MismatchError("cube measures live on different targets or dimensions");
  }
  if (mu.size() == 0 || nu.size() == 0) throw MismatchError("empty cube measure");
}

// Per-sample values of the weighted test functions that make up the metric.
struct Features {
  std::vector<double> weights;
  std::vector<std::vector<double>> mu, nu;  // [sample][feature]
};

void append_family(const EmpiricalCubeMeasure& mu, const EmpiricalCubeMeasure& nu, int R,
                   Features& f) {
  const TestFunctionFamily fam(mu.target, mu.n, R);
  for (int r = 1; r <= R; ++r) f.weights.push_back(std::ldexp(1.0, -r));
  auto fill = [&](const EmpiricalCubeMeasure& m, std::vector<std::vector<double>>& rows) {
    rows.resize(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (int r = 1; r <= R; ++r) rows[i].push_back(fam(r, m.cubes[i]));
    }
  };
  fill(mu, f.mu);
  fill(nu, f.nu);
}

Features features_for(const EmpiricalCubeMeasure& mu, const EmpiricalCubeMeasure& nu, int R) {
  Features f;
  append_family(mu, nu, R, f);
  if (mu.target.kind == BalanceTarget::Kind::Heisenberg) {
    append_family(project_to_torus(mu), project_to_torus(nu), R, f);
  }
  return f;
}

double distance_on(const Features& f, const std::vector<std::size_t>* idx_mu,
                   const std::vector<std::size_t>* idx_nu) {
  const std::size_t nf = f.weights.size();
  const std::size_t nm = idx_mu ? idx_mu->size() : f.mu.size();
  const std::size_t nn = idx_nu ? idx_nu->size() : f.nu.size();
  double total = 0.0;
  for (std::size_t j = 0; j < nf; ++j) {
    PairwiseSum<double> a, b;
    for (std::size_t i = 0; i < nm; ++i) a.add(f.mu[idx_mu ? (*idx_mu)[i] : i][j]);
    for (std::size_t i = 0; i < nn; ++i) b.add(f.nu[idx_nu ? (*idx_nu)[i] : i][j]);
    total += f.weights[j] * std::abs(a.total() / static_cast<double>(nm) -
                                     b.total() / static_cast<double>(nn));
  }
  return total;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string BalanceTarget::to_string() const {
  if (kind == Kind::Heisenberg) return "heis";
  return "D" + std::to_string(k) + "(T^" + std::to_string(m) + ")";
}

TestFunctionFamily::TestFunctionFamily(BalanceTarget target, int n, int R)
    : target_(target), n_(n), R_(R) {
  if (R < 1) throw MismatchError("truncation index must be >= 1");
  if (n < 0 || n > 4) throw MismatchError("cube dimension out of range for the family");
  const int L = (1 << n) * target.coordinates();
  const std::size_t needed = static_cast<std::size_t>((R + 1) / 2);
  for (int s = 1; freqs_.size() < needed; ++s) {
    std::vector<std::vector<int>> layer;
    vectors_of_norm(L, s, layer);
    for (auto& v : layer) {
      if (freqs_.size() == needed) break;
      freqs_.push_back(std::move(v));
    }
  }
}

double TestFunctionFamily::operator()(int r, const std::vector<double>& cube) const {
  if (r < 1 || r > R_) throw MismatchError("test function index out of range");
  const auto& xi = freqs_[(r - 1) / 2];
  const int d = target_.coordinates();
  double phase = 0.0, damp = 1.0;
  for (std::size_t j = 0; j < xi.size(); ++j) {
    if (xi[j] == 0) continue;
    phase += xi[j] * cube[j];
    if (target_.kind == BalanceTarget::Kind::Heisenberg && j % d == 2) {
      damp *= tent(cube[j - 1]);
    }
  }
  const double t = kTwoPi * phase;
  return damp * ((r % 2 == 1) ? std::cos(t) : std::sin(t));
}

MetricValue metric_d_prime(const EmpiricalCubeMeasure& mu, const EmpiricalCubeMeasure& nu,
                           const TestFunctionFamily& family) {
  check_measures(mu, nu);
  Features f;
  append_family(mu, nu, family.size(), f);
  return {distance_on(f, nullptr, nullptr), std::ldexp(1.0, 1 - family.size())};
}

MetricValue metric_d_prime(const EmpiricalCubeMeasure& mu, const EmpiricalCubeMeasure& nu, int R) {
  check_measures(mu, nu);
  return metric_d_prime(mu, nu, TestFunctionFamily(mu.target, mu.n, R));
}

EmpiricalCubeMeasure project_to_torus(const EmpiricalCubeMeasure& mu) {
  if (mu.target.kind != BalanceTarget::Kind::Heisenberg) {
    throw MismatchError("only the Heisenberg target has a torus factor");
  }
  EmpiricalCubeMeasure out{BalanceTarget::torus(2, 1), mu.n, {}};
  out.cubes.reserve(mu.size());
  for (const auto& c : mu.cubes) {
    std::vector<double> p;
    p.reserve(c.size() / 3 * 2);
    for (std::size_t v = 0; v < c.size(); v += 3) {
      p.push_back(c[v]);
      p.push_back(c[v + 1]);
    }
    out.cubes.push_back(std::move(p));
  }
  return out;
}

FactorMetric factor_consistent_metric(const EmpiricalCubeMeasure& mu,
                                      const EmpiricalCubeMeasure& nu, int R) {
  check_measures(mu, nu);
  FactorMetric out;
  out.terms.push_back(metric_d_prime(mu, nu, R).value);
  if (mu.target.kind == BalanceTarget::Kind::Heisenberg) {
    out.terms.push_back(metric_d_prime(project_to_torus(mu), project_to_torus(nu), R).value);
  }
  for (double t : out.terms) out.value += t;
  out.truncation_bound = static_cast<double>(out.terms.size()) * std::ldexp(1.0, 1 - R);
  return out;
}

// ---------------------------------------------------------------------------

EmpiricalCubeMeasure haar_cube_sampler(const BalanceTarget& target, int n, std::uint64_t samples,
                                       std::uint64_t seed) {
  if (n < 0 || n > 4) throw MismatchError("cube dimension out of range");
  if (samples < 1) throw MismatchError("need at least one sample");
  EmpiricalCubeMeasure out{target, n, {}};
  out.cubes.reserve(samples);
  const int nv = 1 << n;
  const int d = target.coordinates();

  if (target.kind == BalanceTarget::Kind::Torus) {
    const auto params = parameter_order(n, target.k);
    for (std::uint64_t s = 0; s < samples; ++s) {
      Rng rng(derive_seed(seed, s));
      std::vector<double> a(params.size() * d);
      for (auto& x : a) x = rng.uniform();
      std::vector<double> cube(static_cast<std::size_t>(nv * d), 0.0);
      for (int w = 0; w < nv; ++w) {
        for (std::size_t j = 0; j < params.size(); ++j) {
          if ((params[j] & w) != params[j]) continue;
          for (int c = 0; c < d; ++c) cube[w * d + c] += a[j * d + c];
        }
        for (int c = 0; c < d; ++c) cube[w * d + c] = frac(cube[w * d + c]);
      }
      out.cubes.push_back(std::move(cube));
    }
    return out;
  }

  // Heisenberg: face factorization over the upper faces F_v in canonical
  // order, with g_v uniform in G_1 = G for |v| <= 1 and in G_2 = Z(G) beyond.
  const auto params = parameter_order(n, n);
  const auto order = canonical_vertex_order(n);
  for (std::uint64_t s = 0; s < samples; ++s) {
    Rng rng(derive_seed(seed, s));
    std::vector<H3> g(static_cast<std::size_t>(nv));
    for (Vertex v : params) {
      if (weight(v) <= 1) {
        g[v].x = rng.uniform();
        g[v].y = rng.uniform();
        g[v].z = rng.uniform();
      } else {
        g[v].z = rng.uniform();
      }
    }
    std::vector<double> cube(static_cast<std::size_t>(nv * 3));
    for (int w = 0; w < nv; ++w) {
      H3 acc;
      for (Vertex v : order) {
        if ((v & w) == v) acc = mul(acc, g[v]);
      }
      acc = reduce(acc);
      cube[w * 3] = acc.x;
      cube[w * 3 + 1] = acc.y;
      cube[w * 3 + 2] = acc.z;
    }
    out.cubes.push_back(std::move(cube));
  }
  return out;
}

EmpiricalCubeMeasure pushforward_sampler(const BalanceTarget& target, const PointMap& phi, int n,
                                         std::uint64_t samples, std::uint64_t seed) {
  if (n < 0 || n > 4) throw MismatchError("cube dimension out of range");
  if (samples < 1) throw MismatchError("need at least one sample");
  const std::int64_t p = static_cast<std::int64_t>(phi.size());
  if (p < 1) throw MismatchError("empty map");
  const int d = target.coordinates();
  for (const auto& pt : phi) {
    if (static_cast<int>(pt.size()) != d) throw MismatchError("map values have the wrong arity");
  }
  // Uniforms consumed per parameter block by haar_cube_sampler.
  const int block = d;
  EmpiricalCubeMeasure out{target, n, {}};
  out.cubes.reserve(samples);
  const int nv = 1 << n;
  for (std::uint64_t s = 0; s < samples; ++s) {
    Rng rng(derive_seed(seed, s));
    std::vector<std::int64_t> par(static_cast<std::size_t>(n + 1));
    for (auto& x : par) {
      const double u = rng.uniform();
      for (int skip = 1; skip < block; ++skip) rng.uniform();
      x = std::min<std::int64_t>(p - 1, static_cast<std::int64_t>(std::floor(u * static_cast<double>(p))));
    }
    std::vector<double> cube;
    cube.reserve(static_cast<std::size_t>(nv * d));
    for (int w = 0; w < nv; ++w) {
      std::int64_t x = par[0];
      for (int i = 0; i < n; ++i) {
        if (w & (1 << i)) x = (x + par[i + 1]) % p;
      }
      cube.insert(cube.end(), phi[x].begin(), phi[x].end());
    }
    out.cubes.push_back(std::move(cube));
  }
  return out;
}

PointMap linear_circle_map(std::int64_t p, std::int64_t a) {
  if (p < 1) throw MismatchError("p must be >= 1");
  PointMap phi(static_cast<std::size_t>(p));
  for (std::int64_t x = 0; x < p; ++x) {
    const std::int64_t r = ((a % p) * x % p + p) % p;
    phi[x] = {static_cast<double>(r) / static_cast<double>(p)};
  }
  return phi;
}

// ---------------------------------------------------------------------------

namespace {

// Exact d' between the full pushforward and the Haar measure of D_k(T^m).
double exact_torus_distance(const BalanceTarget& target, const PointMap& phi, int n, int R) {
  const std::int64_t p = static_cast<std::int64_t>(phi.size());
  const int d = target.coordinates();
  const TestFunctionFamily fam(target, n, R);
  const auto zp = FiniteAbelianGroup::cyclic(p);
  std::vector<PairwiseSum<double>> sums(static_cast<std::size_t>(R));
  std::uint64_t count = 0;
  for_each_cube(zp, n, [&](const GroupCube& q) {
    std::vector<double> cube;
    for (Vertex w = 0; w < q.size(); ++w) {
      const auto& pt = phi[q[w](0)];
      cube.insert(cube.end(), pt.begin(), pt.end());
    }
    for (int r = 1; r <= R; ++r) sums[r - 1].add(fam(r, cube));
    ++count;
  });
  // Haar moments: E e(xi . q) = 1 iff sum_{w >= u} xi_w = 0 for every
  // parameter vertex u (|u| <= k) and coordinate, else 0.
  const auto params = parameter_order(n, target.k);
  double total = 0.0;
  for (int r = 1; r <= R; ++r) {
    const auto& xi = fam.frequencies()[(r - 1) / 2];
    bool trivial = true;
    for (Vertex u : params) {
      for (int c = 0; c < d && trivial; ++c) {
        long acc = 0;
        for (Vertex w = 0; w < (Vertex{1} << n); ++w) {
          if ((u & w) == u) acc += xi[w * d + c];
        }
        trivial = acc == 0;
      }
    }
    const double haar = (r % 2 == 1 && trivial) ? 1.0 : 0.0;
    total += std::ldexp(1.0, -r) * std::abs(sums[r - 1].total() / static_cast<double>(count) - haar);
  }
  return total;
}

}  // namespace

BalanceRow balance_distance(const BalanceTarget& target, const PointMap& phi, int n,
                            const BalanceOptions& opt) {
  BalanceRow row;
  row.n = n;
  if (opt.exact) {
    if (target.kind != BalanceTarget::Kind::Torus || phi.size() > 13 || n > 2) {
      throw MismatchError("exact mode supports torus targets with p <= 13 and n <= 2");
    }
    row.d = exact_torus_distance(target, phi, n, opt.R);
    return row;
  }
  const auto mu = pushforward_sampler(target, phi, n, opt.samples, opt.seed);
  const auto nu = haar_cube_sampler(target, n, opt.samples, opt.seed);
  const Features f = features_for(mu, nu, opt.R);
  row.d = distance_on(f, nullptr, nullptr);
  if (opt.bootstrap > 1) {
    // Paired resampling keeps the coupling between the two measures.
    PairwiseSum<double> s1, s2;
    std::vector<std::size_t> idx(opt.samples);
    for (int b = 0; b < opt.bootstrap; ++b) {
      Rng rng(derive_seed(opt.seed ^ 0xB007B007ULL, static_cast<std::uint64_t>(b)));
      for (auto& i : idx) i = rng.below(opt.samples);
      const double v = distance_on(f, &idx, &idx);
      s1.add(v);
      s2.add(v * v);
    }
    const double m = s1.total() / opt.bootstrap;
    row.spread = std::sqrt(std::max(0.0, s2.total() / opt.bootstrap - m * m));
  }
  return row;
}

BalanceResult balance_of(const BalanceTarget& target, const PointMap& phi,
                         const std::vector<double>& b_grid, const BalanceOptions& opt) {
  BalanceResult out;
  std::vector<std::optional<BalanceRow>> by_n;
  auto row_for = [&](int n) -> const BalanceRow& {
    if (static_cast<int>(by_n.size()) <= n) by_n.resize(n + 1);
    if (!by_n[n]) by_n[n] = balance_distance(target, phi, n, opt);
    return *by_n[n];
  };
  for (double b : b_grid) {
    if (!(b > 0.0)) throw MismatchError("grid values must be positive");
    const int top = static_cast<int>(std::floor(1.0 / b + 1e-12));
    if (top > 3) throw MismatchError("grid value " + std::to_string(b) + " needs n > 3");
    bool all = true;
    for (int n = 1; n <= top; ++n) {
      BalanceRow row = row_for(n);
      row.b = b;
      row.pass = row.d <= b;
      all = all && row.pass;
      out.table.push_back(row);
    }
    out.verdicts.emplace_back(b, all);
    if (all && (!out.smallest_b || b < *out.smallest_b)) out.smallest_b = b;
  }
  return out;
}

}  // namespace nilkit
