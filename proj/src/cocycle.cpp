#include "nilkit/cocycle.hpp"

#include <unordered_map>

namespace nilkit {

namespace {

Rational mod1(const Rational& r) { return frac(r); }

struct KeyHash {
  std::size_t operator()(const CubeKey& k) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto x : k) h = (h ^ static_cast<std::size_t>(x)) * 0x100000001b3ULL;
    return h;
  }
};

// Face {v_1 = 1} (upper) or {v_1 = 0} as a key.
CubeKey half_key(const CubeKey& full, bool upper) {
  CubeKey out;
  out.reserve(full.size() / 2);
  for (std::size_t v = 0; v < full.size(); v += 2) out.push_back(full[upper ? (v | 1) : v]);
  return out;
}

std::string describe(const CubeAutomorphism& theta) {
  std::string s = "perm=(";
  for (std::size_t i = 0; i < theta.permutation().size(); ++i) {
    if (i) s += ",";
    s += std::to_string(theta.permutation()[i]);
  }
  return s + ") reflect=" + std::to_string(theta.reflection_mask());
}

// Random cube adjacent to q1 (see check_cocycle_axioms): the constant
// extension of q1's face {v_1 = 1} plus a random cube vanishing on {v_1 = 0}.
GroupCube random_partner(const FiniteAbelianGroup& g, const GroupCube& q1, Rng& rng,
                         int domain_degree) {
  const int n = q1.dimension();
  const GroupCube r = sample_cube(g, n, rng, domain_degree);
  std::vector<FiniteAbelianGroup::Element> values(q1.size());
  for (Vertex v = 0; v < q1.size(); ++v) {
    const Vertex low = v & ~Vertex{1};
    values[v] = g.add(q1[low | 1], g.sub(r[v], r[low]));
  }
  return GroupCube(n, std::move(values));
}

}  // namespace

// ---------------------------------------------------------------------------

bool CircleTarget::contains(const Rational& r) const {
  if (modulus == 0) return true;
  return is_integer(r * Rational(modulus));
}

Rational CircleTarget::distance(const Rational& a, const Rational& b) const {
  return circle_distance(a - b);
}

std::string CircleTarget::to_string() const {
  return modulus == 0 ? "circle" : "Z" + std::to_string(modulus);
}

CubeKey cube_key(const FiniteAbelianGroup& group, const GroupCube& q) {
  CubeKey k;
  k.reserve(q.size());
  for (Vertex v = 0; v < q.size(); ++v) k.push_back(group.index(q[v]));
  return k;
}

// ---------------------------------------------------------------------------

Cocycle::Cocycle(FiniteAbelianGroup domain, int k, CircleTarget target, Function rho,
                 int domain_degree)
    : domain_(std::move(domain)),
      k_(k),
      target_(target),
      rho_(std::move(rho)),
      domain_degree_(domain_degree) {
  if (k < -1) throw MismatchError("cocycle degree must be >= -1");
  if (k + 1 > kMaxCubeDimension) throw MismatchError("cocycle degree too large");
  if (domain_degree < 1) throw MismatchError("domain degree must be >= 1");
}

Rational Cocycle::operator()(const GroupCube& q) const {
  if (q.dimension() != cube_dimension()) {
    throw MismatchError("cocycle of degree " + std::to_string(k_) + " takes " +
                        std::to_string(cube_dimension()) + "-cubes");
  }
  if (!overrides_.empty()) {
    auto it = overrides_.find(cube_key(domain_, q));
    if (it != overrides_.end()) return it->second;
  }
  const Rational v = mod1(rho_(q));
  if (!target_.contains(v)) throw MismatchError("cocycle value leaves the target group");
  return v;
}

Cocycle Cocycle::perturbed(const GroupCube& q, const Rational& value) const {
  if (q.dimension() != cube_dimension()) throw MismatchError("wrong cube dimension");
  Cocycle c = *this;
  c.overrides_[cube_key(domain_, q)] = mod1(value);
  return c;
}

Cocycle coboundary_from(const FiniteAbelianGroup& domain, const CircleMap& g, int k,
                        CircleTarget target, int domain_degree) {
  if (g.size() != static_cast<std::size_t>(domain.order())) {
    throw MismatchError("map needs one value per domain element");
  }
  for (const auto& v : g) {
    if (!target.contains(v)) throw MismatchError("map value leaves the target group");
  }
  auto rho = [domain, g](const GroupCube& q) {
    Rational acc = 0;
    for (Vertex v = 0; v < q.size(); ++v) {
      const Rational& x = g[domain.index(q[v])];
      if (weight(v) & 1) acc -= x;
      else acc += x;
    }
    return acc;
  };
  return Cocycle(domain, k, target, rho, domain_degree);
}

// ---------------------------------------------------------------------------

AxiomReport check_cocycle_axioms(const Cocycle& rho, const SamplingOptions& opt) {
  const auto& X = rho.domain();
  const int n = rho.cube_dimension();
  AxiomReport report;
  report.vacuous = n == 0;
  const auto autos = all_automorphisms(n);

  auto record = [&](Violation v) {
    ++report.violation_count;
    if (report.violations.size() < opt.max_listed) report.violations.push_back(std::move(v));
  };
  auto check_auto = [&](const GroupCube& q, const CubeAutomorphism& theta, const Rational& rq) {
    ++report.automorphism_checks;
    const Rational expected = mod1((theta.reflections() & 1) ? -rq : rq);
    const Rational actual = rho(apply_automorphism(q, theta));
    if (actual != expected) {
      record({"automorphism", {cube_key(X, q)}, describe(theta), expected, actual});
    }
  };
  auto check_concat = [&](const GroupCube& q1, const GroupCube& q2, const Rational& r1) {
    ++report.concatenation_checks;
    const GroupCube q3 = concatenate(q1, q2);
    const Rational expected = mod1(r1 + rho(q2));
    const Rational actual = rho(q3);
    if (actual != expected) {
      record({"concatenation",
              {cube_key(X, q1), cube_key(X, q2), cube_key(X, q3)},
              "q3 = q1 ++ q2 along the first coordinate",
              expected,
              actual});
    }
  };

  if (opt.mode == Mode::Enumerate) {
    const auto cubes = enumerate_cubes(X, n, rho.domain_degree(), opt.budget);
    std::vector<Rational> values;
    values.reserve(cubes.size());
    for (const auto& q : cubes) values.push_back(rho(q));
    for (std::size_t i = 0; i < cubes.size(); ++i) {
      for (const auto& theta : autos) check_auto(cubes[i], theta, values[i]);
    }
    if (n >= 1) {
      std::unordered_map<CubeKey, std::vector<std::size_t>, KeyHash> by_lower;
      std::vector<CubeKey> keys;
      keys.reserve(cubes.size());
      for (std::size_t i = 0; i < cubes.size(); ++i) {
        keys.push_back(cube_key(X, cubes[i]));
        by_lower[half_key(keys.back(), false)].push_back(i);
      }
      for (std::size_t i = 0; i < cubes.size(); ++i) {
        auto it = by_lower.find(half_key(keys[i], true));
        if (it == by_lower.end()) continue;
        for (std::size_t j : it->second) check_concat(cubes[i], cubes[j], values[i]);
      }
    }
  } else {
    Rng rng(opt.seed);
    for (std::uint64_t s = 0; s < opt.samples; ++s) {
      const GroupCube q = sample_cube(X, n, rng, rho.domain_degree());
      const Rational rq = rho(q);
      check_auto(q, autos[rng.below(autos.size())], rq);
      if (n >= 1) check_concat(q, random_partner(X, q, rng, rho.domain_degree()), rq);
    }
  }
  return report;
}

D1Result d1_to_zero(const Cocycle& rho, const SamplingOptions& opt) {
  D1Result out;
  const auto& target = rho.target();
  if (opt.mode == Mode::Enumerate) {
    Rational total = 0;
    for_each_cube(
        rho.domain(), rho.cube_dimension(),
        [&](const GroupCube& q) {
          total += target.distance(rho(q), 0);
          ++out.cubes;
        },
        rho.domain_degree(), opt.budget);
    out.exact = total / Rational(out.cubes);
    out.value = to_double(*out.exact);
  } else {
    Rng rng(opt.seed);
    Rational total = 0;
    for (std::uint64_t s = 0; s < opt.samples; ++s) {
      total += target.distance(rho(sample_cube(rho.domain(), rho.cube_dimension(), rng,
                                                rho.domain_degree())),
                               0);
      ++out.cubes;
    }
    out.value = to_double(total / Rational(std::max<std::uint64_t>(out.cubes, 1)));
  }
  return out;
}

std::vector<DefectRow> quasimorphism_defect(const FiniteAbelianGroup& domain,
                                            const CircleMap& phi, int k,
                                            const std::vector<Rational>& deltas,
                                            const SamplingOptions& opt, CorrectionRule rule,
                                            CircleTarget target) {
  if (phi.size() != static_cast<std::size_t>(domain.order())) {
    throw MismatchError("map needs one value per domain element");
  }
  if (k < 0) throw MismatchError("the defect needs k >= 0");
  if (rule == CorrectionRule::Spread && target.modulus != 0) {
    throw MismatchError("the spread correction needs the circle target");
  }
  const int n = k + 1;
  const Rational spread = Rational(1) / Rational(Integer(1) << n);

  // Distance from phi o q to the corrected cube.
  auto defect_of = [&](const GroupCube& q) {
    Rational sigma = 0;
    for (Vertex v = 0; v < q.size(); ++v) {
      const Rational& x = phi[domain.index(q[v])];
      if (weight(v) & 1) sigma -= x;
      else sigma += x;
    }
    const Rational d = circle_distance(sigma);
    return rule == CorrectionRule::OneVertex ? d : d * spread;
  };

  std::vector<DefectRow> rows;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    DefectRow row;
    row.delta = deltas[i];
    auto visit = [&](const GroupCube& q) {
      ++row.cubes;
      if (defect_of(q) > row.delta) ++row.failures;
    };
    if (opt.mode == Mode::Enumerate) {
      for_each_cube(domain, n, visit, 1, opt.budget);
    } else {
      Rng rng(derive_seed(opt.seed, i));
      for (std::uint64_t s = 0; s < opt.samples; ++s) visit(sample_cube(domain, n, rng));
    }
    row.failure_fraction =
        static_cast<double>(row.failures) / static_cast<double>(std::max<std::uint64_t>(row.cubes, 1));
    row.quasi = Rational(row.failures) <= row.delta * Rational(row.cubes);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace nilkit
