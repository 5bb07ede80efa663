#pragma once

// Cocycles of degree k on D_j(X) for a finite abelian group X, valued in the
// circle R/Z or in Z_m (embedded in the circle as a/m).

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nilkit/group_cube.hpp"
#include "nilkit/rational.hpp"

namespace nilkit {

/// Circle R/Z, or its subgroup Z_m. Values are rationals read mod 1.
struct CircleTarget {
  /// 0 for the full circle.
  std::int64_t modulus = 0;

  static CircleTarget circle() { return {0}; }
  static CircleTarget cyclic(std::int64_t m) { return {m}; }

  bool contains(const Rational& r) const;
  /// Distance to the nearest integer. On Z_m this is the cyclic distance
  /// min(a, m - a) / m.
  Rational distance(const Rational& a, const Rational& b) const;
  std::string to_string() const;
};

using CubeKey = std::vector<std::int64_t>;

/// Canonical indices of the vertex values, in vertex order.
CubeKey cube_key(const FiniteAbelianGroup& group, const GroupCube& q);

class Cocycle {
 public:
  using Function = std::function<Rational(const GroupCube&)>;

  /// rho on (k+1)-cubes of D_domain_degree(X).
  Cocycle(FiniteAbelianGroup domain, int k, CircleTarget target, Function rho,
          int domain_degree = 1);

  const FiniteAbelianGroup& domain() const { return domain_; }
  int degree() const { return k_; }
  int cube_dimension() const { return k_ + 1; }
  int domain_degree() const { return domain_degree_; }
  const CircleTarget& target() const { return target_; }

  /// Value in [0, 1).
  Rational operator()(const GroupCube& q) const;

  /// Copy with the value on one cube replaced.
  Cocycle perturbed(const GroupCube& q, const Rational& value) const;

 private:
  FiniteAbelianGroup domain_;
  int k_;
  CircleTarget target_;
  Function rho_;
  int domain_degree_;
  std::map<CubeKey, Rational> overrides_;
};

/// A map X -> target given on canonical indices.
using CircleMap = std::vector<Rational>;

/// rho(q) = sum_v (-1)^{|v|} g(q(v)) on (k+1)-cubes.
Cocycle coboundary_from(const FiniteAbelianGroup& domain, const CircleMap& g, int k,
                        CircleTarget target = CircleTarget::circle(), int domain_degree = 1);

enum class Mode { Enumerate, Sample };

struct Violation {
  /// "automorphism" or "concatenation".
  std::string axiom;
  /// Cubes involved, in vertex order (canonical indices).
  std::vector<CubeKey> cubes;
  std::string detail;
  Rational expected;
  Rational actual;
};

struct AxiomReport {
  std::uint64_t automorphism_checks = 0;
  std::uint64_t concatenation_checks = 0;
  std::uint64_t violation_count = 0;
  /// The first max_listed violations.
  std::vector<Violation> violations;
  bool vacuous = false;
  bool pass() const { return violation_count == 0; }
};

struct SamplingOptions {
  Mode mode = Mode::Enumerate;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultBudget;
  std::size_t max_listed = 100;
};

/// (1) rho(q o theta) = (-1)^{r(theta)} rho(q), every automorphism theta;
/// (2) rho(q1 ++ q2) = rho(q1) + rho(q2) for adjacent q1, q2.
/// Enumerate mode visits every cube and every adjacent pair; sample mode
/// draws one random theta and one random partner per sampled cube.
AxiomReport check_cocycle_axioms(const Cocycle& rho, const SamplingOptions& opt = {});

struct D1Result {
  double value = 0.0;
  /// Exact average in enumerate mode.
  std::optional<Rational> exact;
  std::uint64_t cubes = 0;
};

/// Average of d(rho(q), 0) over cubes.
D1Result d1_to_zero(const Cocycle& rho, const SamplingOptions& opt = {});

enum class CorrectionRule {
  /// Subtract the Gray code at vertex 0 (distance |sigma| at one vertex).
  OneVertex,
  /// Spread the Gray code over all vertices with alternating signs
  /// (distance |sigma| / 2^{k+1} everywhere).
  Spread,
};

struct DefectRow {
  Rational delta;
  std::uint64_t cubes = 0;
  std::uint64_t failures = 0;
  double failure_fraction = 0.0;
  /// failure_fraction <= delta.
  bool quasi = false;
};

/// For each delta, the fraction of (k+1)-cubes q of D_1(X) whose image phi o q
/// is not within delta (vertexwise) of the corrected cube.
std::vector<DefectRow> quasimorphism_defect(const FiniteAbelianGroup& domain,
                                            const CircleMap& phi, int k,
                                            const std::vector<Rational>& deltas,
                                            const SamplingOptions& opt = {},
                                            CorrectionRule rule = CorrectionRule::OneVertex,
                                            CircleTarget target = CircleTarget::circle());

}  // namespace nilkit
