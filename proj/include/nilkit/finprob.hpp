#pragma once

// Finite probability spaces with partition sigma-algebras, and the three
// approximation lemmas for level sets, conditionally independent
// intersections and almost invariant sets. All arithmetic is exact.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nilkit/rational.hpp"

namespace nilkit {

class FiniteProbSpace {
 public:
  explicit FiniteProbSpace(std::vector<Rational> weights);
  static FiniteProbSpace uniform(int points);

  int size() const { return static_cast<int>(weights_.size()); }
  const Rational& weight(int x) const { return weights_[x]; }
  const std::vector<Rational>& weights() const { return weights_; }

 private:
  std::vector<Rational> weights_;
};

/// Subset of the points, as membership flags.
using PointSet = std::vector<bool>;
/// Real function on the points.
using PointFunction = std::vector<Rational>;

class PartitionSigma {
 public:
  /// block_of[x] = label of the block containing x; labels are renumbered in
  /// order of first appearance.
  explicit PartitionSigma(const std::vector<int>& block_of);
  static PartitionSigma from_blocks(int points, const std::vector<std::vector<int>>& blocks);
  static PartitionSigma finest(int points);
  static PartitionSigma coarsest(int points);

  int size() const { return static_cast<int>(block_of_.size()); }
  int block_count() const { return blocks_; }
  int block_of(int x) const { return block_of_[x]; }
  std::vector<std::vector<int>> blocks() const;

  /// Every block of this partition lies inside a block of other.
  bool refines(const PartitionSigma& other) const;
  friend bool operator==(const PartitionSigma& a, const PartitionSigma& b) {
    return a.block_of_ == b.block_of_;
  }

 private:
  std::vector<int> block_of_;
  int blocks_ = 0;
};

Rational measure(const FiniteProbSpace& omega, const PointSet& s);
PointSet symmetric_difference(const PointSet& a, const PointSet& b);
PointFunction indicator(const PointSet& s);

/// Block-wise weighted averages; null blocks get 0.
PointFunction cond_expect(const PointFunction& f, const PartitionSigma& p,
                          const FiniteProbSpace& omega);

/// f is constant on the positive-weight points of every block.
bool is_measurable(const PointFunction& f, const PartitionSigma& p, const FiniteProbSpace& omega);
bool is_measurable(const PointSet& s, const PartitionSigma& p, const FiniteProbSpace& omega);

/// Connected components of the graph joining blocks of p0 and p1 that share a
/// positive-weight point. Null points join the component of the first
/// positive-weight point.
PartitionSigma meet(const PartitionSigma& p0, const PartitionSigma& p1,
                    const FiniteProbSpace& omega);

/// E(1_B | p1) is p0-measurable for every block B of p0.
bool check_cond_independence(const PartitionSigma& p0, const PartitionSigma& p1,
                             const FiniteProbSpace& omega);

struct LevelSetResult {
  PointSet s_prime;
  Rational error;  // lambda(S delta S')
  bool precondition = false;
  /// Only asserted when the precondition holds.
  std::optional<bool> bound_holds;
};

/// S' = {E(1_S | P) > eps^{1/2}}. Precondition ||1_S - E(1_S|P)||_2 <= eps;
/// bound lambda(S delta S') < 5 eps^{1/2}.
LevelSetResult level_set_approx(const PointSet& s, const PartitionSigma& p,
                                const FiniteProbSpace& omega, const Rational& eps);

struct IntersectionResult {
  PointSet c;
  Rational error0, error1;  // lambda(C delta S_i)
  std::vector<std::string> precondition_failures;
  bool meet_measurable = false;
  std::optional<bool> bound_holds;
};

/// C = {E(1_{S0} | P1) > (2 eps^{1/2})^{1/2}}; bound lambda(C delta S_i) <=
/// 10 eps^{1/4}, i = 0, 1.
IntersectionResult ci_intersection_approx(const PointSet& s0, const PointSet& s1,
                                          const PartitionSigma& p0, const PartitionSigma& p1,
                                          const FiniteProbSpace& omega, const Rational& eps);

/// A finite group acting on the points, listed element by element as
/// permutations (perm[g][x] = g . x).
using GroupAction = std::vector<std::vector<int>>;

struct InvariantResult {
  PointSet s_prime;
  Rational error;
  std::vector<std::string> precondition_failures;
  bool invariant = false;
  std::optional<bool> bound_holds;
};

/// S' = {E_g 1_{gS} > eps^{1/4}}; bound lambda(S delta S') <= 5 eps^{1/4}.
/// Throws MismatchError when the action does not preserve the measure.
InvariantResult invariant_approx(const PointSet& s, const GroupAction& action,
                                 const FiniteProbSpace& omega, const Rational& eps);

// ---------------------------------------------------------------------------
// Seeded suites

struct SuiteReport {
  std::string lemma;
  std::uint64_t instances = 0;
  std::uint64_t violations = 0;
  std::vector<std::uint64_t> violating_instances;
  /// Largest observed error / bound ratio (as a double, for reporting).
  double worst_ratio = 0.0;
};

/// Each instance satisfies the lemma's hypotheses by construction.
SuiteReport run_level_set_suite(std::uint64_t seed, std::uint64_t instances);
SuiteReport run_intersection_suite(std::uint64_t seed, std::uint64_t instances);
SuiteReport run_invariant_suite(std::uint64_t seed, std::uint64_t instances);

}  // namespace nilkit
