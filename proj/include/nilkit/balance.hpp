#pragma once

// Balance of maps Z_p -> Y: distances between pushforwards of cube measures
// and the Haar cube measure of Y, for Y = D_k(T^m) or the Heisenberg
// nilmanifold with the lower central series.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nilkit {

struct BalanceTarget {
  enum class Kind { Torus, Heisenberg };
  Kind kind = Kind::Torus;
  /// Torus dimension m (3 coordinates for Heisenberg).
  int m = 1;
  /// Degree k of the cube structure.
  int k = 1;

  static BalanceTarget torus(int m, int k) { return {Kind::Torus, m, k}; }
  static BalanceTarget heisenberg() { return {Kind::Heisenberg, 3, 2}; }

  int coordinates() const { return kind == Kind::Heisenberg ? 3 : m; }
  std::string to_string() const;
  friend bool operator==(const BalanceTarget&, const BalanceTarget&) = default;
};

/// Sampled n-cubes on the target, each stored as 2^n vertices of
/// target.coordinates() values in [0, 1), vertex-major.
struct EmpiricalCubeMeasure {
  BalanceTarget target;
  int n = 0;
  std::vector<std::vector<double>> cubes;

  std::size_t size() const { return cubes.size(); }
  int vertex_count() const { return 1 << n; }
};

/// h_1, h_2, ...: real and imaginary parts of x -> e(xi . x) over nonzero
/// integer frequency vectors xi (one entry per vertex coordinate), taken up to
/// sign, ordered by L1 norm and then in descending lexicographic order;
/// h_{2i-1} = Re, h_{2i} = Im of the i-th character. On the Heisenberg target
/// a nonzero z-frequency at vertex v is damped by tent(y_v), which makes the
/// function continuous across the identification y ~ y + 1.
class TestFunctionFamily {
 public:
  TestFunctionFamily(BalanceTarget target, int n, int R);

  int size() const { return R_; }
  const std::vector<std::vector<int>>& frequencies() const { return freqs_; }
  /// h_r, with r 1-based.
  double operator()(int r, const std::vector<double>& cube) const;

 private:
  BalanceTarget target_;
  int n_;
  int R_;
  std::vector<std::vector<int>> freqs_;
};

inline constexpr int kDefaultTruncation = 8;

struct MetricValue {
  double value = 0.0;
  /// sum_{r > R} 2^{-r} * 2: each |mean_mu h_r - mean_nu h_r| is at most 2.
  double truncation_bound = 0.0;
};

/// sum_{r <= R} 2^{-r} |mean_mu h_r - mean_nu h_r|.
MetricValue metric_d_prime(const EmpiricalCubeMeasure& mu, const EmpiricalCubeMeasure& nu,
                           const TestFunctionFamily& family);
MetricValue metric_d_prime(const EmpiricalCubeMeasure& mu, const EmpiricalCubeMeasure& nu,
                           int R = kDefaultTruncation);

/// Drops the z coordinate of a Heisenberg cube measure, giving D_1(T^2).
EmpiricalCubeMeasure project_to_torus(const EmpiricalCubeMeasure& mu);

struct FactorMetric {
  double value = 0.0;
  /// d' on the target, then d' on each factor down to the point.
  std::vector<double> terms;
  double truncation_bound = 0.0;
};

/// D_k(T^m): d' alone (the factor is a point). Heisenberg: d' on the
/// nilmanifold plus d' of the projections to the torus factor T^2.
FactorMetric factor_consistent_metric(const EmpiricalCubeMeasure& mu,
                                      const EmpiricalCubeMeasure& nu,
                                      int R = kDefaultTruncation);

/// Haar measure on cubes: uniform corner and face parameters. Sample i draws
/// its parameters from a generator seeded with derive_seed(seed, i), corner
/// first and then the edges, so that pushforward_sampler with the same seed
/// produces coupled samples.
EmpiricalCubeMeasure haar_cube_sampler(const BalanceTarget& target, int n,
                                       std::uint64_t samples, std::uint64_t seed);

/// A map Z_p -> target, as coordinates of canonical representatives.
using PointMap = std::vector<std::vector<double>>;

/// phi applied vertexwise to uniformly sampled parallelepipeds of Z_p. The
/// corner and edges are floor(u p) for the uniforms u that haar_cube_sampler
/// uses for its corner and edges.
EmpiricalCubeMeasure pushforward_sampler(const BalanceTarget& target, const PointMap& phi,
                                         int n, std::uint64_t samples, std::uint64_t seed);

/// x -> (a x mod p) / p on T.
PointMap linear_circle_map(std::int64_t p, std::int64_t a);

struct BalanceRow {
  double b = 0.0;
  int n = 0;
  double d = 0.0;
  /// Standard deviation of d over paired bootstrap resamples (0 in exact mode).
  double spread = 0.0;
  bool pass = false;
};

struct BalanceOptions {
  std::uint64_t samples = 10000;
  std::uint64_t seed = 0;
  int R = kDefaultTruncation;
  int bootstrap = 16;
  /// Integrate exactly over all cubes of Z_p against exact Haar moments
  /// (torus targets, p <= 13, n <= 2).
  bool exact = false;
};

struct BalanceResult {
  std::vector<BalanceRow> table;
  /// Per b in the grid: d_n <= b for every 1 <= n <= floor(1/b).
  std::vector<std::pair<double, bool>> verdicts;
  /// Smallest b of the grid that passes.
  std::optional<double> smallest_b;
};

/// Distance d_n between the pushforward of the n-cube measure of Z_p and the
/// Haar cube measure of the target, n >= 0.
BalanceRow balance_distance(const BalanceTarget& target, const PointMap& phi, int n,
                            const BalanceOptions& opt);

BalanceResult balance_of(const BalanceTarget& target, const PointMap& phi,
                         const std::vector<double>& b_grid, const BalanceOptions& opt = {});

}  // namespace nilkit
