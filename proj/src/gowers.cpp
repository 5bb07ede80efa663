#include "nilkit/gowers.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <thread>

#include <unsupported/Eigen/FFT>

#include "nilkit/pairwise_sum.hpp"

namespace nilkit {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>((static_cast<__int128>(mod(a, m)) * mod(b, m)) % m);
}

// Exact residue of sum_i r_i / m_i as a fraction over lcm(m_i).
struct PhaseSum {
  std::int64_t lcm = 1;
  explicit PhaseSum(const FiniteAbelianGroup& g) {
    for (auto m : g.cyclic_orders()) lcm = std::lcm(lcm, m);
  }
  Complex eval(const FiniteAbelianGroup& g, const std::vector<std::int64_t>& residues) const {
    std::int64_t total = 0;
    for (int i = 0; i < g.rank(); ++i) {
      total = mod(total + mulmod(residues[i], lcm / g.cyclic_orders()[i], lcm), lcm);
    }
    return unit_phase(total, lcm);
  }
};

double clamp_root(double power, int d) {
  if (power < 0.0) {
    if (power < -kClampTolerance) {
      throw NumericalError("cube average " + std::to_string(power) +
                           " is negative beyond rounding tolerance");
    }
    return 0.0;
  }
  return std::pow(power, 1.0 / static_cast<double>(std::int64_t{1} << d));
}

double fourth_moment(const std::vector<Complex>& fhat) {
  PairwiseSum<double> s;
  for (const auto& c : fhat) {
    const double a = std::norm(c);
    s.add(a * a);
  }
  return s.total();
}

}  // namespace

Complex unit_phase(std::int64_t residue, std::int64_t modulus) {
  const std::int64_t r = mod(residue, modulus);
  if (r == 0) return {1.0, 0.0};
  if (2 * r == modulus) return {-1.0, 0.0};
  if (4 * r == modulus) return {0.0, 1.0};
  if (4 * r == 3 * modulus) return {0.0, -1.0};
  const double t = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(modulus);
  return {std::cos(t), std::sin(t)};
}

// ---------------------------------------------------------------------------

Signal::Signal(FiniteAbelianGroup group, std::vector<Complex> values, double bound)
    : group_(std::move(group)), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(group_.order())) {
    throw MismatchError("signal on " + group_.to_string() + " needs " +
                        std::to_string(group_.order()) + " values, got " +
                        std::to_string(values_.size()));
  }
  double m = 0.0;
  for (const auto& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw NumericalError("signal values must be finite");
    }
    m = std::max(m, std::abs(v));
  }
  if (bound < 0.0) {
    bound_ = m;
  } else {
    if (m > bound * (1.0 + 1e-12)) {
      throw MismatchError("signal exceeds its declared bound");
    }
    bound_ = bound;
  }
}

Signal Signal::constant(const FiniteAbelianGroup& group, Complex c) {
  return Signal(group, std::vector<Complex>(static_cast<std::size_t>(group.order()), c));
}

Signal Signal::character(const FiniteAbelianGroup& group, const std::vector<std::int64_t>& a) {
  if (a.size() != static_cast<std::size_t>(group.rank())) {
    throw MismatchError("character needs one frequency per cyclic factor");
  }
  const PhaseSum phase(group);
  std::vector<Complex> values(static_cast<std::size_t>(group.order()));
  std::vector<std::int64_t> r(group.rank());
  for (std::int64_t i = 0; i < group.order(); ++i) {
    const auto x = group.element(i);
    for (int j = 0; j < group.rank(); ++j) r[j] = mulmod(a[j], x(j), group.cyclic_orders()[j]);
    values[i] = phase.eval(group, r);
  }
  return Signal(group, std::move(values), 1.0);
}

Signal Signal::quadratic_phase(const FiniteAbelianGroup& group, std::int64_t a) {
  const PhaseSum phase(group);
  std::vector<Complex> values(static_cast<std::size_t>(group.order()));
  std::vector<std::int64_t> r(group.rank());
  for (std::int64_t i = 0; i < group.order(); ++i) {
    const auto x = group.element(i);
    for (int j = 0; j < group.rank(); ++j) {
      const auto m = group.cyclic_orders()[j];
      r[j] = mulmod(a, mulmod(x(j), x(j), m), m);
    }
    values[i] = phase.eval(group, r);
  }
  return Signal(group, std::move(values), 1.0);
}

Signal Signal::polynomial_phase(const FiniteAbelianGroup& group,
                                const std::vector<std::int64_t>& coefficients) {
  if (!group.is_cyclic()) throw MismatchError("polynomial phases need a cyclic group");
  const std::int64_t n = group.order();
  std::vector<Complex> values(static_cast<std::size_t>(n));
  for (std::int64_t x = 0; x < n; ++x) {
    // Horner in Z_N.
    std::int64_t r = 0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
      r = mod(mulmod(r, x, n) + *it, n);
    }
    values[x] = unit_phase(r, n);
  }
  return Signal(group, std::move(values), 1.0);
}

Signal Signal::random(const FiniteAbelianGroup& group, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Complex> values(static_cast<std::size_t>(group.order()));
  for (auto& v : values) {
    const double r = rng.uniform();
    const double t = 2.0 * std::numbers::pi * rng.uniform();
    v = std::polar(r, t);
  }
  return Signal(group, std::move(values), 1.0);
}

Signal Signal::random_sign(const FiniteAbelianGroup& group, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Complex> values(static_cast<std::size_t>(group.order()));
  for (auto& v : values) v = rng.coin() ? 1.0 : -1.0;
  return Signal(group, std::move(values), 1.0);
}

Signal Signal::operator+(const Signal& other) const {
  if (!(group_ == other.group_)) throw MismatchError("signals live on different groups");
  std::vector<Complex> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] + other.values_[i];
  return Signal(group_, std::move(v), bound_ + other.bound_);
}

Signal Signal::operator*(Complex c) const {
  std::vector<Complex> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] * c;
  return Signal(group_, std::move(v), bound_ * std::abs(c));
}

// ---------------------------------------------------------------------------

Signal multiplicative_derivative(const Signal& f, std::int64_t h_index) {
  const auto& g = f.group();
  if (h_index < 0 || h_index >= g.order()) throw MismatchError("shift is not in the group");
  std::vector<Complex> v(f.size());
  for (std::int64_t x = 0; x < g.order(); ++x) {
    v[x] = f[g.add_index(x, h_index)] * std::conj(f[x]);
  }
  return Signal(g, std::move(v), f.bound() * f.bound());
}

Signal multiplicative_derivative(const Signal& f, const FiniteAbelianGroup::Element& h) {
  if (!f.group().contains(h)) throw MismatchError("shift is not in the group");
  return multiplicative_derivative(f, f.group().index(h));
}

Complex inner_product(const Signal& f, const Signal& g) {
  if (!(f.group() == g.group())) throw MismatchError("signals live on different groups");
  PairwiseSum<Complex> s;
  for (std::size_t i = 0; i < f.size(); ++i) s.add(f.values()[i] * std::conj(g.values()[i]));
  return s.total() / static_cast<double>(f.size());
}

double l2_norm_squared(const Signal& f) {
  PairwiseSum<double> s;
  for (const auto& v : f.values()) s.add(std::norm(v));
  return s.total() / static_cast<double>(f.size());
}

std::vector<Complex> fourier_transform(const Signal& f) {
  const auto& g = f.group();
  std::vector<Complex> data = f.values();
  Eigen::FFT<double> fft;
  std::int64_t stride = 1;
  for (auto m : g.cyclic_orders()) {
    if (m > 1) {
      std::vector<Complex> line(static_cast<std::size_t>(m)), out;
      const std::int64_t block = stride * m;
      for (std::int64_t base = 0; base < g.order(); base += block) {
        for (std::int64_t off = 0; off < stride; ++off) {
          for (std::int64_t k = 0; k < m; ++k) line[k] = data[base + off + k * stride];
          fft.fwd(out, line);
          for (std::int64_t k = 0; k < m; ++k) data[base + off + k * stride] = out[k];
        }
      }
    }
    stride *= m;
  }
  const double scale = 1.0 / static_cast<double>(g.order());
  for (auto& c : data) c *= scale;
  return data;
}

double u2_fourier(const Signal& f) { return clamp_root(fourth_moment(fourier_transform(f)), 2); }

// ---------------------------------------------------------------------------

double u_norm_naive(const Signal& f, int d, std::uint64_t budget) {
  if (d < 1) throw MismatchError("the U^d norm needs d >= 1");
  if (d > kMaxCubeDimension) throw MismatchError("d is too large");
  const auto& g = f.group();
  const std::int64_t n = g.order();
  const std::uint64_t required = cube_count(g, d, 1);
  if (required > budget) throw BudgetExceeded(required, budget);

  const std::size_t nv = std::size_t{1} << d;
  std::vector<std::int64_t> h(d, 0);
  std::vector<std::int64_t> offset(nv, 0);
  PairwiseSum<Complex> sum;
  while (true) {
    for (int i = 0; i < d; ++i) {
      const Vertex bit = Vertex{1} << i;
      for (Vertex v = 0; v < bit; ++v) offset[v | bit] = g.add_index(offset[v], h[i]);
    }
    for (std::int64_t x = 0; x < n; ++x) {
      Complex prod = f[x];
      for (Vertex v = 1; v < nv; ++v) {
        const Complex& val = f[g.add_index(x, offset[v])];
        prod *= (weight(v) & 1) ? std::conj(val) : val;
      }
      sum.add(prod);
    }
    int i = 0;
    for (; i < d; ++i) {
      if (++h[i] < n) break;
      h[i] = 0;
    }
    if (i == d) break;
  }
  const double power = sum.total().real() / static_cast<double>(required);
  return clamp_root(power, d);
}

double u_norm_power_recursive(const Signal& f, int d, unsigned workers) {
  if (d < 2) throw MismatchError("the recursive evaluator needs d >= 2");
  if (d == 2) return fourth_moment(fourier_transform(f));
  const std::int64_t n = f.group().order();
  std::vector<double> terms(static_cast<std::size_t>(n));
  auto work = [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t h = lo; h < hi; ++h) {
      terms[h] = u_norm_power_recursive(multiplicative_derivative(f, h), d - 1, 1);
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (workers == 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::int64_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::int64_t lo = std::min<std::int64_t>(n, w * chunk);
      const std::int64_t hi = std::min<std::int64_t>(n, lo + chunk);
      pool.emplace_back(work, lo, hi);
    }
    for (auto& t : pool) t.join();
  }
  PairwiseSum<double> s;
  for (double t : terms) s.add(t);
  return s.total() / static_cast<double>(n);
}

double u_norm_recursive(const Signal& f, int d, unsigned workers) {
  return clamp_root(u_norm_power_recursive(f, d, workers), d);
}

}  // namespace nilkit
