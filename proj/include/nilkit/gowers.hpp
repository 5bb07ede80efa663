#pragma once

// Uniformity seminorms U^d on finite abelian groups.

#include <complex>
#include <cstdint>
#include <vector>

#include "nilkit/group_cube.hpp"

namespace nilkit {

using Complex = std::complex<double>;

/// e(t) = exp(2 pi i t) for t = residue / modulus, reduced exactly first.
Complex unit_phase(std::int64_t residue, std::int64_t modulus);

class Signal {
 public:
  /// bound < 0 means "use the maximum modulus of values".
  Signal(FiniteAbelianGroup group, std::vector<Complex> values, double bound = -1.0);

  static Signal constant(const FiniteAbelianGroup& group, Complex c);
  /// x -> e(sum_i a_i x_i / m_i).
  static Signal character(const FiniteAbelianGroup& group, const std::vector<std::int64_t>& a);
  /// x -> e(sum_i a x_i^2 / m_i).
  static Signal quadratic_phase(const FiniteAbelianGroup& group, std::int64_t a);
  /// x -> e(sum_j c_j x^j / N) on Z_N with integer coefficients.
  static Signal polynomial_phase(const FiniteAbelianGroup& group,
                                 const std::vector<std::int64_t>& coefficients);
  /// Independent values r e(theta) with r, theta uniform in [0, 1).
  static Signal random(const FiniteAbelianGroup& group, std::uint64_t seed);
  /// Independent uniform signs.
  static Signal random_sign(const FiniteAbelianGroup& group, std::uint64_t seed);

  const FiniteAbelianGroup& group() const { return group_; }
  const std::vector<Complex>& values() const { return values_; }
  double bound() const { return bound_; }
  std::size_t size() const { return values_.size(); }
  const Complex& operator[](std::int64_t index) const { return values_[index]; }

  Signal operator+(const Signal& other) const;
  Signal operator*(Complex c) const;

 private:
  FiniteAbelianGroup group_;
  std::vector<Complex> values_;
  double bound_;
};

/// x -> f(x + h) conj(f(x)); the bound squares.
Signal multiplicative_derivative(const Signal& f, std::int64_t h_index);
Signal multiplicative_derivative(const Signal& f, const FiniteAbelianGroup::Element& h);

/// E_x f(x) conj(g(x)).
Complex inner_product(const Signal& f, const Signal& g);

/// fhat(xi) = E_x f(x) e(-xi . x), on canonical indices.
std::vector<Complex> fourier_transform(const Signal& f);

/// Values of the averaged cube product down to this are treated as rounding
/// noise and clamped to 0; anything more negative raises NumericalError.
inline constexpr double kClampTolerance = 1e-12;

/// Plain enumeration over all N^{d+1} parallelepipeds. d >= 1.
double u_norm_naive(const Signal& f, int d, std::uint64_t budget = kDefaultBudget);

/// Derivative recursion down to the Fourier identity for U^2. d >= 2. With
/// workers > 1 the outer average is split across threads; the reduction order
/// is fixed, so the result does not depend on the worker count.
double u_norm_recursive(const Signal& f, int d, unsigned workers = 1);

/// (sum_xi |fhat(xi)|^4)^{1/4}.
double u2_fourier(const Signal& f);

/// The 2^d-th power of the norm, before clamping, from the recursive evaluator.
double u_norm_power_recursive(const Signal& f, int d, unsigned workers = 1);

/// L2 norm squared, E|f|^2.
double l2_norm_squared(const Signal& f);

}  // namespace nilkit
