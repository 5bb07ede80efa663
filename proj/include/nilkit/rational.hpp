#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <Eigen/Core>

namespace nilkit {

// Expression templates are disabled so the types behave as plain values
// inside Eigen containers.
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

using RationalVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

/// Largest integer not exceeding r.
Integer floor(const Rational& r);
/// r - floor(r), always in [0, 1).
Rational frac(const Rational& r);
bool is_integer(const Rational& r);

/// Generalized binomial coefficient n(n-1)...(n-k+1)/k!; integral for every
/// integer n, including negative n.
Integer binomial(const Integer& n, int k);
Integer binomial(std::int64_t n, int k);

/// "p/q" (or "p" when integral).
std::string to_string(const Rational& r);
/// Accepts "p/q", "p", and finite decimals such as "-0.25".
Rational parse_rational(std::string_view text);

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Representative of r mod 1 in (-1/2, 1/2].
Rational centered_mod1(const Rational& r);
/// Distance from r to the nearest integer.
Rational circle_distance(const Rational& r);

}  // namespace nilkit
