#pragma once

// Closed-form output functions F on nilmanifold coordinates.
//
// Grammar (whitespace ignored):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*        division by constants only
//   unary   := '-' unary | power
//   power   := primary ('^' nonnegative-integer)?
//   primary := number | 'i' | variable | func '(' expr ')' | '(' expr ')'
//   func    := e | tent | cos | sin               e(u) = exp(2 pi i u),
//                                                 tent(u) = max(0, 1 - |2u - 1|)
//   variable:= t | x | y | z | t0 | t1 | ...      t = t0 = x, y = t1, z = t2

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace nilkit {

class FExpr {
 public:
  struct Node;

  static FExpr parse(const std::string& text);
  /// The constant function 1.
  static FExpr one() { return parse("1"); }

  std::complex<double> operator()(const std::vector<double>& coords) const;

  /// Upper bound for |F| over coordinates in [0, 1), from the expression tree.
  double sup_bound() const { return sup_bound_; }
  /// Number of coordinates the expression reads (1 + largest variable index).
  int arity() const { return arity_; }
  const std::string& text() const { return text_; }

  /// Largest difference quotient |F(a) - F(b)| / |a - b|_inf over random pairs
  /// in [0, 1)^dimension.
  double lipschitz_estimate(int dimension, int samples, std::uint64_t seed) const;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
  double sup_bound_ = 0.0;
  int arity_ = 0;
};

}  // namespace nilkit
