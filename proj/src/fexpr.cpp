#include "nilkit/fexpr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "nilkit/error.hpp"
#include "nilkit/rng.hpp"

namespace nilkit {

using C = std::complex<double>;

struct FExpr::Node {
  enum class Kind { Number, Imag, Var, Neg, Add, Sub, Mul, Div, Pow, E, Tent, Cos, Sin };
  Kind kind;
  double number = 0.0;
  int index = 0;  // variable index or exponent
  std::shared_ptr<const Node> a, b;
  bool real = true;
  bool constant = true;
  double bound = 0.0;
};

namespace {

using Node = FExpr::Node;
using Kind = Node::Kind;
using NodePtr = std::shared_ptr<const Node>;

C eval(const Node& n, const std::vector<double>& x) {
  switch (n.kind) {
    case Kind::Number: return n.number;
    case Kind::Imag: return {0.0, 1.0};
    case Kind::Var:
      if (n.index >= static_cast<int>(x.size())) {
        throw MismatchError("expression reads coordinate " + std::to_string(n.index) +
                            " of a " + std::to_string(x.size()) + "-dimensional point");
      }
      return x[n.index];
    case Kind::Neg: return -eval(*n.a, x);
    case Kind::Add: return eval(*n.a, x) + eval(*n.b, x);
    case Kind::Sub: return eval(*n.a, x) - eval(*n.b, x);
    case Kind::Mul: return eval(*n.a, x) * eval(*n.b, x);
    case Kind::Div: return eval(*n.a, x) / eval(*n.b, x);
    case Kind::Pow: {
      C base = eval(*n.a, x), r = 1.0;
      for (int k = 0; k < n.index; ++k) r *= base;
      return r;
    }
    case Kind::E: return std::exp(C(0.0, 2.0 * std::numbers::pi) * eval(*n.a, x));
    case Kind::Tent: {
      const C u = eval(*n.a, x);
      if (u.imag() != 0.0) throw NumericalError("tent() needs a real argument");
      return std::max(0.0, 1.0 - std::abs(2.0 * u.real() - 1.0));
    }
    case Kind::Cos: return std::cos(eval(*n.a, x));
    case Kind::Sin: return std::sin(eval(*n.a, x));
  }
  return 0.0;
}

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  const bool ar = !n->a || n->a->real, br = !n->b || n->b->real;
  const double ab = n->a ? n->a->bound : 0.0, bb = n->b ? n->b->bound : 0.0;
  n->constant = (!n->a || n->a->constant) && (!n->b || n->b->constant);
  switch (k) {
    case Kind::Neg: n->real = ar; n->bound = ab; break;
    case Kind::Add:
    case Kind::Sub: n->real = ar && br; n->bound = ab + bb; break;
    case Kind::Mul: n->real = ar && br; n->bound = ab * bb; break;
    case Kind::E: n->real = false; n->bound = ar ? 1.0 : std::exp(2.0 * std::numbers::pi * ab); break;
    case Kind::Tent:
      if (!ar) throw ParseError("tent() needs a real argument");
      n->bound = 1.0;
      break;
    case Kind::Cos:
    case Kind::Sin: n->real = ar; n->bound = ar ? 1.0 : std::cosh(ab); break;
    default: break;
  }
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& text) {
    for (char c : text) {
      if (!std::isspace(static_cast<unsigned char>(c))) s_.push_back(c);
    }
  }

  NodePtr parse() {
    if (s_.empty()) throw ParseError("empty expression");
    NodePtr n = expr();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at position " + std::to_string(pos_) + " in '" + s_ + "'");
  }
  bool eat(char c) {
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  NodePtr expr() {
    NodePtr n = term();
    while (true) {
      if (eat('+')) n = make(Kind::Add, n, term());
      else if (eat('-')) n = make(Kind::Sub, n, term());
      else return n;
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    while (true) {
      if (eat('*')) {
        n = make(Kind::Mul, n, unary());
      } else if (eat('/')) {
        NodePtr d = unary();
        if (!d->constant) fail("division is only allowed by constants");
        const C v = eval(*d, {});
        if (std::abs(v) == 0.0) fail("division by zero");
        NodePtr q = make(Kind::Div, n, d);
        auto m = std::make_shared<Node>(*q);
        m->real = n->real && d->real;
        m->bound = n->bound / std::abs(v);
        n = m;
      } else {
        return n;
      }
    }
  }

  NodePtr unary() {
    if (eat('-')) return make(Kind::Neg, unary());
    if (eat('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (!eat('^')) return base;
    const std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) fail("exponent must be a nonnegative integer");
    const int k = std::stoi(s_.substr(start, pos_ - start));
    if (k > 64) fail("exponent too large");
    auto n = std::make_shared<Node>(*make(Kind::Pow, base));
    n->index = k;
    n->real = base->real;
    n->constant = base->constant;
    n->bound = std::pow(base->bound, k);
    return n;
  }

  NodePtr primary() {
    if (eat('(')) {
      NodePtr n = expr();
      if (!eat(')')) fail("missing ')'");
      return n;
    }
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t start = pos_;
      while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') ++pos_;
      if (peek() == 'e' && pos_ + 1 < s_.size() &&
          (std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])) || s_[pos_ + 1] == '-')) {
        ++pos_;
        eat('-');
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      }
      auto n = std::make_shared<Node>();
      n->kind = Kind::Number;
      try {
        n->number = std::stod(s_.substr(start, pos_ - start));
      } catch (const std::exception&) {
        fail("malformed number");
      }
      n->bound = std::abs(n->number);
      return n;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) fail("unexpected character");
    const std::size_t start = pos_;
    while (std::isalnum(static_cast<unsigned char>(peek()))) ++pos_;
    const std::string name = s_.substr(start, pos_ - start);
    if (peek() == '(') {
      Kind k;
      if (name == "e") k = Kind::E;
      else if (name == "tent") k = Kind::Tent;
      else if (name == "cos") k = Kind::Cos;
      else if (name == "sin") k = Kind::Sin;
      else fail("unknown function '" + name + "'");
      eat('(');
      NodePtr arg = expr();
      if (!eat(')')) fail("missing ')'");
      return make(k, arg);
    }
    auto n = std::make_shared<Node>();
    if (name == "i") {
      n->kind = Kind::Imag;
      n->real = false;
      n->bound = 1.0;
      return n;
    }
    n->kind = Kind::Var;
    n->constant = false;
    n->bound = 1.0;
    if (name == "t" || name == "x") {
      n->index = 0;
    } else if (name == "y") {
      n->index = 1;
    } else if (name == "z") {
      n->index = 2;
    } else if (name.size() > 1 && name[0] == 't' &&
               name.find_first_not_of("0123456789", 1) == std::string::npos) {
      n->index = std::stoi(name.substr(1));
    } else {
      fail("unknown variable '" + name + "'");
    }
    return n;
  }

  std::string s_;
  std::size_t pos_ = 0;
};

int max_var(const Node& n) {
  int m = n.kind == Kind::Var ? n.index : -1;
  if (n.a) m = std::max(m, max_var(*n.a));
  if (n.b) m = std::max(m, max_var(*n.b));
  return m;
}

}  // namespace

FExpr FExpr::parse(const std::string& text) {
  FExpr f;
  f.root_ = Parser(text).parse();
  f.text_ = text;
  f.sup_bound_ = f.root_->bound;
  f.arity_ = max_var(*f.root_) + 1;
  return f;
}

std::complex<double> FExpr::operator()(const std::vector<double>& coords) const {
  return eval(*root_, coords);
}

double FExpr::lipschitz_estimate(int dimension, int samples, std::uint64_t seed) const {
  Rng rng(seed);
  double best = 0.0;
  std::vector<double> a(dimension), b(dimension);
  for (int s = 0; s < samples; ++s) {
    double dist = 0.0;
    // Half of the pairs are close together, to probe local slopes.
    const double scale = (s % 2 == 0) ? 1.0 : 1e-3;
    for (int j = 0; j < dimension; ++j) {
      a[j] = rng.uniform();
      b[j] = std::clamp(a[j] + scale * (rng.uniform() - 0.5), 0.0, 1.0 - 1e-12);
      dist = std::max(dist, std::abs(a[j] - b[j]));
    }
    if (dist == 0.0) continue;
    best = std::max(best, std::abs((*this)(a) - (*this)(b)) / dist);
  }
  return best;
}

}  // namespace nilkit
