#include "fieldlint/expr.hpp"

#include <stdexcept>

namespace fieldlint {

int index_arity(FieldKind kind) {
  switch (kind) {
    case FieldKind::Scalar:
    case FieldKind::Spinor:
      return 0;
    case FieldKind::Vector:
      return 1;
    case FieldKind::SymmetricTensor:
    case FieldKind::AntisymmetricTensor:
      return 2;
  }
  return 0;
}

std::string_view to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::Scalar:
      return "scalar";
    case FieldKind::Vector:
      return "vector";
    case FieldKind::Spinor:
      return "spinor";
    case FieldKind::SymmetricTensor:
      return "symmetric";
    case FieldKind::AntisymmetricTensor:
      return "antisymmetric";
  }
  return "?";
}

std::string_view to_string(Reality reality) {
  return reality == Reality::Real ? "real" : "complex";
}

namespace {

Expr make(auto&& v) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{std::forward<decltype(v)>(v)}));
}

const Expr& zero_singleton() {
  static const Expr z = make(node::Number{Rational(0)});
  return z;
}

}  // namespace

Expr::Expr() : node_(zero_singleton().node_) {}

bool Expr::is_number() const { return as<node::Number>() != nullptr; }

bool Expr::is_zero() const {
  const auto* n = as<node::Number>();
  return n != nullptr && n->value == 0;
}

Expr num(Rational value) { return make(node::Number{std::move(value)}); }
Expr num(long value) { return num(Rational(value)); }
Expr num(long numerator, long denominator) { return num(Rational(numerator, denominator)); }
Expr constant(std::string symbol) { return make(node::Constant{std::move(symbol)}); }

Expr field(std::string symbol, FieldTraits traits, std::vector<Index> indices,
           std::vector<Index> derivatives) {
  return make(node::Field{std::move(symbol), traits, std::move(indices), std::move(derivatives)});
}

Expr metric(Index first, Index second) {
  return make(node::Metric{std::move(first), std::move(second)});
}
Expr conj(Expr inner) { return make(node::Conjugate{std::move(inner)}); }
Expr imag_unit() { return make(node::ImaginaryUnit{}); }
Expr gamma_matrix(Index index) { return make(node::Gamma{std::move(index)}); }
Expr sandwich(Expr left, Expr inner, Expr right) {
  return make(node::SpinorSandwich{std::move(left), std::move(inner), std::move(right)});
}
Expr pow(Expr base, int exponent) { return make(node::Power{std::move(base), exponent}); }
Expr sum(std::vector<Expr> terms) { return make(node::Sum{std::move(terms)}); }
Expr product(std::vector<Expr> factors) { return make(node::Product{std::move(factors)}); }

Expr operator+(const Expr& a, const Expr& b) { return sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return sum({a, product({num(-1), b})}); }
Expr operator-(const Expr& a) { return product({num(-1), a}); }
Expr operator*(const Expr& a, const Expr& b) { return product({a, b}); }

namespace {

bool equal_lists(const std::vector<Expr>& a, const std::vector<Expr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] == b[i])) return false;
  }
  return true;
}

struct EqualVisitor {
  const ExprNode& other;

  bool operator()(const node::Sum& x) const {
    return equal_lists(x.terms, std::get<node::Sum>(other.value).terms);
  }
  bool operator()(const node::Product& x) const {
    return equal_lists(x.factors, std::get<node::Product>(other.value).factors);
  }
  bool operator()(const node::Power& x) const {
    const auto& y = std::get<node::Power>(other.value);
    return x.exponent == y.exponent && x.base == y.base;
  }
  bool operator()(const node::Number& x) const {
    return x.value == std::get<node::Number>(other.value).value;
  }
  bool operator()(const node::Constant& x) const {
    return x.symbol == std::get<node::Constant>(other.value).symbol;
  }
  bool operator()(const node::Field& x) const {
    const auto& y = std::get<node::Field>(other.value);
    return x.symbol == y.symbol && x.traits == y.traits && x.indices == y.indices &&
           x.derivatives == y.derivatives;
  }
  bool operator()(const node::Metric& x) const {
    const auto& y = std::get<node::Metric>(other.value);
    return x.first == y.first && x.second == y.second;
  }
  bool operator()(const node::Conjugate& x) const {
    return x.inner == std::get<node::Conjugate>(other.value).inner;
  }
  bool operator()(const node::ImaginaryUnit&) const { return true; }
  bool operator()(const node::Gamma& x) const {
    return x.index == std::get<node::Gamma>(other.value).index;
  }
  bool operator()(const node::SpinorSandwich& x) const {
    const auto& y = std::get<node::SpinorSandwich>(other.value);
    return x.left == y.left && x.inner == y.inner && x.right == y.right;
  }
};

}  // namespace

bool operator==(const Expr& a, const Expr& b) {
  if (&a.node() == &b.node()) return true;
  if (a.node().value.index() != b.node().value.index()) return false;
  return std::visit(EqualVisitor{b.node()}, a.node().value);
}

}  // namespace fieldlint
