#ifndef FIELDLINT_EXPR_HPP
#define FIELDLINT_EXPR_HPP

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fieldlint/rational.hpp"

namespace fieldlint {

// Upper sorts before Lower; canonical dummy pairs rely on this order.
enum class Variance : std::uint8_t { Upper, Lower };

struct Index {
  std::string name;
  Variance variance = Variance::Lower;

  friend auto operator<=>(const Index&, const Index&) = default;
};

inline Index up(std::string name) { return {std::move(name), Variance::Upper}; }
inline Index down(std::string name) { return {std::move(name), Variance::Lower}; }

inline Variance flipped(Variance v) {
  return v == Variance::Upper ? Variance::Lower : Variance::Upper;
}

/// Canonical dummy indices use a reserved prefix the DSL lexer never accepts.
inline constexpr std::string_view kReservedIndexPrefix = "\xCE\xB9";  // ι

inline bool is_reserved_index(std::string_view name) {
  return name.substr(0, kReservedIndexPrefix.size()) == kReservedIndexPrefix;
}

enum class FieldKind : std::uint8_t { Scalar, Vector, Spinor, SymmetricTensor, AntisymmetricTensor };
enum class Reality : std::uint8_t { Real, Complex };

/// Number of Lorentz indices a field of this kind carries.
int index_arity(FieldKind kind);
std::string_view to_string(FieldKind kind);
std::string_view to_string(Reality reality);

struct FieldTraits {
  FieldKind kind = FieldKind::Scalar;
  Reality reality = Reality::Real;

  friend auto operator<=>(const FieldTraits&, const FieldTraits&) = default;
};

struct ExprNode;

/// Immutable expression tree.  Copies share structure; every rewrite
/// returns a new value.
class Expr {
 public:
  /// The rational zero.
  Expr();
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}

  const ExprNode& node() const { return *node_; }

  template <class T>
  const T* as() const;

  bool is_number() const;
  bool is_zero() const;

 private:
  std::shared_ptr<const ExprNode> node_;
};

namespace node {

struct Sum {
  std::vector<Expr> terms;
};
struct Product {
  std::vector<Expr> factors;  // order matters only for spinor structure
};
struct Power {
  Expr base;
  int exponent = 1;
};
struct Number {
  Rational value;
};
struct Constant {
  std::string symbol;
};
/// Field symbol with its own Lorentz indices and partial derivatives
/// (f^{..}_{,a,b}).  Derivative order is irrelevant.
struct Field {
  std::string symbol;
  FieldTraits traits;
  std::vector<Index> indices;
  std::vector<Index> derivatives;
};
struct Metric {
  Index first;
  Index second;
};
/// Complex conjugation; for spinor fields this is the Dirac adjoint.
struct Conjugate {
  Expr inner;
};
struct ImaginaryUnit {};
struct Gamma {
  Index index;
};
/// psibar * inner * psi kept as a formal bilinear; inner is a product of
/// gamma matrices (or 1).
struct SpinorSandwich {
  Expr left;
  Expr inner;
  Expr right;
};

}  // namespace node

struct ExprNode {
  std::variant<node::Sum, node::Product, node::Power, node::Number, node::Constant, node::Field,
               node::Metric, node::Conjugate, node::ImaginaryUnit, node::Gamma,
               node::SpinorSandwich>
      value;
};

template <class T>
const T* Expr::as() const {
  return std::get_if<T>(&node_->value);
}

// Builders.  None of them simplify; use canonicalize() for that.
Expr num(Rational value);
Expr num(long value);
Expr num(long numerator, long denominator);
Expr constant(std::string symbol);
Expr field(std::string symbol, FieldTraits traits, std::vector<Index> indices = {},
           std::vector<Index> derivatives = {});
Expr metric(Index first, Index second);
Expr conj(Expr inner);
Expr imag_unit();
Expr gamma_matrix(Index index);
Expr sandwich(Expr left, Expr inner, Expr right);
Expr pow(Expr base, int exponent);
Expr sum(std::vector<Expr> terms);
Expr product(std::vector<Expr> factors);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);

/// Structural equality.  Canonical forms are unique, so equality of
/// canonicalized expressions is mathematical equality.
bool operator==(const Expr& a, const Expr& b);

}  // namespace fieldlint

#endif  // FIELDLINT_EXPR_HPP
