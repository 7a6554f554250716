#ifndef FIELDLINT_DSL_HPP
#define FIELDLINT_DSL_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fieldlint/expr.hpp"
#include "fieldlint/rational.hpp"

namespace fieldlint {

struct FieldSymbol {
  std::string name;
  FieldKind kind = FieldKind::Scalar;
  Reality reality = Reality::Real;
  std::optional<Rational> dimension;  // exponent n of [L^n]

  FieldTraits traits() const { return {kind, reality}; }
};

struct ConstantSymbol {
  std::string name;
  /// Absent for free parameters whose dimension is not fixed; terms
  /// containing them are excluded from dimension requirements.
  std::optional<Rational> dimension;
};

enum class Assumption { LorenzGauge, MassShell, OnShell };

std::string_view to_string(Assumption a);

/// `F_{mu nu} := d_{mu}(A_{nu}) - d_{nu}(A_{mu})`; `indices` are the
/// placeholders of the left-hand side.
struct Definition {
  std::string name;
  std::vector<Index> indices;
  Expr body;
};

struct LagrangianModel {
  std::vector<FieldSymbol> fields;
  std::vector<ConstantSymbol> constants;
  std::set<Assumption> assumptions;
  std::vector<Definition> definitions;
  /// One canonical expression per `L = ...` statement.
  std::vector<Expr> pieces;
  /// Canonical sum of all pieces.
  Expr density;

  const FieldSymbol* find_field(std::string_view name) const;
  const ConstantSymbol* find_constant(std::string_view name) const;
  const Definition* find_definition(std::string_view name) const;
  bool assumes(Assumption a) const { return assumptions.contains(a); }
};

/// Parses a `.lagr` document.
///
/// Grammar (ASCII; `#` starts a line comment):
///
///     model     := stmt*
///     stmt      := fielddecl | constdecl | assume | define | lagr
///     fielddecl := "field" IDENT ":" ("real"|"complex")
///                  ("scalar"|"vector"|"spinor"|"symmetric"|"antisymmetric")
///                  ["dim" RATIONAL]
///     constdecl := "const" IDENT ["dim" RATIONAL]
///     assume    := "assume" ("lorenz_gauge"|"mass_shell"|"on_shell")
///     define    := IDENT idx+ ":=" expr
///     lagr      := "L" "=" expr          (several L statements add up)
///     expr      := ["-"] term (("+"|"-") term)*
///     term      := factor (("*"|"/") factor)*   (divide by numbers and constants only)
///     factor    := atom ("^" ["-"] INT)*
///     atom      := RATIONAL | "i" | "d" idx "(" expr ")" | "conj" "(" expr ")"
///                | "(" expr ")" | "g" idx | "gamma" idx | IDENT idx*
///     idx       := ("_"|"^") "{" IDENT+ "}"
///
/// `pi` is predeclared as a dimensionless constant.  A complex spinor
/// `psi` also declares its Dirac adjoint `psibar`.  `g` followed by
/// indices is the Minkowski metric; a bare `g` is an ordinary symbol.
///
/// Throws ParseError (with line and column) or UndeclaredSymbolError.
LagrangianModel parse(std::string_view text);

/// Parses a standalone expression against the declarations of `model`.
Expr parse_expr(std::string_view text, const LagrangianModel& model);

/// Prints `e` in the DSL.  parse(render(e)) canonicalizes to canonicalize(e).
std::string render(const Expr& e);

}  // namespace fieldlint

#endif  // FIELDLINT_DSL_HPP
