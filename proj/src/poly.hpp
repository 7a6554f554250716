#ifndef FIELDLINT_SRC_POLY_HPP
#define FIELDLINT_SRC_POLY_HPP

// Internal polynomial representation behind the public Expr API.

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fieldlint/expr.hpp"
#include "fieldlint/rational.hpp"

namespace fieldlint::detail {

struct FieldAtom {
  std::string symbol;
  FieldTraits traits;
  bool conj = false;  // spinor: Dirac adjoint
  std::vector<Index> indices;
  std::vector<Index> derivs;

  friend auto operator<=>(const FieldAtom&, const FieldAtom&) = default;
};

struct MetricAtom {
  Index a;
  Index b;

  friend auto operator<=>(const MetricAtom&, const MetricAtom&) = default;
};

/// Ordered spinor structure: [psibar] gamma... [psi].  Never reordered.
struct ChainAtom {
  std::optional<FieldAtom> left;
  std::vector<Index> gammas;
  std::optional<FieldAtom> right;

  friend auto operator<=>(const ChainAtom&, const ChainAtom&) = default;
};

struct Monomial {
  std::map<std::string, int> consts;
  std::vector<FieldAtom> fields;
  std::vector<MetricAtom> metrics;
  std::optional<ChainAtom> chain;

  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

struct Term {
  Coefficient coef;
  Monomial mono;
};

/// Canonical polynomial: canonical monomials mapped to nonzero coefficients.
class Poly {
 public:
  using Map = std::map<Monomial, Coefficient>;

  Poly() = default;

  /// Normalizes `t` and accumulates it.
  void add(Term t);
  /// Accumulates an already canonical term.
  void add_canonical(const Monomial& m, const Coefficient& c);

  const Map& terms() const& { return terms_; }
  Map terms() && { return std::move(terms_); }
  bool is_zero() const { return terms_.empty(); }

  friend bool operator==(const Poly&, const Poly&) = default;

 private:
  Map terms_;
};

/// Chain-aware monomial product; throws UnsupportedError for spinor
/// orderings that do not form a single chain.
Monomial multiply(const Monomial& a, const Monomial& b);

/// Renames every dummy (index name used twice) to a fresh unique name.
void freshen_dummies(Term& t);

/// Visits every index slot of a monomial in canonical traversal order.
void for_each_index(Monomial& m, const std::function<void(Index&)>& f);
void for_each_index(const Monomial& m, const std::function<void(const Index&)>& f);

/// Names used exactly once (free) in traversal order.
std::vector<Index> free_indices_of(const Monomial& m);
std::vector<std::string> dummy_names_of(const Monomial& m);

std::string fresh_index_name();

/// Canonical normalization of a single term; returns nullopt when the term
/// vanishes.
std::optional<Term> normalize(Term t);

Poly to_poly(const Expr& e);
Expr to_expr(const Poly& p);

Poly operator+(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly scale(const Poly& p, const Coefficient& c);

Poly differentiate(const Poly& p, const Index& mu);
Poly conjugate(const Poly& p);

/// Single-term polynomial helpers.
Poly poly_of(const Monomial& m, const Coefficient& c = Coefficient(Rational(1)));
Poly poly_of_atom(const FieldAtom& a);

/// Applies `f` to a copy of every term and re-normalizes.
Poly map_terms(const Poly& p, const std::function<void(Term&)>& f);

/// Renames index `from` (any variance) to `to`, keeping each slot's variance.
Poly rename_index(const Poly& p, const std::string& from, const std::string& to);

/// Single-pass substitution at the polynomial level (see symbolic.hpp).
Poly substitute(const Poly& p, const std::vector<std::pair<Poly, Poly>>& rules);

/// Checks index discipline and that all summands share free indices.
void check_free_index_consistency(const Poly& p);

}  // namespace fieldlint::detail

#endif  // FIELDLINT_SRC_POLY_HPP
