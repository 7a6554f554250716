#ifndef FIELDLINT_SYMBOLIC_HPP
#define FIELDLINT_SYMBOLIC_HPP

#include <span>
#include <string>
#include <vector>

#include "fieldlint/expr.hpp"

namespace fieldlint {

/// Normal form: a flat sum of monomials with exact Gaussian-rational
/// coefficients.  Metric factors are contracted wherever a matching dummy
/// exists, dummy indices are renamed to the reserved sequence ι1, ι2, ...
/// in a canonical order, and every monomial that equals its own negative
/// under a dummy relabeling (symmetric x antisymmetric contraction) is
/// dropped.  Idempotent.
///
/// Throws IndexDisciplineError for an index name used three times, a
/// repeated index with equal variance, or summands with different free
/// indices.
Expr canonicalize(const Expr& e);

/// d/dx^mu applied with product rule; the derivative index keeps the
/// variance of `mu` (an upper index gives d^mu).
Expr differentiate(const Expr& e, const Index& mu);

/// Complex conjugate; spinor bilinears are replaced by their Dirac adjoints.
Expr conjugate(const Expr& e);

struct Rule {
  Expr pattern;
  Expr replacement;
};

/// Single-pass replacement of every occurrence of each pattern.
///
/// A pattern is a (possibly conjugated) field, optionally with derivative
/// indices, or a constant.  Pattern indices act as placeholders: they are
/// renamed to the occurrence's indices (through the metric when the
/// variance differs).  A contracted derivative pair in the pattern, as in
/// d^{a}(d_{a}(phi)), matches any self-contracted pair at the occurrence;
/// leftover derivatives at the occurrence are applied to the replacement.
///
/// Throws IndexDisciplineError if a replacement's free indices differ from
/// its pattern's.
Expr substitute(const Expr& e, std::span<const Rule> rules);

/// Highest power of constant `symbol` over the monomials of canonical(e).
int poly_degree(const Expr& e, const std::string& symbol);

/// Free indices of canonical(e), in canonical order.
std::vector<Index> free_indices(const Expr& e);

/// The monomials of canonical(e), each as its own canonical expression.
std::vector<Expr> monomials(const Expr& e);

/// Replaces every constant named `symbol` by zero.
Expr set_constant_zero(const Expr& e, const std::string& symbol);

}  // namespace fieldlint

#endif  // FIELDLINT_SYMBOLIC_HPP
