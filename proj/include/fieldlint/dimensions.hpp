#ifndef FIELDLINT_DIMENSIONS_HPP
#define FIELDLINT_DIMENSIONS_HPP

#include <map>
#include <optional>
#include <string>

#include "fieldlint/dsl.hpp"
#include "fieldlint/expr.hpp"
#include "fieldlint/rational.hpp"
#include "fieldlint/report.hpp"

namespace fieldlint {

/// Natural units (hbar = c = 1): a dimension is the exponent n of [L^n].
/// Mass, energy, momentum and potentials are [L^-1]; a Lagrangian density
/// term is [L^-4].
struct Dimension {
  Rational exponent{0};

  friend bool operator==(const Dimension&, const Dimension&) = default;
  friend Dimension operator+(const Dimension& a, const Dimension& b) {
    return {a.exponent + b.exponent};
  }
};

std::string to_string(const Dimension& d);

inline const Rational kDensityExponent{-4};
inline const Rational kProbabilityDensityExponent{-3};

/// Solves "every density monomial has exponent -4" for the fields without
/// a declared dimension.  Declared dimensions are taken as given and
/// checked for agreement.
///
/// Throws DimensionError naming the clashing terms when the system is
/// inconsistent, or the unconstrained fields when it is underdetermined.
std::map<std::string, Dimension> infer_dimensions(const LagrangianModel& model);

/// Dimension of `e` given field dimensions (constants come from `model`).
/// Returns nullopt when a monomial contains a free parameter without a
/// declared dimension.  Throws DimensionError when summands disagree.
std::optional<Dimension> dimension_of(const Expr& e, const LagrangianModel& model,
                                      const std::map<std::string, Dimension>& fields);

/// Requirement checks for every density monomial: (A) Lorentz scalar,
/// (B) exponent -4.  Adds inferred field dimensions and, per field, the
/// exponent of |f|^2 (psibar*psi for spinors) flagged when it cannot be a
/// probability density ([L^-3]).
Report check_requirements(const LagrangianModel& model);

/// Pass iff `e` has no free indices; the witness lists them otherwise.
Check check_scalar(const Expr& e);

struct DensityAudit {
  Dimension dimension;
  /// Set when the exponent is not -3: the quantity cannot be a
  /// probability density.
  bool not_probability = false;
};

DensityAudit audit_probability_density(const Expr& density, const LagrangianModel& model,
                                       const std::map<std::string, Dimension>& fields);

/// The candidate density of a field: f^2 (real), conj(f)*f (complex) or
/// fbar*f (spinor).  Vector and tensor fields have none.
std::optional<Expr> modulus_squared(const FieldSymbol& f);

}  // namespace fieldlint

#endif  // FIELDLINT_DIMENSIONS_HPP
