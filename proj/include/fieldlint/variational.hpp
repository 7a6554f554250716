#ifndef FIELDLINT_VARIATIONAL_HPP
#define FIELDLINT_VARIATIONAL_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "fieldlint/dsl.hpp"
#include "fieldlint/expr.hpp"
#include "fieldlint/report.hpp"

namespace fieldlint {

/// A variation target: a declared field, or its conjugate (for complex
/// scalars) / Dirac adjoint (for spinors).  f and conj(f) are independent.
struct FieldRef {
  std::string symbol;
  bool conjugated = false;

  friend auto operator<=>(const FieldRef&, const FieldRef&) = default;
};

/// Accepts "phi", "conj(phi)" and "psibar".  Throws Error for names that
/// are not declared fields of `model`.
FieldRef resolve_field(const LagrangianModel& model, const std::string& text);

std::string to_string(const FieldRef& f);

/// lhs = 0.
struct FieldEquation {
  Expr lhs;
  FieldRef varied;
  std::set<Assumption> assumptions_used;
  /// The Euler-Lagrange terms d_mu(dL/df_{,mu}) and -dL/df before
  /// collection, for display.
  std::vector<Expr> raw_terms;
  /// Canonical lhs before model assumptions were applied.
  Expr before_assumptions;
};

/// d_mu(dL/df_{,mu}) - dL/df for the field `f`, canonical.  For a vector
/// field the equation carries one free upper index named `mu` (or
/// `free_index` when given).  Applies the model's lorenz_gauge assumption,
/// when present, and records it.
///
/// Throws UnsupportedError if the density contains second derivatives of f.
FieldEquation euler_lagrange(const LagrangianModel& model, const FieldRef& f,
                             const std::string& free_index = "mu");

/// Electromagnetic field equation for the model's vector potential (the
/// vector field named A, or the only vector field): 4*pi times the
/// Euler-Lagrange expression, so the free term reads d_nu(F^{mu nu}) and the
/// interaction enters as -4*pi*dL_int/dA_mu.  Requires the free term
/// -1/(16*pi)*F_{mu nu}*F^{mu nu}; throws Error otherwise.
FieldEquation derive_em_equation(const LagrangianModel& model);

struct GaugeVerdict {
  bool invariant = false;
  /// lhs(A + d chi) - lhs(A), canonical; zero when invariant.
  Expr witness;
  std::string gauge_function;
};

/// Applies A_mu -> A_mu + d_mu(chi) with a fresh real scalar chi.
GaugeVerdict gauge_check(const FieldEquation& eq, const LagrangianModel& model);

struct ChargeAudit {
  /// Interaction monomial (rendered) -> degree in the charge.
  std::vector<std::pair<std::string, int>> degrees;
  std::set<int> distinct;
  /// Degrees {1, 2} (or more than one degree) mixed in one interaction.
  bool mixed = false;
  /// An interaction term with no charge at all.
  bool uncharged = false;
};

/// Degree in `charge` of every density monomial that involves the vector
/// potential or the charge itself.
ChargeAudit charge_degree_audit(const LagrangianModel& model, const std::string& charge = "e");

/// Rewrites with every equation solved for its leading derivative term
/// (box of a scalar, gamma^a d_a psi, d_a psibar gamma^a) until a fixpoint.
/// Throws ReductionError after too many rounds.
Expr on_shell_reduce(const Expr& e, const std::vector<FieldEquation>& eqs);

/// Canonical T^{mu nu} = sum_f dL/df_{,mu} f^{,nu} - L g^{mu nu}.  For a
/// complex field the conjugate partner is included; for a spinor only the
/// variables whose derivatives occur contribute.
Expr stress_energy(const LagrangianModel& model, const FieldRef& f,
                   const std::string& first = "mu", const std::string& second = "nu");

/// Pass iff conj(e) equals e given the declared field realities.
bool is_hermitian(const Expr& e);

}  // namespace fieldlint

#endif  // FIELDLINT_VARIATIONAL_HPP
