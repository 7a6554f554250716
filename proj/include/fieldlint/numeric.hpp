#ifndef FIELDLINT_NUMERIC_HPP
#define FIELDLINT_NUMERIC_HPP

#include <array>
#include <complex>
#include <map>
#include <string>
#include <variant>

#include "fieldlint/dsl.hpp"
#include "fieldlint/expr.hpp"
#include "fieldlint/variational.hpp"

namespace fieldlint {

using Complex = std::complex<double>;

inline constexpr double kEqualityTolerance = 1e-12;
inline constexpr double kFiniteDifferenceTolerance = 1e-5;

struct SpacetimePoint {
  double t = 0;
  double x = 0;
  double y = 0;
  double z = 0;

  double operator[](int mu) const;
  SpacetimePoint shifted(int mu, double h) const;
};

/// Contravariant components v^0..v^3.
struct FourVector {
  std::array<double, 4> v{};

  double operator[](int mu) const { return v[static_cast<std::size_t>(mu)]; }
};

/// a^mu b_mu with signature (+,-,-,-).
double minkowski(const FourVector& a, const FourVector& b);

/// gamma*(1, v) for a 3-velocity with |v| < 1.
FourVector four_velocity(const std::array<double, 3>& velocity);

/// amplitude * exp(i(p.x - E t)); requires E > 0.
struct PlaneWave {
  double energy = 1;
  std::array<double, 3> momentum{};
  double amplitude = 1;
};

/// g * exp(-m r) / (4 pi r), static; singular at r = 0.
struct Yukawa {
  double coupling = 1;
  double mass = 0;
};

/// A_mu = (V, 0, 0, 0), constant in space and time.
struct ConstantPotential {
  double potential = 0;
};

using FieldProfile = std::variant<PlaneWave, Yukawa, ConstantPotential>;

struct FieldConfig {
  std::map<std::string, FieldProfile> fields;
  /// `pi` defaults to its value when not assigned.
  std::map<std::string, double> constants;
};

/// Evaluates `e` at `x`.  Free indices must be fixed through
/// `components` (index name -> 0..3); dummy pairs are summed with the
/// metric diag(1,-1,-1,-1).  Derivatives are closed-form.
///
/// Throws ConfigError for unassigned symbols or unfixed free indices,
/// SingularityError for Yukawa at r = 0, UnsupportedError for spinor
/// content or Yukawa derivatives beyond second order.
Complex eval(const Expr& e, const FieldConfig& cfg, const SpacetimePoint& x,
             const std::map<std::string, int>& components = {});

/// Max relative deviation between d_mu(e) and central differences of e
/// with step h, over mu = 0..3.  `e` must have no free indices.
double finite_diff_check(const Expr& e, const FieldConfig& cfg, const SpacetimePoint& x, double h);

/// Residual coefficient (lhs/phi) of the charged field equation `eq` for a
/// particle at rest with energy m + U in the potential V = U/charge.  The
/// equation must be written in the field `eq.varied.symbol`, the vector
/// potential `A` and the constants `m` and `e`.
Complex kg_em_residual(const FieldEquation& eq, double m, double U, double charge = 0.30282212088);

struct Box {
  double side = 1;      // cube edge
  double duration = 1;  // time extent
  int cells = 4;        // midpoint cells per axis
};

struct ActionComparison {
  /// dS/dt normalized by the integral of 2E|phi|^2 over the box.
  double field_rate = 0;
  /// -m sqrt(1 - v^2) with v = |p|/E.
  double classical_rate = 0;
  bool mismatch = false;
};

/// Midpoint quadrature of the model density over `box` with the plane wave
/// assigned to `field`.  Throws ConfigError when E <= 0.
ActionComparison action_box(const LagrangianModel& model, const FieldConfig& cfg, const Box& box,
                            const std::string& field, double tolerance = kEqualityTolerance);

/// T^{00} of `stress` (free upper indices `first`, `second`) for the
/// static Yukawa profile of `field` at distance r on the z axis.
double yukawa_t00(const Expr& stress, double g, double m, double r, const std::string& field = "phi",
                  const std::string& first = "mu", const std::string& second = "nu");

/// (1/(2r^2) + m/r + m^2) phi^2.
double yukawa_t00_closed_form(double g, double m, double r);

/// f^mu v_mu; requires v^mu v_mu = 1 within `tolerance`, else ConfigError.
double orthogonality_check(const FourVector& force, const FourVector& velocity,
                           double tolerance = kEqualityTolerance);

/// (0, lambda * grad phi) for the Yukawa profile at `x`.
FourVector yukawa_force(double g, double m, double lambda, const SpacetimePoint& x);

using Matrix4 = std::array<std::array<double, 4>, 4>;

/// f^mu = F^{mu nu} j_nu for contravariant F and j.
FourVector lorentz_force(const Matrix4& field_strength, const FourVector& current);

/// F^{mu nu} of a static electric field: F^{i0} = E^i = -F^{0i}.
Matrix4 electric_field_tensor(const std::array<double, 3>& electric);

}  // namespace fieldlint

#endif  // FIELDLINT_NUMERIC_HPP
