#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fieldlint/error.hpp"
#include "fieldlint/numeric.hpp"
#include "test_util.hpp"

using namespace fieldlint;
using fieldlint::testing::canon;
using fieldlint::testing::catalog_model;

namespace {

constexpr double kFourPi = 4 * std::numbers::pi;

FieldConfig plane_wave(double E, std::array<double, 3> p, double m = 1) {
  FieldConfig cfg;
  cfg.fields["phi"] = PlaneWave{E, p, 1};
  cfg.constants["m"] = m;
  return cfg;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST(Minkowski, Signature) {
  EXPECT_DOUBLE_EQ(minkowski({{1, 0, 0, 0}}, {{1, 0, 0, 0}}), 1);
  EXPECT_DOUBLE_EQ(minkowski({{0, 1, 2, 3}}, {{0, 1, 2, 3}}), -14);
  const FourVector u = four_velocity({0, 0, 0.6});
  EXPECT_NEAR(u[0], 1.25, 1e-15);
  EXPECT_NEAR(u[3], 0.75, 1e-15);
  EXPECT_NEAR(minkowski(u, u), 1, 1e-15);
}

TEST(SpacetimePoint, Components) {
  const SpacetimePoint x{1, 2, 3, 4};
  EXPECT_EQ(x[0], 1);
  EXPECT_EQ(x[3], 4);
  EXPECT_EQ(x.shifted(2, 0.5)[2], 3.5);
}

TEST(Eval, PlaneWaveHasUnitModulus) {
  const LagrangianModel m = catalog_model("kg_free_complex");
  const FieldConfig cfg = plane_wave(std::sqrt(2.0), {0, 0, 1});
  for (const SpacetimePoint& x : {SpacetimePoint{0, 0, 0, 0}, SpacetimePoint{1.3, -2, 0.4, 7}}) {
    EXPECT_NEAR(std::abs(eval(canon("conj(phi)*phi", m), cfg, x) - 1.0), 0, 1e-15);
    // 2E|phi|^2 = 2*sqrt(2).
    EXPECT_NEAR(eval(canon("i*(conj(phi)*d_{mu}(phi) - d_{mu}(conj(phi))*phi)", m), cfg, x, {{"mu", 0}}).real(), 2.8284271247461903,
                1e-14);
  }
}

TEST(Eval, DerivativesOfPlaneWave) {
  const LagrangianModel m = catalog_model("kg_free_complex");
  const FieldConfig cfg = plane_wave(2, {0.5, 0, 1}, 1.5);
  const SpacetimePoint x{0.3, 0.1, 0.2, -0.4};
  // Box of a plane wave is -(E^2 - p^2) phi.
  const Complex phi = eval(canon("phi", m), cfg, x);
  const Complex box = eval(canon("d^{mu}(d_{mu}(phi))", m), cfg, x);
  EXPECT_NEAR(std::abs(box + (4 - 1.25) * phi), 0, 1e-13);
  EXPECT_NEAR(std::abs(eval(canon("d_{mu}(phi)", m), cfg, x, {{"mu", 0}}) - Complex(0, -2) * phi), 0, 1e-14);
  EXPECT_NEAR(std::abs(eval(canon("d_{mu}(phi)", m), cfg, x, {{"mu", 1}}) - Complex(0, 0.5) * phi), 0, 1e-14);
}

TEST(Eval, YukawaProfile) {
  const LagrangianModel m = catalog_model("kg_free_real");
  FieldConfig cfg;
  cfg.fields["phi"] = Yukawa{kFourPi, 1};
  EXPECT_NEAR(eval(canon("phi", m), cfg, {0, 0, 0, 1}).real(), 0.36787944117144233, 1e-15);
  EXPECT_THROW(eval(canon("phi", m), cfg, {0, 0, 0, 0}), SingularityError);
  EXPECT_THROW(eval(canon("d_{a}(d_{b}(d^{a}(phi)))*d^{b}(phi)", m), cfg, {0, 0, 0, 1}), UnsupportedError);
}

TEST(Eval, Errors) {
  const LagrangianModel m = catalog_model("kg_free_real");
  FieldConfig cfg;
  EXPECT_THROW(eval(canon("phi", m), cfg, {}), ConfigError);
  cfg.fields["phi"] = PlaneWave{1, {0, 0, 0}, 1};
  EXPECT_THROW(eval(canon("m*phi", m), cfg, {}), ConfigError);
  EXPECT_THROW(eval(canon("d_{mu}(phi)", m), cfg, {}), ConfigError);
  cfg.fields["phi"] = PlaneWave{std::nan(""), {0, 0, 0}, 1};
  EXPECT_THROW(eval(canon("phi", m), cfg, {}), ConfigError);
  const LagrangianModel dirac = catalog_model("dirac_free");
  EXPECT_THROW(eval(canon("psibar*psi", dirac), FieldConfig{}, {}), UnsupportedError);
}

TEST(Eval, PiDefaultsToItsValue) {
  const LagrangianModel m = catalog_model("kg_free_real");
  EXPECT_NEAR(eval(canon("pi", m), FieldConfig{}, {}).real(), std::numbers::pi, 0);
}

TEST(FiniteDiff, Examples) {
  const LagrangianModel m = catalog_model("kg_free_real");
  EXPECT_LE(finite_diff_check(canon("phi", m), plane_wave(1.3, {0.2, 0.4, -0.1}), {0.5, 0.2, 0.1, 0.3}, 1e-4), 1e-6);
  FieldConfig yuk;
  yuk.fields["phi"] = Yukawa{kFourPi, 1};
  EXPECT_LE(finite_diff_check(canon("phi^2", m), yuk, {0, 0.6, 0, 0.8}, 1e-4), 1e-5);
  EXPECT_EQ(finite_diff_check(canon("m^2", m), plane_wave(1, {0, 0, 0}), {}, 1e-4), 0);
}

TEST(FiniteDiff, YukawaStressComponents) {
  const LagrangianModel m = catalog_model("kg_free_real");
  FieldConfig yuk;
  yuk.fields["phi"] = Yukawa{kFourPi, 0.7};
  yuk.constants["m"] = 0.7;
  EXPECT_LE(finite_diff_check(canon("d_{a}(phi)*d^{a}(phi) - m^2*phi^2", m), yuk, {0, 0.3, -0.9, 1.2}, 1e-4),
            kFiniteDifferenceTolerance);
}

TEST(KgEmResidual, SpotValues) {
  const LagrangianModel m = catalog_model("kg_em");
  const FieldEquation eq = euler_lagrange(m, resolve_field(m, "conj(phi)"));
  EXPECT_NEAR(kg_em_residual(eq, 1, 0.1).real(), 0.01, 1e-12);
  EXPECT_NEAR(std::abs(kg_em_residual(eq, 1, 0)), 0, 1e-12);
  EXPECT_NEAR(kg_em_residual(eq, 2, 0.5).real(), 0.25, 1e-12);
}

TEST(KgEmResidual, EqualsPotentialSquaredOverSweep) {
  const LagrangianModel m = catalog_model("kg_em");
  const FieldEquation eq = euler_lagrange(m, resolve_field(m, "conj(phi)"));
  for (int a = 0; a <= 20; ++a) {
    const double mass = 0.1 + a * (10 - 0.1) / 20;
    for (int b = 0; b <= 20; ++b) {
      const double U = -1 + b * 0.1;
      const Complex r = kg_em_residual(eq, mass, U);
      // Same arithmetic done independently: -(m+U)^2 + 2U(m+U) + m^2.
      const double oracle = -(mass + U) * (mass + U) + 2 * U * (mass + U) + mass * mass;
      EXPECT_NEAR(r.real(), U * U, 1e-12) << mass << " " << U;
      EXPECT_NEAR(r.real(), oracle, 1e-12);
      EXPECT_NEAR(r.imag(), 0, 1e-12);
    }
  }
}

TEST(ActionBox, OnShellVanishes) {
  const LagrangianModel m = catalog_model("kg_free_complex");
  const ActionComparison a = action_box(m, plane_wave(std::sqrt(2.0), {0, 0, 1}), Box{}, "phi");
  EXPECT_NEAR(a.field_rate, 0, 1e-12);
  EXPECT_TRUE(a.mismatch);
  EXPECT_NEAR(a.classical_rate, -std::sqrt(0.5), 1e-15);
}

TEST(ActionBox, OffShell) {
  const LagrangianModel m = catalog_model("kg_free_complex");
  const ActionComparison a = action_box(m, plane_wave(2, {0, 0, 1}), Box{}, "phi");
  EXPECT_NEAR(a.field_rate, 0.5, 1e-12);
}

TEST(ActionBox, ClassicalComparatorAtRest) {
  const LagrangianModel m = catalog_model("kg_free_complex");
  const ActionComparison a = action_box(m, plane_wave(1, {0, 0, 0}), Box{}, "phi");
  EXPECT_NEAR(a.field_rate, 0, 1e-12);
  EXPECT_DOUBLE_EQ(a.classical_rate, -1);
  EXPECT_TRUE(a.mismatch);
}

TEST(ActionBox, IndependentOfBox) {
  const LagrangianModel m = catalog_model("kg_free_complex");
  const FieldConfig cfg = plane_wave(1.7, {0.3, -0.2, 0.5}, 0.9);
  const double a = action_box(m, cfg, Box{1, 1, 3}, "phi").field_rate;
  const double b = action_box(m, cfg, Box{7.5, 0.4, 5}, "phi").field_rate;
  EXPECT_NEAR(a, b, 1e-12);
  EXPECT_NEAR(a, (1.7 * 1.7 - 0.38 - 0.81) / (2 * 1.7), 1e-12);
}

TEST(ActionBox, RequiresPositiveEnergy) {
  const LagrangianModel m = catalog_model("kg_free_complex");
  EXPECT_THROW(action_box(m, plane_wave(0, {0, 0, 1}), Box{}, "phi"), ConfigError);
}

TEST(YukawaT00, SpotValues) {
  const LagrangianModel m = catalog_model("kg_free_real");
  const Expr T = stress_energy(m, FieldRef{"phi", false});
  // 2.5 * e^-2 and (1/8) * (1/2)^2.
  EXPECT_NEAR(yukawa_t00(T, kFourPi, 1, 1), 0.33833820809153176, 1e-12);
  EXPECT_NEAR(yukawa_t00_closed_form(kFourPi, 1, 1), 0.33833820809153176, 1e-15);
  EXPECT_NEAR(yukawa_t00(T, kFourPi, 0, 2), 0.03125, 1e-15);
  EXPECT_LT(yukawa_t00(T, kFourPi, 1, 50), 1e-40);
  EXPECT_THROW(yukawa_t00(T, kFourPi, 1, 0), ConfigError);
  EXPECT_THROW(yukawa_t00(T, kFourPi, 1, -1), ConfigError);
}

TEST(YukawaT00, SymbolicRouteMatchesClosedForm) {
  const LagrangianModel m = catalog_model("kg_free_real");
  const Expr T = stress_energy(m, FieldRef{"phi", false});
  for (double mass : {0.0, 0.5, 1.0, 2.5, 5.0}) {
    for (int k = 0; k < 50; ++k) {
      const double r = 0.1 + k * (20 - 0.1) / 49;
      const double closed = yukawa_t00_closed_form(kFourPi, mass, r);
      if (closed == 0) continue;
      EXPECT_LE(rel(yukawa_t00(T, kFourPi, mass, r), closed), 1e-12) << mass << " " << r;
    }
  }
}

TEST(Orthogonality, YukawaForceFixture) {
  const FourVector f = yukawa_force(kFourPi, 1, 1, {0, 0, 0, 1});
  EXPECT_NEAR(f[3], -2 * std::exp(-1.0), 1e-15);
  const FourVector u = four_velocity({0, 0, -0.6});
  EXPECT_NEAR(orthogonality_check(f, u), -0.5518191617571635, 1e-6);
}

TEST(Orthogonality, LambdaScalesTheProduct) {
  const FourVector u = four_velocity({0, 0, -0.6});
  const double base = orthogonality_check(yukawa_force(kFourPi, 1, 1, {0, 0, 0, 1}), u);
  for (double lambda : {0.5, 2.0, 10.0}) {
    const double p = orthogonality_check(yukawa_force(kFourPi, 1, lambda, {0, 0, 0, 1}), u);
    EXPECT_NEAR(p, lambda * base, 1e-12);
    EXPECT_NE(p, 0);
  }
}

TEST(Orthogonality, LorentzForceContrast) {
  const FourVector u = four_velocity({0, 0, 0.6});
  const FourVector f = lorentz_force(electric_field_tensor({0.3, -1.2, 0.7}), u);
  EXPECT_LE(std::abs(orthogonality_check(f, u)), 1e-12);
}

TEST(Orthogonality, RandomAntisymmetricTensors) {
  std::mt19937 rng(20260);
  std::uniform_real_distribution<double> entry(-5, 5);
  std::uniform_real_distribution<double> speed(-0.55, 0.55);
  std::uniform_real_distribution<double> charge(-3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix4 F{};
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) {
        F[a][b] = entry(rng);
        F[b][a] = -F[a][b];
      }
    }
    const FourVector u = four_velocity({speed(rng), speed(rng), speed(rng)});
    const double q = charge(rng);
    const FourVector j{{q * u[0], q * u[1], q * u[2], q * u[3]}};
    EXPECT_LE(std::abs(orthogonality_check(lorentz_force(F, j), u)), 1e-12);
  }
}

TEST(Orthogonality, RestFrameSpatialForce) {
  EXPECT_EQ(orthogonality_check({{0, 1.5, -2, 3}}, {{1, 0, 0, 0}}), 0);
}

TEST(Orthogonality, RequiresNormalizedVelocity) {
  EXPECT_THROW(orthogonality_check({{0, 1, 0, 0}}, {{1, 0.5, 0, 0}}), ConfigError);
}
