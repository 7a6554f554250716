#include <gtest/gtest.h>

#include <random>

#include "fieldlint/error.hpp"
#include "test_util.hpp"

using namespace fieldlint;
using fieldlint::testing::canon;
using fieldlint::testing::catalog;
using fieldlint::testing::catalog_model;
using fieldlint::testing::expr;

namespace {

template <class E>
E parse_error(std::string_view text) {
  try {
    parse(text);
  } catch (const E& e) {
    return e;
  }
  ADD_FAILURE() << "no error for: " << text;
  return E("", 0, 0);
}

bool has_sandwich(const Expr& e) {
  if (e.as<node::SpinorSandwich>() != nullptr) return true;
  if (const auto* s = e.as<node::Sum>()) {
    for (const auto& t : s->terms) {
      if (has_sandwich(t)) return true;
    }
  }
  if (const auto* p = e.as<node::Product>()) {
    for (const auto& f : p->factors) {
      if (has_sandwich(f)) return true;
    }
  }
  return false;
}

}  // namespace

TEST(Parse, FreeRealKleinGordon) {
  const LagrangianModel m = catalog_model("kg_free_real");
  ASSERT_EQ(m.fields.size(), 1u);
  EXPECT_EQ(m.fields[0].name, "phi");
  EXPECT_EQ(m.fields[0].kind, FieldKind::Scalar);
  EXPECT_EQ(m.fields[0].reality, Reality::Real);
  EXPECT_EQ(m.density, canon("1/2*(d_{mu}(phi)*d^{mu}(phi) - m^2*phi^2)", m));
}

TEST(Parse, DiracDensityIsASpinorSandwich) {
  const LagrangianModel m = catalog_model("dirac_free");
  EXPECT_TRUE(has_sandwich(m.density));
  EXPECT_EQ(m.density, canon("i*psibar*gamma^{mu}*d_{mu}(psi) - m*psibar*psi", m));
  ASSERT_NE(m.find_field("psi"), nullptr);
  EXPECT_EQ(m.find_field("psi")->kind, FieldKind::Spinor);
}

TEST(Parse, Declarations) {
  const LagrangianModel m = parse(R"(
# comment line
field phi: complex scalar dim -1   # trailing comment
field A: real vector
const e dim 0
const lam
assume lorenz_gauge
L = conj(phi)*phi
L = e*lam*A^{mu}*A_{mu}
)");
  EXPECT_EQ(m.find_field("phi")->dimension, Rational(-1));
  EXPECT_FALSE(m.find_field("A")->dimension.has_value());
  EXPECT_EQ(m.find_constant("e")->dimension, Rational(0));
  EXPECT_FALSE(m.find_constant("lam")->dimension.has_value());
  ASSERT_NE(m.find_constant("pi"), nullptr);
  EXPECT_TRUE(m.assumes(Assumption::LorenzGauge));
  EXPECT_FALSE(m.assumes(Assumption::OnShell));
  EXPECT_EQ(m.pieces.size(), 2u);
  EXPECT_EQ(m.density, canon("conj(phi)*phi + e*lam*A^{mu}*A_{mu}", m));
}

TEST(Parse, DefinitionsExpandWithIndexRenaming) {
  const LagrangianModel m = catalog_model("maxwell_free");
  ASSERT_NE(m.find_definition("F"), nullptr);
  EXPECT_EQ(canon("F^{a b}*F_{a b}", m),
            canon("2*d^{a}(A^{b})*d_{a}(A_{b}) - 2*d^{a}(A^{b})*d_{b}(A_{a})", m));
}

TEST(Parse, DivisionByNumbersAndConstants) {
  const LagrangianModel m = parse("field phi: real scalar\nconst k\nL = phi^2/(2*k) - 3/4*phi/k^2");
  EXPECT_EQ(m.density, canon("1/2*k^-1*phi^2 - 3/4*k^-2*phi", m));
}

TEST(ParseErrors, UndeclaredSymbol) {
  const auto e = parse_error<UndeclaredSymbolError>("L = phi");
  EXPECT_EQ(e.line(), 1u);
  EXPECT_EQ(e.column(), 5u);
}

TEST(ParseErrors, ReportLineAndColumn) {
  const auto e = parse_error<ParseError>("field phi: real scalar\nL = phi *  * phi");
  EXPECT_EQ(e.line(), 2u);
  EXPECT_EQ(e.column(), 12u);
}

TEST(ParseErrors, ConjugateOfRealField) {
  const auto e = parse_error<ParseError>("field phi: real scalar\nL = conj(phi)*phi");
  EXPECT_NE(std::string(e.what()).find("conj of real field"), std::string::npos);
}

TEST(ParseErrors, IndexArityMismatch) {
  parse_error<ParseError>("field A: real vector\nL = A_{mu nu}*A^{mu nu}");
  parse_error<ParseError>("field phi: real scalar\nL = phi_{mu}*d^{mu}(phi)");
}

TEST(ParseErrors, DuplicateDeclaration) { parse_error<ParseError>("field phi: real scalar\nconst phi"); }

TEST(ParseErrors, Division) {
  parse_error<ParseError>("field phi: real scalar\nL = 1/phi");
  parse_error<ParseError>("field phi: real scalar\nL = phi/0");
}

TEST(ParseErrors, UnknownKindAndAssumption) {
  parse_error<ParseError>("field phi: real spinorial");
  parse_error<ParseError>("assume coulomb_gauge");
}

// Near-valid monomials where one index name is used three times.
TEST(ParseErrors, TripleIndexFuzz) {
  const std::vector<std::string> slots{"d_{%}(phi)", "d^{%}(phi)", "A_{%}", "A^{%}", "d_{%}(conj(chi))"};
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, slots.size() - 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::string body = "m";
    for (int k = 0; k < 3; ++k) {
      std::string s = slots[pick(rng)];
      s.replace(s.find('%'), 1, "mu");
      body += "*" + s;
    }
    const std::string text =
        "field phi: real scalar\nfield chi: complex scalar\nfield A: real vector\nconst m\nL = " + body;
    EXPECT_THROW(parse(text), ParseError) << body;
  }
}

TEST(ParseExpr, UsesModelDeclarations) {
  EXPECT_EQ(canon("d_{mu}(m*phi)"), canon("m*d_{mu}(phi)"));
  EXPECT_THROW(parse_expr("psi", fieldlint::testing::algebra_model()), UndeclaredSymbolError);
}

TEST(Render, CurrentOfComplexField) {
  const LagrangianModel m = catalog_model("kg_free_complex");
  EXPECT_EQ(render(canon("i*conj(phi)*d_{mu}(phi) - i*d_{mu}(conj(phi))*phi", m)),
            "i*(conj(phi)*d_{mu}(phi) - d_{mu}(conj(phi))*phi)");
}

TEST(Render, Zero) {
  EXPECT_EQ(render(num(0)), "0");
  EXPECT_EQ(render(canon("phi - phi")), "0");
}

TEST(Render, SeagullTermOfTheFieldEquation) {
  const LagrangianModel m = catalog_model("kg_pauli_weisskopf");
  const std::string text = render(canon("d_{nu}(F^{mu nu}) + 8*pi*e^2*A^{mu}*conj(phi)*phi", m));
  EXPECT_NE(text.find("8*pi*e^2*A^{mu}*conj(phi)*phi"), std::string::npos) << text;
}

TEST(Render, SpinorAdjointAndGamma) {
  const LagrangianModel m = catalog_model("dirac_free");
  EXPECT_EQ(render(canon("psibar*gamma^{mu}*psi", m)), "psibar*gamma^{mu}*psi");
}

TEST(Render, DummyNamesAvoidUserIndices) {
  const std::string text = render(canon("A^{a}*d_{b}(phi)*d^{b}(phi)"));
  EXPECT_EQ(canon(text), canon("A^{a}*d_{b}(phi)*d^{b}(phi)"));
}

TEST(RoundTrip, EveryCatalogModel) {
  for (const auto& name : catalog().model_names()) {
    const LagrangianModel m = catalog_model(name);
    const std::string text = render(m.density);
    EXPECT_EQ(canonicalize(parse_expr(text, m)), m.density) << name << ": " << text;
    for (const auto& piece : m.pieces) {
      EXPECT_EQ(canonicalize(parse_expr(render(piece), m)), piece) << name;
    }
  }
}

TEST(RoundTrip, ModelSourceReparsesIdentically) {
  for (const auto& name : catalog().model_names()) {
    EXPECT_EQ(parse(catalog().source(name)).density, catalog_model(name).density) << name;
  }
}
