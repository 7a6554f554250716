#ifndef FIELDLINT_TESTS_TEST_UTIL_HPP
#define FIELDLINT_TESTS_TEST_UTIL_HPP

#include <string>

#include "fieldlint/dsl.hpp"
#include "fieldlint/scenarios.hpp"
#include "fieldlint/symbolic.hpp"

namespace fieldlint::testing {

inline const Catalog& catalog() {
  static const Catalog c = Catalog::builtin();
  return c;
}

inline LagrangianModel catalog_model(const std::string& name) { return catalog().model(name); }

/// Symbols shared by the algebra tests.
inline const LagrangianModel& algebra_model() {
  static const LagrangianModel m = parse(R"(
field phi: real scalar
field chi: complex scalar
field A: real vector
field S: real symmetric
field F: real antisymmetric
const m dim -1
const e dim 0
const a
const b
)");
  return m;
}

inline Expr expr(const std::string& text, const LagrangianModel& m = algebra_model()) { return parse_expr(text, m); }

inline Expr canon(const std::string& text, const LagrangianModel& m = algebra_model()) {
  return canonicalize(parse_expr(text, m));
}

}  // namespace fieldlint::testing

#endif  // FIELDLINT_TESTS_TEST_UTIL_HPP
