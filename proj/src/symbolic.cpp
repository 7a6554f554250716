#include "fieldlint/symbolic.hpp"

#include <algorithm>

#include "poly.hpp"

namespace fieldlint {

Expr canonicalize(const Expr& e) { return detail::to_expr(detail::to_poly(e)); }

Expr differentiate(const Expr& e, const Index& mu) {
  return detail::to_expr(detail::differentiate(detail::to_poly(e), mu));
}

Expr conjugate(const Expr& e) { return detail::to_expr(detail::conjugate(detail::to_poly(e))); }

Expr substitute(const Expr& e, std::span<const Rule> rules) {
  std::vector<std::pair<detail::Poly, detail::Poly>> compiled;
  compiled.reserve(rules.size());
  for (const auto& r : rules) {
    compiled.emplace_back(detail::to_poly(r.pattern), detail::to_poly(r.replacement));
  }
  return detail::to_expr(detail::substitute(detail::to_poly(e), compiled));
}

int poly_degree(const Expr& e, const std::string& symbol) {
  int degree = 0;
  for (const auto& [m, c] : detail::to_poly(e).terms()) {
    if (auto it = m.consts.find(symbol); it != m.consts.end()) degree = std::max(degree, it->second);
  }
  return degree;
}

std::vector<Index> free_indices(const Expr& e) {
  const auto p = detail::to_poly(e);
  if (p.is_zero()) return {};
  return detail::free_indices_of(p.terms().begin()->first);
}

std::vector<Expr> monomials(const Expr& e) {
  std::vector<Expr> out;
  for (const auto& [m, c] : detail::to_poly(e).terms()) {
    detail::Poly single;
    single.add_canonical(m, c);
    out.push_back(detail::to_expr(single));
  }
  return out;
}

Expr set_constant_zero(const Expr& e, const std::string& symbol) {
  detail::Poly out;
  for (const auto& [m, c] : detail::to_poly(e).terms()) {
    auto it = m.consts.find(symbol);
    if (it == m.consts.end() || it->second <= 0) out.add_canonical(m, c);
  }
  return detail::to_expr(out);
}

}  // namespace fieldlint
