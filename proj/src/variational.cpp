#include "fieldlint/variational.hpp"

#include <algorithm>

#include "fieldlint/error.hpp"
#include "fieldlint/symbolic.hpp"
#include "poly.hpp"

namespace fieldlint {

using detail::ChainAtom;
using detail::FieldAtom;
using detail::Monomial;
using detail::Poly;
using detail::Term;

FieldRef resolve_field(const LagrangianModel& model, const std::string& text) {
  std::string name = text;
  bool conjugated = false;
  if (name.starts_with("conj(") && name.ends_with(")")) {
    name = name.substr(5, name.size() - 6);
    conjugated = true;
  }
  const FieldSymbol* f = model.find_field(name);
  if (f == nullptr && !conjugated && name.size() > 3 && name.ends_with("bar")) {
    f = model.find_field(name.substr(0, name.size() - 3));
    if (f != nullptr && f->kind == FieldKind::Spinor) {
      conjugated = true;
    } else {
      f = nullptr;
    }
  }
  if (f == nullptr) throw Error("'" + text + "' is not a declared field");
  if (conjugated && f->reality == Reality::Real) throw Error("'" + text + "' conjugates a real field");
  return FieldRef{f->name, conjugated};
}

std::string to_string(const FieldRef& f) {
  return f.conjugated ? "conj(" + f.symbol + ")" : f.symbol;
}

namespace {

const FieldSymbol& symbol_of(const LagrangianModel& model, const FieldRef& f) {
  const FieldSymbol* s = model.find_field(f.symbol);
  if (s == nullptr) throw Error("'" + f.symbol + "' is not a declared field");
  return *s;
}

bool matches(const FieldAtom& a, const FieldRef& f) {
  return a.symbol == f.symbol && a.conj == f.conjugated;
}

void reject_higher_derivatives(const Poly& density, const FieldRef& f) {
  for (const auto& [m, c] : density.terms()) {
    auto check = [&](const FieldAtom& a) {
      if (matches(a, f) && a.derivs.size() > 1) {
        throw UnsupportedError("density contains second derivatives of " + to_string(f));
      }
    };
    for (const auto& a : m.fields) check(a);
    if (m.chain && m.chain->left) check(*m.chain->left);
    if (m.chain && m.chain->right) check(*m.chain->right);
  }
}

/// dL/d(f^{..}_{,d}) with the derivative slot (when `deriv` is set) and
/// the field's own slots bound to upper indices with the given names.
Poly partial(const Poly& density, const FieldRef& f, const std::vector<std::string>& own,
             const std::optional<std::string>& deriv) {
  const std::size_t order = deriv ? 1 : 0;
  Poly out;
  for (const auto& [m, c] : density.terms()) {
    auto bind = [&](const FieldAtom& a, Monomial& rest) {
      for (std::size_t k = 0; k < a.indices.size(); ++k) rest.metrics.push_back({up(own.at(k)), a.indices[k]});
      if (deriv) rest.metrics.push_back({up(*deriv), a.derivs[0]});
    };
    for (std::size_t i = 0; i < m.fields.size(); ++i) {
      const FieldAtom& a = m.fields[i];
      if (!matches(a, f) || a.derivs.size() != order) continue;
      Monomial rest = m;
      rest.fields.erase(rest.fields.begin() + static_cast<std::ptrdiff_t>(i));
      bind(a, rest);
      out.add(Term{c, rest});
    }
    if (m.chain) {
      const ChainAtom& ch = *m.chain;
      if (ch.left && matches(*ch.left, f) && ch.left->derivs.size() == order) {
        Monomial rest = m;
        rest.chain->left.reset();
        bind(*ch.left, rest);
        if (!rest.chain->right && rest.chain->gammas.empty()) rest.chain.reset();
        out.add(Term{c, rest});
      }
      if (ch.right && matches(*ch.right, f) && ch.right->derivs.size() == order) {
        Monomial rest = m;
        rest.chain->right.reset();
        bind(*ch.right, rest);
        if (!rest.chain->left && rest.chain->gammas.empty()) rest.chain.reset();
        out.add(Term{c, rest});
      }
    }
  }
  return out;
}

// Terms with A^{a}_{,a...} vanish.
Poly apply_lorenz_gauge(const Poly& p, bool& changed) {
  Poly out;
  for (const auto& [m, c] : p.terms()) {
    const bool divergence = std::any_of(m.fields.begin(), m.fields.end(), [](const FieldAtom& a) {
      if (a.traits.kind != FieldKind::Vector) return false;
      return std::any_of(a.derivs.begin(), a.derivs.end(),
                         [&](const Index& d) { return d.name == a.indices[0].name; });
    });
    if (divergence) {
      changed = true;
    } else {
      out.add_canonical(m, c);
    }
  }
  return out;
}

Poly pi_times(const Poly& p, long factor) {
  Monomial pi;
  pi.consts["pi"] = 1;
  return detail::scale(p, Coefficient(Rational(factor))) * detail::poly_of(pi);
}

std::vector<Expr> monomial_exprs(const Poly& p) {
  std::vector<Expr> out;
  for (const auto& [m, c] : p.terms()) {
    Poly single;
    single.add_canonical(m, c);
    out.push_back(detail::to_expr(single));
  }
  return out;
}

const FieldSymbol& gauge_potential(const LagrangianModel& model) {
  if (const FieldSymbol* a = model.find_field("A"); a != nullptr && a->kind == FieldKind::Vector) return *a;
  const FieldSymbol* found = nullptr;
  for (const auto& f : model.fields) {
    if (f.kind != FieldKind::Vector) continue;
    if (found != nullptr) throw Error("several vector fields; name the potential 'A'");
    found = &f;
  }
  if (found == nullptr) throw Error("model has no vector potential");
  return *found;
}

FieldAtom plain_atom(const FieldSymbol& s, bool conj, std::vector<Index> indices = {},
                     std::vector<Index> derivs = {}) {
  return FieldAtom{s.name, s.traits(), conj, std::move(indices), std::move(derivs)};
}

}  // namespace

FieldEquation euler_lagrange(const LagrangianModel& model, const FieldRef& f,
                             const std::string& free_index) {
  const FieldSymbol& sym = symbol_of(model, f);
  const Poly density = detail::to_poly(model.density);
  reject_higher_derivatives(density, f);

  std::vector<std::string> own;
  if (index_arity(sym.kind) == 1) {
    own.push_back(free_index);
  } else if (index_arity(sym.kind) > 1) {
    throw UnsupportedError("variation with respect to rank-2 tensor fields");
  }
  const std::string slot = detail::fresh_index_name();
  const Poly flux = detail::differentiate(partial(density, f, own, slot), down(slot));
  const Poly source = detail::scale(partial(density, f, own, std::nullopt), Coefficient(Rational(-1)));

  FieldEquation eq;
  eq.varied = f;
  eq.raw_terms = monomial_exprs(flux);
  for (auto& t : monomial_exprs(source)) eq.raw_terms.push_back(std::move(t));
  Poly lhs = flux + source;
  eq.before_assumptions = detail::to_expr(lhs);
  if (model.assumes(Assumption::LorenzGauge)) {
    bool changed = false;
    lhs = apply_lorenz_gauge(lhs, changed);
    if (changed) eq.assumptions_used.insert(Assumption::LorenzGauge);
  }
  eq.lhs = detail::to_expr(lhs);
  return eq;
}

FieldEquation derive_em_equation(const LagrangianModel& model) {
  const FieldSymbol& a = gauge_potential(model);
  // -1/(16 pi) F_{ab} F^{ab} with F_{ab} = A_{b,a} - A_{a,b}.
  const Expr field_strength_lower = field(a.name, a.traits(), {down("b")}, {down("a")}) -
                                    field(a.name, a.traits(), {down("a")}, {down("b")});
  const Expr field_strength_upper = field(a.name, a.traits(), {up("b")}, {up("a")}) -
                                    field(a.name, a.traits(), {up("a")}, {up("b")});
  const Poly free_term = detail::to_poly(num(-1, 16) * pow(constant("pi"), -1) * field_strength_lower *
                                         field_strength_upper);
  const Poly density = detail::to_poly(model.density);
  for (const auto& [m, c] : free_term.terms()) {
    auto it = density.terms().find(m);
    if (it == density.terms().end() || !(it->second == c)) {
      throw Error("model lacks the free electromagnetic term -1/(16*pi)*F_{mu nu}*F^{mu nu}");
    }
  }
  FieldEquation eq = euler_lagrange(model, FieldRef{a.name, false}, "mu");
  eq.lhs = detail::to_expr(pi_times(detail::to_poly(eq.lhs), 4));
  eq.before_assumptions = detail::to_expr(pi_times(detail::to_poly(eq.before_assumptions), 4));
  for (auto& t : eq.raw_terms) t = detail::to_expr(pi_times(detail::to_poly(t), 4));
  return eq;
}

GaugeVerdict gauge_check(const FieldEquation& eq, const LagrangianModel& model) {
  const FieldSymbol& a = gauge_potential(model);
  std::string chi = "chi";
  for (int k = 1; model.find_field(chi) || model.find_constant(chi); ++k) chi = "chi" + std::to_string(k);
  const FieldSymbol chi_symbol{chi, FieldKind::Scalar, Reality::Real, std::nullopt};

  const std::string slot = detail::fresh_index_name();
  const Poly pattern = detail::poly_of_atom(plain_atom(a, false, {down(slot)}));
  const Poly replacement =
      pattern + detail::poly_of_atom(plain_atom(chi_symbol, false, {}, {down(slot)}));
  const Poly lhs = detail::to_poly(eq.lhs);
  const Poly shifted = detail::substitute(lhs, {{pattern, replacement}});
  const Poly residual = shifted + detail::scale(lhs, Coefficient(Rational(-1)));
  return GaugeVerdict{residual.is_zero(), detail::to_expr(residual), chi};
}

ChargeAudit charge_degree_audit(const LagrangianModel& model, const std::string& charge) {
  ChargeAudit audit;
  for (const auto& [m, c] : detail::to_poly(model.density).terms()) {
    bool has_potential = false;
    bool has_matter = m.chain.has_value();
    for (const auto& f : m.fields) {
      if (f.traits.kind == FieldKind::Vector) {
        has_potential = true;
      } else {
        has_matter = true;
      }
    }
    auto it = m.consts.find(charge);
    const int degree = it == m.consts.end() ? 0 : it->second;
    if (!(has_potential && has_matter) && degree == 0) continue;
    Poly single;
    single.add_canonical(m, c);
    audit.degrees.emplace_back(render(detail::to_expr(single)), degree);
    audit.distinct.insert(degree);
    if (degree == 0) audit.uncharged = true;
  }
  audit.mixed = audit.distinct.size() > 1;
  return audit;
}

namespace {

struct BoxRule {
  Poly pattern;
  Poly replacement;
};

struct ChainRule {
  std::string symbol;
  bool row = false;  // d_a(psibar) gamma^a ... ; otherwise ... gamma^a d_a(psi)
  Poly replacement;
};

struct Rules {
  std::vector<BoxRule> boxes;
  std::vector<ChainRule> chains;
};

Rules build_rules(const std::vector<FieldEquation>& eqs) {
  Rules rules;
  for (const auto& eq : eqs) {
    const Poly p = detail::to_poly(eq.lhs);
    bool found = false;
    for (const auto& [m, c] : p.terms()) {
      Poly rest = p;
      rest.add_canonical(m, -c);
      const Poly solved = detail::scale(rest, -c.inverse());
      if (m.consts.empty() && m.metrics.empty() && !m.chain && m.fields.size() == 1) {
        const FieldAtom& a = m.fields[0];
        if (a.indices.empty() && a.derivs.size() == 2 && a.derivs[0].name == a.derivs[1].name) {
          rules.boxes.push_back({detail::poly_of(m), solved});
          found = true;
          break;
        }
      }
      if (m.consts.empty() && m.metrics.empty() && m.fields.empty() && m.chain &&
          m.chain->gammas.size() == 1) {
        const ChainAtom& ch = *m.chain;
        const std::string& g = ch.gammas[0].name;
        if (ch.right && !ch.left && ch.right->derivs.size() == 1 && ch.right->derivs[0].name == g) {
          rules.chains.push_back({ch.right->symbol, false, solved});
          found = true;
          break;
        }
        if (ch.left && !ch.right && ch.left->derivs.size() == 1 && ch.left->derivs[0].name == g) {
          rules.chains.push_back({ch.left->symbol, true, solved});
          found = true;
          break;
        }
      }
    }
    if (!found) {
      throw ReductionError("cannot solve " + render(eq.lhs) + " = 0 for a leading derivative term");
    }
  }
  return rules;
}

std::optional<Poly> apply_chain_rule(const Term& t, const ChainRule& rule) {
  if (!t.mono.chain) return std::nullopt;
  ChainAtom ch = *t.mono.chain;
  if (ch.gammas.empty()) return std::nullopt;
  std::optional<FieldAtom>& spinor = rule.row ? ch.left : ch.right;
  if (!spinor || spinor->symbol != rule.symbol || spinor->conj != rule.row) return std::nullopt;
  const Index& g = rule.row ? ch.gammas.front() : ch.gammas.back();
  auto hit = std::find_if(spinor->derivs.begin(), spinor->derivs.end(),
                          [&](const Index& d) { return d.name == g.name; });
  if (hit == spinor->derivs.end()) return std::nullopt;
  std::vector<Index> remaining = spinor->derivs;
  remaining.erase(remaining.begin() + (hit - spinor->derivs.begin()));

  Poly replacement = detail::map_terms(rule.replacement, [](Term& x) { detail::freshen_dummies(x); });
  for (const auto& d : remaining) replacement = detail::differentiate(replacement, d);

  Monomial rest = t.mono;
  if (rule.row) {
    rest.chain->left.reset();
    rest.chain->gammas.erase(rest.chain->gammas.begin());
  } else {
    rest.chain->right.reset();
    rest.chain->gammas.pop_back();
  }
  if (!rest.chain->left && !rest.chain->right && rest.chain->gammas.empty()) rest.chain.reset();
  Poly raw;
  raw.add_canonical(rest, t.coef);
  return rule.row ? replacement * raw : raw * replacement;
}

Poly reduce_once(const Poly& p, const Rules& rules) {
  std::vector<std::pair<Poly, Poly>> boxes;
  for (const auto& b : rules.boxes) boxes.emplace_back(b.pattern, b.replacement);
  Poly current = boxes.empty() ? p : detail::substitute(p, boxes);
  if (rules.chains.empty()) return current;
  Poly out;
  for (const auto& [m, c] : current.terms()) {
    Term t{c, m};
    detail::freshen_dummies(t);
    std::optional<Poly> replaced;
    for (const auto& rule : rules.chains) {
      if ((replaced = apply_chain_rule(t, rule))) break;
    }
    if (replaced) {
      out = out + *replaced;
    } else {
      out.add_canonical(m, c);
    }
  }
  return out;
}

constexpr int kMaxReductionRounds = 64;

}  // namespace

Expr on_shell_reduce(const Expr& e, const std::vector<FieldEquation>& eqs) {
  Poly current = detail::to_poly(e);
  if (eqs.empty()) return detail::to_expr(current);
  const Rules rules = build_rules(eqs);
  for (int round = 0; round < kMaxReductionRounds; ++round) {
    Poly next = reduce_once(current, rules);
    if (next == current) return detail::to_expr(current);
    current = std::move(next);
  }
  throw ReductionError("on-shell reduction did not reach a fixpoint");
}

Expr stress_energy(const LagrangianModel& model, const FieldRef& f, const std::string& first,
                   const std::string& second) {
  const FieldSymbol& sym = symbol_of(model, f);
  if (index_arity(sym.kind) != 0) throw UnsupportedError("stress-energy of non-scalar fields");
  const Poly density = detail::to_poly(model.density);
  std::vector<FieldRef> vars{FieldRef{sym.name, false}};
  if (sym.reality == Reality::Complex) vars.push_back(FieldRef{sym.name, true});

  Poly total;
  for (const auto& v : vars) {
    reject_higher_derivatives(density, v);
    const Poly momentum = partial(density, v, {}, first);
    const Poly gradient = detail::poly_of_atom(plain_atom(sym, v.conjugated, {}, {up(second)}));
    // Spinor rows must stand left of columns.
    const bool row_first = sym.kind == FieldKind::Spinor && v.conjugated;
    total = total + (row_first ? gradient * momentum : momentum * gradient);
  }
  Monomial g;
  g.metrics.push_back({up(first), up(second)});
  total = total + detail::scale(density * detail::poly_of(g), Coefficient(Rational(-1)));
  return detail::to_expr(total);
}

bool is_hermitian(const Expr& e) { return canonicalize(conjugate(e)) == canonicalize(e); }

}  // namespace fieldlint
