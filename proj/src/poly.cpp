#include "poly.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <set>
#include <unordered_map>

#include "fieldlint/error.hpp"

namespace fieldlint::detail {

namespace {

std::atomic<unsigned long> g_fresh_counter{0};

template <class M, class F>
void visit_indices(M& m, F&& f) {
  for (auto& a : m.fields) {
    for (auto& i : a.indices) f(i);
    for (auto& i : a.derivs) f(i);
  }
  for (auto& g : m.metrics) {
    f(g.a);
    f(g.b);
  }
  if (m.chain) {
    if (m.chain->left) {
      for (auto& i : m.chain->left->derivs) f(i);
    }
    for (auto& i : m.chain->gammas) f(i);
    if (m.chain->right) {
      for (auto& i : m.chain->right->derivs) f(i);
    }
  }
}

std::string describe(const Index& i) {
  return (i.variance == Variance::Upper ? "^" : "_") + i.name;
}

void check_discipline(const Monomial& m) {
  std::map<std::string, std::vector<Variance>> seen;
  visit_indices(m, [&](const Index& i) { seen[i.name].push_back(i.variance); });
  for (const auto& [name, vs] : seen) {
    if (vs.size() > 2) {
      throw IndexDisciplineError("index '" + name + "' appears " + std::to_string(vs.size()) +
                                 " times in one monomial");
    }
    if (vs.size() == 2 && vs[0] == vs[1]) {
      throw IndexDisciplineError("index '" + name + "' repeated with equal variance");
    }
  }
}

Index* find_slot(Monomial& m, const std::string& name) {
  Index* found = nullptr;
  visit_indices(m, [&](Index& i) {
    if (found == nullptr && i.name == name) found = &i;
  });
  return found;
}

// Removes metric factors that carry a dummy index.
void contract_metrics(Term& t) {
  auto& metrics = t.mono.metrics;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t k = 0; k < metrics.size(); ++k) {
      const MetricAtom g = metrics[k];
      if (g.a.name == g.b.name) {
        t.coef = t.coef * Coefficient(Rational(4));
        metrics.erase(metrics.begin() + static_cast<std::ptrdiff_t>(k));
        changed = true;
        break;
      }
      metrics.erase(metrics.begin() + static_cast<std::ptrdiff_t>(k));
      bool contracted = false;
      for (const auto& [slot, other] : {std::pair{g.a, g.b}, std::pair{g.b, g.a}}) {
        if (Index* partner = find_slot(t.mono, slot.name)) {
          *partner = other;
          contracted = true;
          break;
        }
      }
      if (contracted) {
        changed = true;
        break;
      }
      metrics.insert(metrics.begin() + static_cast<std::ptrdiff_t>(k), g);
    }
  }
}

bool has_vanishing_trace(const Monomial& m) {
  return std::any_of(m.fields.begin(), m.fields.end(), [](const FieldAtom& a) {
    return a.traits.kind == FieldKind::AntisymmetricTensor && a.indices.size() == 2 &&
           a.indices[0].name == a.indices[1].name;
  });
}

std::string canonical_dummy(std::size_t k) {
  return std::string(kReservedIndexPrefix) + std::to_string(k + 1);
}

struct Keyed {
  Monomial mono;
  int sign = 1;
};

// Applies a dummy relabeling, hides dummy variance and sorts every
// commuting slot list.  Antisymmetric swaps flip the sign.
Keyed build_key(const Monomial& source, const std::unordered_map<std::string, std::string>& rename) {
  Keyed k{source, 1};
  visit_indices(k.mono, [&](Index& i) {
    if (auto it = rename.find(i.name); it != rename.end()) {
      i.name = it->second;
      i.variance = Variance::Upper;
    }
  });
  for (auto& a : k.mono.fields) {
    if (a.indices.size() == 2) {
      if (a.traits.kind == FieldKind::AntisymmetricTensor && a.indices[1] < a.indices[0]) {
        std::swap(a.indices[0], a.indices[1]);
        k.sign = -k.sign;
      } else if (a.traits.kind == FieldKind::SymmetricTensor && a.indices[1] < a.indices[0]) {
        std::swap(a.indices[0], a.indices[1]);
      }
    }
    std::sort(a.derivs.begin(), a.derivs.end());
  }
  for (auto& g : k.mono.metrics) {
    if (g.b < g.a) std::swap(g.a, g.b);
  }
  std::sort(k.mono.metrics.begin(), k.mono.metrics.end());
  std::sort(k.mono.fields.begin(), k.mono.fields.end());
  if (k.mono.chain) {
    if (k.mono.chain->left) std::sort(k.mono.chain->left->derivs.begin(), k.mono.chain->left->derivs.end());
    if (k.mono.chain->right) std::sort(k.mono.chain->right->derivs.begin(), k.mono.chain->right->derivs.end());
  }
  return k;
}

void assign_dummy_variance(Monomial& m, const std::set<std::string>& dummies) {
  std::set<std::string> seen;
  visit_indices(m, [&](Index& i) {
    if (!dummies.contains(i.name)) return;
    i.variance = seen.insert(i.name).second ? Variance::Upper : Variance::Lower;
  });
}

constexpr std::size_t kMaxExhaustiveDummies = 8;

void freshen(Term& t) { freshen_dummies(t); }

Monomial conj_atom_mono(Monomial m) {
  for (auto& a : m.fields) {
    if (a.traits.reality == Reality::Complex) a.conj = !a.conj;
  }
  if (m.chain) {
    ChainAtom c = *m.chain;
    if (!c.gammas.empty() && !(c.left && c.right)) {
      throw UnsupportedError("conjugation of an open spinor chain with gamma matrices");
    }
    ChainAtom out;
    if (c.right) {
      out.left = c.right;
      out.left->conj = !out.left->conj;
    }
    if (c.left) {
      out.right = c.left;
      out.right->conj = !out.right->conj;
    }
    out.gammas.assign(c.gammas.rbegin(), c.gammas.rend());
    m.chain = out;
  }
  return m;
}

std::vector<Term> expand(const Expr& e);

std::vector<Term> multiply_expansions(const std::vector<Term>& a, std::vector<Term> b) {
  for (auto& t : b) freshen(t);
  std::vector<Term> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) out.push_back(Term{x.coef * y.coef, multiply(x.mono, y.mono)});
  }
  return out;
}

FieldAtom atom_from(const node::Field& f) {
  return FieldAtom{f.symbol, f.traits, false, f.indices, f.derivatives};
}

Monomial mono_from_atom(FieldAtom a) {
  Monomial m;
  if (a.traits.kind == FieldKind::Spinor) {
    ChainAtom c;
    if (a.conj) {
      c.left = std::move(a);
    } else {
      c.right = std::move(a);
    }
    m.chain = std::move(c);
  } else {
    if (a.traits.reality == Reality::Real) a.conj = false;
    m.fields.push_back(std::move(a));
  }
  return m;
}

struct ExpandVisitor {
  std::vector<Term> operator()(const node::Sum& s) const {
    std::vector<Term> out;
    for (const auto& t : s.terms) {
      auto part = expand(t);
      std::move(part.begin(), part.end(), std::back_inserter(out));
    }
    return out;
  }
  std::vector<Term> operator()(const node::Product& p) const {
    std::vector<Term> acc{Term{Coefficient(Rational(1)), {}}};
    for (const auto& f : p.factors) acc = multiply_expansions(acc, expand(f));
    return acc;
  }
  std::vector<Term> operator()(const node::Power& p) const {
    auto base = expand(p.base);
    if (p.exponent < 0) {
      if (base.size() != 1 || !base[0].mono.fields.empty() || !base[0].mono.metrics.empty() ||
          base[0].mono.chain) {
        throw UnsupportedError("negative powers are only allowed for constants");
      }
      Term inv{base[0].coef.inverse(), base[0].mono};
      for (auto& [s, k] : inv.mono.consts) k = -k;
      base = {inv};
    }
    std::vector<Term> acc{Term{Coefficient(Rational(1)), {}}};
    for (int i = 0; i < std::abs(p.exponent); ++i) acc = multiply_expansions(acc, base);
    return acc;
  }
  std::vector<Term> operator()(const node::Number& n) const {
    return {Term{Coefficient(n.value), {}}};
  }
  std::vector<Term> operator()(const node::Constant& c) const {
    Monomial m;
    m.consts[c.symbol] = 1;
    return {Term{Coefficient(Rational(1)), m}};
  }
  std::vector<Term> operator()(const node::Field& f) const {
    return {Term{Coefficient(Rational(1)), mono_from_atom(atom_from(f))}};
  }
  std::vector<Term> operator()(const node::Metric& g) const {
    Monomial m;
    m.metrics.push_back({g.first, g.second});
    return {Term{Coefficient(Rational(1)), m}};
  }
  std::vector<Term> operator()(const node::Conjugate& c) const {
    auto inner = expand(c.inner);
    for (auto& t : inner) {
      t.coef = t.coef.conjugate();
      t.mono = conj_atom_mono(std::move(t.mono));
    }
    return inner;
  }
  std::vector<Term> operator()(const node::ImaginaryUnit&) const {
    return {Term{Coefficient::imaginary_unit(), {}}};
  }
  std::vector<Term> operator()(const node::Gamma& g) const {
    Monomial m;
    m.chain = ChainAtom{std::nullopt, {g.index}, std::nullopt};
    return {Term{Coefficient(Rational(1)), m}};
  }
  std::vector<Term> operator()(const node::SpinorSandwich& s) const {
    return (*this)(node::Product{{s.left, s.inner, s.right}});
  }
};

std::vector<Term> expand(const Expr& e) { return std::visit(ExpandVisitor{}, e.node().value); }

Expr atom_expr(const FieldAtom& a) {
  Expr f = field(a.symbol, a.traits, a.indices, a.derivs);
  return a.conj ? conj(f) : f;
}

}  // namespace

std::string fresh_index_name() {
  return std::string(kReservedIndexPrefix) + "t" + std::to_string(++g_fresh_counter);
}

void for_each_index(Monomial& m, const std::function<void(Index&)>& f) { visit_indices(m, f); }
void for_each_index(const Monomial& m, const std::function<void(const Index&)>& f) {
  visit_indices(m, f);
}

std::vector<Index> free_indices_of(const Monomial& m) {
  std::map<std::string, int> count;
  visit_indices(m, [&](const Index& i) { ++count[i.name]; });
  std::vector<Index> out;
  visit_indices(m, [&](const Index& i) {
    if (count[i.name] == 1) out.push_back(i);
  });
  return out;
}

std::vector<std::string> dummy_names_of(const Monomial& m) {
  std::map<std::string, int> count;
  std::vector<std::string> order;
  visit_indices(m, [&](const Index& i) {
    if (count[i.name]++ == 0) order.push_back(i.name);
  });
  std::vector<std::string> out;
  for (const auto& n : order) {
    if (count[n] >= 2) out.push_back(n);
  }
  return out;
}

void freshen_dummies(Term& t) {
  const auto dummies = dummy_names_of(t.mono);
  if (dummies.empty()) return;
  std::unordered_map<std::string, std::string> rename;
  for (const auto& d : dummies) rename[d] = fresh_index_name();
  visit_indices(t.mono, [&](Index& i) {
    if (auto it = rename.find(i.name); it != rename.end()) i.name = it->second;
  });
}

Monomial multiply(const Monomial& a, const Monomial& b) {
  Monomial out = a;
  for (const auto& [s, k] : b.consts) {
    if ((out.consts[s] += k) == 0) out.consts.erase(s);
  }
  out.fields.insert(out.fields.end(), b.fields.begin(), b.fields.end());
  out.metrics.insert(out.metrics.end(), b.metrics.begin(), b.metrics.end());
  if (b.chain) {
    if (!out.chain) {
      out.chain = b.chain;
    } else {
      ChainAtom& x = *out.chain;
      const ChainAtom& y = *b.chain;
      if (x.right || y.left) {
        throw UnsupportedError(
            "spinor factors must form a single chain psibar * gamma... * psi");
      }
      x.gammas.insert(x.gammas.end(), y.gammas.begin(), y.gammas.end());
      x.right = y.right;
    }
  }
  return out;
}

std::optional<Term> normalize(Term t) {
  if (t.coef.is_zero()) return std::nullopt;
  for (auto it = t.mono.consts.begin(); it != t.mono.consts.end();) {
    it = (it->second == 0) ? t.mono.consts.erase(it) : std::next(it);
  }
  for (auto& a : t.mono.fields) {
    if (a.traits.reality == Reality::Real) a.conj = false;
  }
  check_discipline(t.mono);
  contract_metrics(t);
  if (has_vanishing_trace(t.mono)) return std::nullopt;

  const auto dummies = dummy_names_of(t.mono);
  std::set<std::string> canonical_names;
  for (std::size_t k = 0; k < dummies.size(); ++k) canonical_names.insert(canonical_dummy(k));

  std::optional<Keyed> best;
  bool vanishes = false;
  if (dummies.size() <= kMaxExhaustiveDummies) {
    std::vector<std::size_t> perm(dummies.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::unordered_map<std::string, std::string> rename;
      for (std::size_t k = 0; k < dummies.size(); ++k) rename[dummies[k]] = canonical_dummy(perm[k]);
      Keyed key = build_key(t.mono, rename);
      if (!best || key.mono < best->mono) {
        best = std::move(key);
      } else if (key.mono == best->mono && key.sign != best->sign) {
        vanishes = true;
        break;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    // Too many dummies for exhaustive relabeling: number them in order of
    // first appearance after sorting.  Still deterministic, not complete.
    std::unordered_map<std::string, std::string> rename;
    for (std::size_t k = 0; k < dummies.size(); ++k) rename[dummies[k]] = canonical_dummy(k);
    best = build_key(t.mono, rename);
  }
  if (vanishes) return std::nullopt;

  Term out{t.coef, std::move(best->mono)};
  if (best->sign < 0) out.coef = -out.coef;
  assign_dummy_variance(out.mono, canonical_names);
  return out;
}

void Poly::add(Term t) {
  if (auto n = normalize(std::move(t))) add_canonical(n->mono, n->coef);
}

void Poly::add_canonical(const Monomial& m, const Coefficient& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Poly to_poly(const Expr& e) {
  Poly p;
  for (auto& t : expand(e)) p.add(std::move(t));
  check_free_index_consistency(p);
  return p;
}

void check_free_index_consistency(const Poly& p) {
  std::optional<std::vector<Index>> expected;
  for (const auto& [m, c] : p.terms()) {
    auto f = free_indices_of(m);
    std::sort(f.begin(), f.end());
    if (!expected) {
      expected = std::move(f);
    } else if (f != *expected) {
      std::string lhs, rhs;
      for (const auto& i : *expected) lhs += describe(i) + " ";
      for (const auto& i : f) rhs += describe(i) + " ";
      throw IndexDisciplineError("summands carry different free indices: {" + lhs + "} vs {" + rhs +
                                 "}");
    }
  }
}

Expr to_expr(const Poly& p) {
  std::vector<Expr> terms;
  for (const auto& [m, c] : p.terms()) {
    std::vector<Expr> shared;
    // Display order: pi leads the constants; fields go by symbol with
    // conj(f) ahead of f, then by derivative count.
    auto push_const = [&](const std::string& s, int k) {
      shared.push_back(k == 1 ? constant(s) : pow(constant(s), k));
    };
    if (auto pi = m.consts.find("pi"); pi != m.consts.end()) push_const(pi->first, pi->second);
    for (const auto& [s, k] : m.consts) {
      if (s != "pi") push_const(s, k);
    }
    std::vector<FieldAtom> fields = m.fields;
    std::stable_sort(fields.begin(), fields.end(), [](const FieldAtom& x, const FieldAtom& y) {
      return std::tuple(x.symbol, !x.conj, x.derivs.size()) < std::tuple(y.symbol, !y.conj, y.derivs.size());
    });
    for (std::size_t i = 0; i < fields.size();) {
      std::size_t j = i + 1;
      const bool bare = fields[i].indices.empty() && fields[i].derivs.empty();
      while (bare && j < fields.size() && fields[j] == fields[i]) ++j;
      Expr f = atom_expr(fields[i]);
      shared.push_back(j - i == 1 ? f : pow(f, static_cast<int>(j - i)));
      i = j;
    }
    for (const auto& g : m.metrics) shared.push_back(metric(g.a, g.b));
    if (m.chain) {
      const ChainAtom& ch = *m.chain;
      std::vector<Expr> gam;
      for (const auto& i : ch.gammas) gam.push_back(gamma_matrix(i));
      if (ch.left && ch.right) {
        Expr inner = gam.empty() ? num(1) : (gam.size() == 1 ? gam[0] : product(gam));
        shared.push_back(sandwich(atom_expr(*ch.left), inner, atom_expr(*ch.right)));
      } else {
        if (ch.left) shared.push_back(atom_expr(*ch.left));
        shared.insert(shared.end(), gam.begin(), gam.end());
        if (ch.right) shared.push_back(atom_expr(*ch.right));
      }
    }
    auto emit = [&](const Rational& value, bool imaginary) {
      if (value == 0) return;
      std::vector<Expr> factors;
      if (value != 1 || (shared.empty() && !imaginary)) factors.push_back(num(value));
      if (imaginary) factors.push_back(imag_unit());
      factors.insert(factors.end(), shared.begin(), shared.end());
      terms.push_back(factors.size() == 1 ? factors[0] : product(std::move(factors)));
    };
    emit(c.re, false);
    emit(c.im, true);
  }
  if (terms.empty()) return num(0);
  if (terms.size() == 1) return terms[0];
  return sum(std::move(terms));
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [m, c] : b.terms()) out.add_canonical(m, c);
  return out;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a.terms()) {
    Term x{ca, ma};
    freshen(x);
    for (const auto& [mb, cb] : b.terms()) {
      Term y{cb, mb};
      freshen(y);
      out.add(Term{x.coef * y.coef, multiply(x.mono, y.mono)});
    }
  }
  return out;
}

Poly scale(const Poly& p, const Coefficient& c) {
  Poly out;
  if (c.is_zero()) return out;
  for (const auto& [m, k] : p.terms()) out.add_canonical(m, k * c);
  return out;
}

Poly differentiate(const Poly& p, const Index& mu) {
  Poly out;
  for (const auto& [m, c] : p.terms()) {
    Term t{c, m};
    const auto dummies = dummy_names_of(t.mono);
    if (std::find(dummies.begin(), dummies.end(), mu.name) != dummies.end()) freshen(t);
    for (std::size_t i = 0; i < t.mono.fields.size(); ++i) {
      Term d = t;
      d.mono.fields[i].derivs.push_back(mu);
      out.add(std::move(d));
    }
    if (t.mono.chain) {
      if (t.mono.chain->left) {
        Term d = t;
        d.mono.chain->left->derivs.push_back(mu);
        out.add(std::move(d));
      }
      if (t.mono.chain->right) {
        Term d = t;
        d.mono.chain->right->derivs.push_back(mu);
        out.add(std::move(d));
      }
    }
  }
  return out;
}

Poly conjugate(const Poly& p) {
  Poly out;
  for (const auto& [m, c] : p.terms()) out.add(Term{c.conjugate(), conj_atom_mono(m)});
  return out;
}

Poly poly_of(const Monomial& m, const Coefficient& c) {
  Poly p;
  p.add(Term{c, m});
  return p;
}

Poly poly_of_atom(const FieldAtom& a) { return poly_of(mono_from_atom(a)); }

}  // namespace fieldlint::detail
