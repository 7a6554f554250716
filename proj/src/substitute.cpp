#include <algorithm>
#include <map>

#include "fieldlint/error.hpp"
#include "poly.hpp"

namespace fieldlint::detail {

Poly map_terms(const Poly& p, const std::function<void(Term&)>& f) {
  Poly out;
  for (const auto& [m, c] : p.terms()) {
    Term t{c, m};
    f(t);
    out.add(std::move(t));
  }
  return out;
}

Poly rename_index(const Poly& p, const std::string& from, const std::string& to) {
  return map_terms(p, [&](Term& t) {
    for_each_index(t.mono, [&](Index& i) {
      if (i.name == from) i.name = to;
    });
  });
}

namespace {

struct Pattern {
  enum class Kind { FieldHead, ConstHead } kind = Kind::FieldHead;
  FieldAtom atom;
  std::string constant;
  std::vector<std::string> derivative_pairs;  // contracted pairs in the pattern
  std::vector<Index> free_derivs;
};

Pattern compile_pattern(const Poly& p) {
  if (p.terms().size() != 1 || !p.terms().begin()->second.is_one()) {
    throw Error("substitution pattern must be a single field or constant");
  }
  const Monomial& m = p.terms().begin()->first;
  Pattern out;
  if (m.fields.empty() && m.metrics.empty() && !m.chain && m.consts.size() == 1 &&
      m.consts.begin()->second == 1) {
    out.kind = Pattern::Kind::ConstHead;
    out.constant = m.consts.begin()->first;
    return out;
  }
  if (m.fields.size() != 1 || !m.consts.empty() || !m.metrics.empty() || m.chain) {
    throw Error("substitution pattern must be a single field or constant");
  }
  out.atom = m.fields.front();
  std::map<std::string, int> count;
  for (const auto& d : out.atom.derivs) ++count[d.name];
  for (const auto& d : out.atom.derivs) {
    if (count[d.name] == 2) {
      if (std::find(out.derivative_pairs.begin(), out.derivative_pairs.end(), d.name) ==
          out.derivative_pairs.end()) {
        out.derivative_pairs.push_back(d.name);
      }
    } else {
      out.free_derivs.push_back(d);
    }
  }
  return out;
}

// Instantiates pattern placeholder `slot` as occurrence index `target`.
Poly bind_placeholder(const Poly& r, const Index& slot, const Index& target) {
  if (slot.variance == target.variance) return rename_index(r, slot.name, target.name);
  const std::string t = fresh_index_name();
  Poly renamed = rename_index(r, slot.name, t);
  Monomial g;
  g.metrics.push_back({target, Index{t, flipped(slot.variance)}});
  return renamed * poly_of(g);
}

std::optional<Poly> match_field(const Pattern& pat, const Poly& replacement, const FieldAtom& a) {
  if (pat.atom.symbol != a.symbol || pat.atom.conj != a.conj ||
      pat.atom.indices.size() != a.indices.size()) {
    return std::nullopt;
  }
  std::vector<Index> remaining = a.derivs;
  for (std::size_t k = 0; k < pat.derivative_pairs.size(); ++k) {
    bool found = false;
    for (std::size_t i = 0; i < remaining.size() && !found; ++i) {
      for (std::size_t j = i + 1; j < remaining.size(); ++j) {
        if (remaining[i].name == remaining[j].name) {
          remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(j));
          remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(i));
          found = true;
          break;
        }
      }
    }
    if (!found) return std::nullopt;
  }
  if (remaining.size() < pat.free_derivs.size()) return std::nullopt;

  Poly r = map_terms(replacement, [](Term& t) { freshen_dummies(t); });
  for (std::size_t k = 0; k < a.indices.size(); ++k) {
    r = bind_placeholder(r, pat.atom.indices[k], a.indices[k]);
  }
  for (const auto& slot : pat.free_derivs) {
    r = bind_placeholder(r, slot, remaining.front());
    remaining.erase(remaining.begin());
  }
  for (const auto& d : remaining) r = differentiate(r, d);
  return r;
}

Poly power_of(const Poly& p, int k) {
  Poly out = poly_of(Monomial{});
  for (int i = 0; i < k; ++i) out = out * p;
  return out;
}

}  // namespace

Poly substitute(const Poly& p, const std::vector<std::pair<Poly, Poly>>& rules) {
  std::vector<std::pair<Pattern, Poly>> compiled;
  for (const auto& [pattern, replacement] : rules) {
    Pattern pat = compile_pattern(pattern);
    if (!replacement.is_zero()) {
      auto expected = free_indices_of(pattern.terms().begin()->first);
      auto actual = free_indices_of(replacement.terms().begin()->first);
      std::sort(expected.begin(), expected.end());
      std::sort(actual.begin(), actual.end());
      if (expected != actual) {
        throw IndexDisciplineError("replacement free indices do not match its pattern");
      }
    }
    compiled.emplace_back(std::move(pat), replacement);
  }

  Poly out;
  for (const auto& [m, c] : p.terms()) {
    Term t{c, m};
    freshen_dummies(t);
    Monomial rest;
    rest.metrics = t.mono.metrics;
    rest.chain = t.mono.chain;
    std::vector<Poly> factors;
    for (const auto& [sym, k] : t.mono.consts) {
      const Poly* hit = nullptr;
      for (const auto& [pat, rep] : compiled) {
        if (pat.kind == Pattern::Kind::ConstHead && pat.constant == sym) {
          hit = &rep;
          break;
        }
      }
      if (hit == nullptr) {
        rest.consts[sym] = k;
      } else if (k < 0) {
        throw UnsupportedError("cannot substitute a constant raised to a negative power");
      } else {
        factors.push_back(power_of(*hit, k));
      }
    }
    for (const auto& a : t.mono.fields) {
      std::optional<Poly> hit;
      for (const auto& [pat, rep] : compiled) {
        if (pat.kind != Pattern::Kind::FieldHead) continue;
        if ((hit = match_field(pat, rep, a))) break;
      }
      if (hit) {
        factors.push_back(std::move(*hit));
      } else {
        rest.fields.push_back(a);
      }
    }
    // `rest` may hold unpaired halves of dummies, so it is kept raw (not
    // normalized) until the replacements are multiplied back in.
    Poly acc;
    acc.add_canonical(rest, c);
    for (const auto& f : factors) acc = acc * f;
    out = out + map_terms(acc, [](Term&) {});
  }
  return out;
}

}  // namespace fieldlint::detail
