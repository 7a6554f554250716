#include "fieldlint/dimensions.hpp"

#include <algorithm>
#include <set>

#include "fieldlint/error.hpp"
#include "fieldlint/symbolic.hpp"
#include "poly.hpp"

namespace fieldlint {

std::string to_string(const Dimension& d) { return "[L^" + to_string(d.exponent) + "]"; }

namespace {

// exponent = constant + sum(coeff[field] * dim(field))
struct LinearForm {
  Rational constant{0};
  std::map<std::string, Rational> coeff;
  bool has_free_parameter = false;
};

LinearForm linear_form(const detail::Monomial& m, const LagrangianModel& model) {
  LinearForm out;
  for (const auto& [sym, k] : m.consts) {
    const ConstantSymbol* c = model.find_constant(sym);
    if (c == nullptr || !c->dimension) {
      out.has_free_parameter = true;
      continue;
    }
    out.constant += Rational(k) * *c->dimension;
  }
  auto add_atom = [&](const detail::FieldAtom& a) {
    out.coeff[a.symbol] += 1;
    out.constant -= Rational(static_cast<long>(a.derivs.size()));
  };
  for (const auto& a : m.fields) add_atom(a);
  if (m.chain) {
    if (m.chain->left) add_atom(*m.chain->left);
    if (m.chain->right) add_atom(*m.chain->right);
  }
  return out;
}

std::optional<Rational> evaluate(const LinearForm& f, const std::map<std::string, Dimension>& dims) {
  if (f.has_free_parameter) return std::nullopt;
  Rational total = f.constant;
  for (const auto& [name, c] : f.coeff) {
    auto it = dims.find(name);
    if (it == dims.end()) throw DimensionError("no dimension known for field '" + name + "'");
    total += c * it->second.exponent;
  }
  return total;
}

struct Row {
  std::vector<Rational> a;
  Rational b;
  std::set<std::string> provenance;
};

std::string join(const std::set<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : "; ") + s;
  return out;
}

}  // namespace

std::map<std::string, Dimension> infer_dimensions(const LagrangianModel& model) {
  std::map<std::string, Dimension> known;
  std::vector<std::string> unknowns;
  for (const auto& f : model.fields) {
    if (f.dimension) {
      known[f.name] = Dimension{*f.dimension};
    } else {
      unknowns.push_back(f.name);
    }
  }
  auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    auto it = std::find(unknowns.begin(), unknowns.end(), name);
    if (it == unknowns.end()) return std::nullopt;
    return static_cast<std::size_t>(it - unknowns.begin());
  };

  // Incremental elimination; each basis row remembers which terms built it.
  std::vector<Row> basis;
  std::vector<std::size_t> pivots;
  for (const auto& [mono, coef] : detail::to_poly(model.density).terms()) {
    const LinearForm form = linear_form(mono, model);
    if (form.has_free_parameter) continue;
    Row row{std::vector<Rational>(unknowns.size(), Rational(0)), kDensityExponent - form.constant, {}};
    detail::Poly single;
    single.add_canonical(mono, coef);
    row.provenance.insert(render(detail::to_expr(single)));
    for (const auto& [name, c] : form.coeff) {
      if (auto col = column(name)) {
        row.a[*col] += c;
      } else {
        row.b -= c * known.at(name).exponent;
      }
    }
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const Rational factor = row.a[pivots[k]];
      if (factor == 0) continue;
      for (std::size_t j = 0; j < unknowns.size(); ++j) row.a[j] -= factor * basis[k].a[j];
      row.b -= factor * basis[k].b;
      row.provenance.insert(basis[k].provenance.begin(), basis[k].provenance.end());
    }
    auto lead = std::find_if(row.a.begin(), row.a.end(), [](const Rational& x) { return x != 0; });
    if (lead == row.a.end()) {
      if (row.b != 0) throw DimensionError("dimension conflict between terms: " + join(row.provenance));
      continue;
    }
    const std::size_t p = static_cast<std::size_t>(lead - row.a.begin());
    const Rational inv = 1 / row.a[p];
    for (auto& x : row.a) x *= inv;
    row.b *= inv;
    for (auto& other : basis) {
      const Rational factor = other.a[p];
      if (factor == 0) continue;
      for (std::size_t j = 0; j < unknowns.size(); ++j) other.a[j] -= factor * row.a[j];
      other.b -= factor * row.b;
    }
    basis.push_back(std::move(row));
    pivots.push_back(p);
  }

  std::vector<std::string> unconstrained;
  for (std::size_t j = 0; j < unknowns.size(); ++j) {
    auto it = std::find(pivots.begin(), pivots.end(), j);
    if (it == pivots.end()) {
      unconstrained.push_back(unknowns[j]);
      continue;
    }
    const Row& row = basis[static_cast<std::size_t>(it - pivots.begin())];
    for (std::size_t c = 0; c < unknowns.size(); ++c) {
      if (c != j && row.a[c] != 0) {
        unconstrained.push_back(unknowns[j]);
        break;
      }
    }
  }
  if (!unconstrained.empty()) {
    std::string names;
    for (const auto& n : unconstrained) names += (names.empty() ? "" : ", ") + n;
    throw DimensionError("underdetermined dimensions for: " + names);
  }
  for (std::size_t k = 0; k < basis.size(); ++k) known[unknowns[pivots[k]]] = Dimension{basis[k].b};
  return known;
}

std::optional<Dimension> dimension_of(const Expr& e, const LagrangianModel& model,
                                      const std::map<std::string, Dimension>& fields) {
  std::optional<Rational> result;
  std::string first;
  bool free_parameter = false;
  for (const auto& [mono, coef] : detail::to_poly(e).terms()) {
    auto value = evaluate(linear_form(mono, model), fields);
    if (!value) {
      free_parameter = true;
      continue;
    }
    detail::Poly single;
    single.add_canonical(mono, coef);
    const std::string text = render(detail::to_expr(single));
    if (!result) {
      result = *value;
      first = text;
    } else if (*result != *value) {
      throw DimensionError("summands of different dimension: " + first + " is [L^" + to_string(*result) +
                           "], " + text + " is [L^" + to_string(*value) + "]");
    }
  }
  if (free_parameter || !result) {
    if (!result && !free_parameter) return Dimension{Rational(0)};
    return std::nullopt;
  }
  return Dimension{*result};
}

Check check_scalar(const Expr& e) {
  const auto free = free_indices(e);
  if (free.empty()) return Check{"lorentz scalar", Verdict::Pass, "no free indices", std::nullopt};
  std::string names;
  for (const auto& i : free) {
    names += (names.empty() ? "" : " ") + std::string(i.variance == Variance::Upper ? "^" : "_") + i.name;
  }
  return Check{"lorentz scalar", Verdict::Fail, "free indices: " + names, std::nullopt};
}

std::optional<Expr> modulus_squared(const FieldSymbol& f) {
  const Expr x = field(f.name, f.traits());
  switch (f.kind) {
    case FieldKind::Scalar:
      return canonicalize(f.reality == Reality::Real ? x * x : conj(x) * x);
    case FieldKind::Spinor:
      return canonicalize(conj(x) * x);
    default:
      return std::nullopt;
  }
}

DensityAudit audit_probability_density(const Expr& density, const LagrangianModel& model,
                                       const std::map<std::string, Dimension>& fields) {
  auto dim = dimension_of(density, model, fields);
  if (!dim) throw DimensionError("density contains a parameter without a declared dimension");
  return DensityAudit{*dim, dim->exponent != kProbabilityDensityExponent};
}

Report check_requirements(const LagrangianModel& model) {
  Report report;
  report.id = "check";
  std::map<std::string, Dimension> dims;
  try {
    dims = infer_dimensions(model);
  } catch (const DimensionError& e) {
    report.add("field dimensions", Verdict::Fail, e.what());
    return report;
  }
  for (const auto& [name, d] : dims) report.add("dimension of " + name, Verdict::Info, to_string(d));

  for (const auto& term : monomials(model.density)) {
    const std::string text = render(term);
    Check scalar = check_scalar(term);
    scalar.name = "A Lorentz scalar: " + text;
    report.checks.push_back(std::move(scalar));
    const auto dim = dimension_of(term, model, dims);
    if (!dim) {
      report.add("B dimension: " + text, Verdict::Info, "contains a free parameter; excluded");
    } else {
      report.add("B dimension: " + text, dim->exponent == kDensityExponent ? Verdict::Pass : Verdict::Fail,
                 to_string(*dim));
    }
  }
  for (const auto& f : model.fields) {
    auto density = modulus_squared(f);
    if (!density) continue;
    const auto audit = audit_probability_density(*density, model, dims);
    report.add("probability density " + render(*density), Verdict::Info,
               to_string(audit.dimension) +
                   (audit.not_probability ? ": cannot represent probability density"
                                          : ": admissible as probability density"));
  }
  return report;
}

}  // namespace fieldlint
