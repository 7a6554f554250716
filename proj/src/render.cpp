#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "fieldlint/dsl.hpp"

namespace fieldlint {

namespace {

void collect_indices(const Expr& e, std::set<std::string>& user, std::set<std::string>& reserved) {
  auto note = [&](const Index& i) {
    (is_reserved_index(i.name) ? reserved : user).insert(i.name);
  };
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::Sum>) {
          for (const auto& t : n.terms) collect_indices(t, user, reserved);
        } else if constexpr (std::is_same_v<T, node::Product>) {
          for (const auto& f : n.factors) collect_indices(f, user, reserved);
        } else if constexpr (std::is_same_v<T, node::Power>) {
          collect_indices(n.base, user, reserved);
        } else if constexpr (std::is_same_v<T, node::Field>) {
          for (const auto& i : n.indices) note(i);
          for (const auto& i : n.derivatives) note(i);
        } else if constexpr (std::is_same_v<T, node::Metric>) {
          note(n.first);
          note(n.second);
        } else if constexpr (std::is_same_v<T, node::Conjugate>) {
          collect_indices(n.inner, user, reserved);
        } else if constexpr (std::is_same_v<T, node::Gamma>) {
          note(n.index);
        } else if constexpr (std::is_same_v<T, node::SpinorSandwich>) {
          collect_indices(n.left, user, reserved);
          collect_indices(n.inner, user, reserved);
          collect_indices(n.right, user, reserved);
        }
      },
      e.node().value);
}

class Printer {
 public:
  explicit Printer(const Expr& root) {
    std::set<std::string> user;
    std::set<std::string> reserved;
    collect_indices(root, user, reserved);
    static const std::vector<std::string> pool{"a", "b", "c", "e", "f", "h", "j", "k", "l",
                                               "n", "p", "q", "r", "s", "t", "u", "v", "w"};
    std::size_t next = 0;
    std::size_t round = 0;
    for (const auto& r : reserved) {
      std::string candidate;
      do {
        candidate = pool[next] + (round == 0 ? "" : std::to_string(round));
        if (++next == pool.size()) {
          next = 0;
          ++round;
        }
      } while (user.contains(candidate));
      ascii_[r] = candidate;
    }
  }

  std::string print(const Expr& e) const {
    return std::visit([&](const auto& n) { return print_node(n); }, e.node().value);
  }

 private:
  std::map<std::string, std::string> ascii_;

  std::string name(const Index& i) const {
    auto it = ascii_.find(i.name);
    return it == ascii_.end() ? i.name : it->second;
  }

  // Groups consecutive indices of equal variance: ^{mu nu}_{rho}.
  std::string groups(const std::vector<Index>& idx) const {
    std::string out;
    for (std::size_t k = 0; k < idx.size();) {
      const Variance v = idx[k].variance;
      out += (v == Variance::Upper ? "^{" : "_{");
      std::size_t j = k;
      for (; j < idx.size() && idx[j].variance == v; ++j) out += (j == k ? "" : " ") + name(idx[j]);
      out += "}";
      k = j;
    }
    return out;
  }

  std::string wrap_derivatives(std::string core, const std::vector<Index>& derivs) const {
    std::vector<std::vector<Index>> chunks;
    for (const auto& d : derivs) {
      if (chunks.empty() || chunks.back().back().variance != d.variance) chunks.emplace_back();
      chunks.back().push_back(d);
    }
    for (auto it = chunks.rbegin(); it != chunks.rend(); ++it) {
      core = "d" + groups(*it) + "(" + core + ")";
    }
    return core;
  }

  std::string field_text(const node::Field& f, bool conjugated) const {
    std::string core = f.symbol + groups(f.indices);
    if (conjugated) core = f.traits.kind == FieldKind::Spinor ? f.symbol + "bar" : "conj(" + core + ")";
    return wrap_derivatives(core, f.derivatives);
  }

  static bool is_negative_number(const Expr& e) {
    const auto* n = e.as<node::Number>();
    return n != nullptr && n->value < 0;
  }

  static bool is_fraction(const Expr& e) {
    const auto* n = e.as<node::Number>();
    return n != nullptr && denominator(n->value) != 1;
  }

  std::string factor_text(const Expr& f, bool leading) const {
    if (f.as<node::Sum>() != nullptr) return "(" + print(f) + ")";
    if (!leading && (is_negative_number(f) || f.as<node::Product>() != nullptr)) {
      return "(" + print(f) + ")";
    }
    return print(f);
  }

  // The term with its leading i removed, or nullopt when it has none.
  static std::optional<Expr> drop_imaginary_unit(const Expr& t) {
    if (t.as<node::ImaginaryUnit>() != nullptr) return num(1);
    const auto* p = t.as<node::Product>();
    if (p == nullptr) return std::nullopt;
    std::vector<Expr> rest;
    bool found = false;
    for (const auto& f : p->factors) {
      if (!found && f.as<node::ImaginaryUnit>() != nullptr) {
        found = true;
      } else {
        rest.push_back(f);
      }
    }
    if (!found) return std::nullopt;
    return rest.size() == 1 ? rest[0] : product(std::move(rest));
  }

  std::string print_node(const node::Sum& s) const {
    if (s.terms.empty()) return "0";
    // i*(a - b) reads better than i*a - i*b.
    if (s.terms.size() > 1) {
      std::vector<Expr> inner;
      for (const auto& t : s.terms) {
        auto r = drop_imaginary_unit(t);
        if (!r) break;
        inner.push_back(*r);
      }
      if (inner.size() == s.terms.size()) return "i*(" + print_terms(inner) + ")";
    }
    return print_terms(s.terms);
  }

  // A positive term leads when there is one: "a - b" rather than "-b + a".
  std::string print_terms(const std::vector<Expr>& terms) const {
    std::vector<std::string> texts;
    for (const auto& t : terms) texts.push_back(print(t));
    auto lead = std::find_if(texts.begin(), texts.end(), [](const std::string& t) { return t.front() != '-'; });
    if (lead != texts.end()) std::rotate(texts.begin(), lead, lead + 1);
    std::string out;
    for (std::size_t k = 0; k < texts.size(); ++k) {
      const std::string& t = texts[k];
      if (k == 0) {
        out = t;
      } else if (t.front() == '-') {
        out += " - " + t.substr(1);
      } else {
        out += " + " + t;
      }
    }
    return out;
  }

  std::string print_node(const node::Product& p) const {
    if (p.factors.empty()) return "1";
    std::string out;
    std::size_t start = 0;
    const auto* lead = p.factors[0].as<node::Number>();
    if (lead != nullptr && lead->value == -1 && p.factors.size() > 1) {
      out = "-";
      start = 1;
    }
    for (std::size_t k = start; k < p.factors.size(); ++k) {
      if (k > start) out += "*";
      out += factor_text(p.factors[k], k == 0);
    }
    return out;
  }

  std::string print_node(const node::Power& p) const {
    std::string base = print(p.base);
    const bool simple = p.base.as<node::Constant>() != nullptr || p.base.as<node::Field>() != nullptr ||
                        p.base.as<node::ImaginaryUnit>() != nullptr ||
                        (p.base.as<node::Number>() != nullptr && !is_negative_number(p.base) &&
                         !is_fraction(p.base)) ||
                        (p.base.as<node::Conjugate>() != nullptr && base.back() == ')');
    if (!simple) base = "(" + base + ")";
    return base + "^" + std::to_string(p.exponent);
  }

  std::string print_node(const node::Number& n) const { return to_string(n.value); }
  std::string print_node(const node::Constant& c) const { return c.symbol; }
  std::string print_node(const node::Field& f) const { return field_text(f, false); }
  std::string print_node(const node::Metric& g) const { return "g" + groups({g.first, g.second}); }

  std::string print_node(const node::Conjugate& c) const {
    if (const auto* f = c.inner.as<node::Field>()) return field_text(*f, true);
    return "conj(" + print(c.inner) + ")";
  }

  std::string print_node(const node::ImaginaryUnit&) const { return "i"; }
  std::string print_node(const node::Gamma& g) const { return "gamma" + groups({g.index}); }

  std::string print_node(const node::SpinorSandwich& s) const {
    std::vector<Expr> factors{s.left};
    if (const auto* p = s.inner.as<node::Product>()) {
      factors.insert(factors.end(), p->factors.begin(), p->factors.end());
    } else if (!(s.inner.as<node::Number>() && s.inner.as<node::Number>()->value == 1)) {
      factors.push_back(s.inner);
    }
    factors.push_back(s.right);
    std::string out;
    for (std::size_t k = 0; k < factors.size(); ++k) {
      if (k > 0) out += "*";
      out += factor_text(factors[k], k == 0);
    }
    return out;
  }
};

}  // namespace

std::string render(const Expr& e) { return Printer(e).print(e); }

}  // namespace fieldlint
