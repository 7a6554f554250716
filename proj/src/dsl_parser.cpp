#include <cctype>
#include <functional>
#include <stdexcept>

#include "fieldlint/dsl.hpp"
#include "fieldlint/error.hpp"
#include "fieldlint/symbolic.hpp"
#include "poly.hpp"

namespace fieldlint {

std::string_view to_string(Assumption a) {
  switch (a) {
    case Assumption::LorenzGauge:
      return "lorenz_gauge";
    case Assumption::MassShell:
      return "mass_shell";
    case Assumption::OnShell:
      return "on_shell";
  }
  return "?";
}

const FieldSymbol* LagrangianModel::find_field(std::string_view name) const {
  for (const auto& f : fields) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

const ConstantSymbol* LagrangianModel::find_constant(std::string_view name) const {
  for (const auto& c : constants) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const Definition* LagrangianModel::find_definition(std::string_view name) const {
  for (const auto& d : definitions) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

namespace {

enum class Tok { Ident, Number, Op, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (is_ident_start(c)) {
      std::size_t j = i + 1;
      while (j < src.size() &&
             (is_ident_char(src[j]) ||
              (src[j] == '_' && j + 1 < src.size() && is_ident_char(src[j + 1])))) {
        ++j;
      }
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (is_digit(c)) {
      std::size_t j = i;
      while (j < src.size() && is_digit(src[j])) ++j;
      if (j + 1 < src.size() && src[j] == '/' && is_digit(src[j + 1])) {
        ++j;
        while (j < src.size() && is_digit(src[j])) ++j;
      }
      t.kind = Tok::Number;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (c == ':' && i + 1 < src.size() && src[i + 1] == '=') {
      t.kind = Tok::Op;
      t.text = ":=";
      advance(2);
    } else if (std::string_view("+-*/^_(){}:=").find(c) != std::string_view::npos) {
      t.kind = Tok::Op;
      t.text = std::string(1, c);
      advance(1);
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words{"field", "const", "assume", "dim", "d",    "i",
                                           "conj",  "gamma", "L",      "real", "complex"};
  return words;
}

class Parser {
 public:
  Parser(std::string_view src, LagrangianModel& model) : toks_(lex(src)), model_(model) {}

  void parse_model() {
    while (peek().kind != Tok::End) parse_statement();
    std::vector<Expr> pieces = model_.pieces;
    model_.density = pieces.empty() ? num(0) : canonicalize(sum(pieces));
  }

  Expr parse_standalone() {
    try {
      Expr e = parse_expr();
      if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
      return canonicalize(e);
    } catch (const IndexDisciplineError& e) {
      throw ParseError(std::string("index discipline: ") + e.what(), 1, 1);
    }
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  LagrangianModel& model_;

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool is_op(const std::string& s, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Op && peek(ahead).text == s;
  }
  bool is_ident(const std::string& s, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Ident && peek(ahead).text == s;
  }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(peek(), msg); }
  [[noreturn]] static void fail_at(const Token& t, const std::string& msg) {
    throw ParseError(msg, t.line, t.column);
  }

  void expect_op(const std::string& s) {
    if (!is_op(s)) fail("expected '" + s + "'" + (peek().kind == Tok::End ? " at end of input" : ", found '" + peek().text + "'"));
    next();
  }

  std::string expect_ident(const std::string& what) {
    if (peek().kind != Tok::Ident) fail("expected " + what);
    return next().text;
  }

  Rational parse_signed_rational() {
    bool negative = false;
    if (is_op("-")) {
      next();
      negative = true;
    } else if (is_op("+")) {
      next();
    }
    if (peek().kind != Tok::Number) fail("expected a rational number");
    Rational r = parse_rational(next().text);
    return negative ? Rational(-r) : r;
  }

  void check_new_name(const Token& t) {
    if (reserved_words().contains(t.text) || t.text == "pi") fail_at(t, "'" + t.text + "' is reserved");
    if (model_.find_field(t.text) || model_.find_constant(t.text) || model_.find_definition(t.text)) {
      fail_at(t, "symbol '" + t.text + "' declared twice");
    }
  }

  void parse_statement() {
    const Token start = peek();
    try {
      parse_statement_body();
    } catch (const IndexDisciplineError& e) {
      throw ParseError(std::string("index discipline: ") + e.what(), start.line, start.column);
    }
  }

  void parse_statement_body() {
    const Token& t = peek();
    if (t.kind != Tok::Ident) fail("expected a statement");
    if (t.text == "field") return parse_field_decl();
    if (t.text == "const") return parse_const_decl();
    if (t.text == "assume") return parse_assume();
    if (t.text == "L" && is_op("=", 1)) {
      next();
      next();
      model_.pieces.push_back(canonicalize(parse_expr()));
      return;
    }
    if (is_op("_", 1) || is_op("^", 1)) return parse_definition();
    fail("expected a statement, found '" + t.text + "'");
  }

  void parse_field_decl() {
    next();
    const Token name = peek();
    expect_ident("field name");
    check_new_name(name);
    expect_op(":");
    FieldSymbol f;
    f.name = name.text;
    const Token reality = peek();
    const std::string r = expect_ident("'real' or 'complex'");
    if (r == "real") {
      f.reality = Reality::Real;
    } else if (r == "complex") {
      f.reality = Reality::Complex;
    } else {
      fail_at(reality, "expected 'real' or 'complex'");
    }
    const Token kind = peek();
    const std::string k = expect_ident("field kind");
    if (k == "scalar") {
      f.kind = FieldKind::Scalar;
    } else if (k == "vector") {
      f.kind = FieldKind::Vector;
    } else if (k == "spinor") {
      f.kind = FieldKind::Spinor;
    } else if (k == "symmetric") {
      f.kind = FieldKind::SymmetricTensor;
    } else if (k == "antisymmetric") {
      f.kind = FieldKind::AntisymmetricTensor;
    } else {
      fail_at(kind, "unknown field kind '" + k + "'");
    }
    if (f.kind == FieldKind::Spinor && f.reality != Reality::Complex) {
      fail_at(reality, "spinor fields must be complex");
    }
    if (is_ident("dim")) {
      next();
      f.dimension = parse_signed_rational();
    }
    if (f.kind == FieldKind::Spinor && model_.find_field(f.name + "bar")) {
      fail_at(name, "symbol '" + f.name + "bar' declared twice");
    }
    model_.fields.push_back(std::move(f));
  }

  void parse_const_decl() {
    next();
    const Token name = peek();
    expect_ident("constant name");
    check_new_name(name);
    ConstantSymbol c{name.text, std::nullopt};
    if (is_ident("dim")) {
      next();
      c.dimension = parse_signed_rational();
    }
    model_.constants.push_back(std::move(c));
  }

  void parse_assume() {
    next();
    const Token t = peek();
    const std::string a = expect_ident("assumption");
    if (a == "lorenz_gauge") {
      model_.assumptions.insert(Assumption::LorenzGauge);
    } else if (a == "mass_shell") {
      model_.assumptions.insert(Assumption::MassShell);
    } else if (a == "on_shell") {
      model_.assumptions.insert(Assumption::OnShell);
    } else {
      fail_at(t, "unknown assumption '" + a + "'");
    }
  }

  void parse_definition() {
    const Token name = next();
    check_new_name(name);
    auto placeholders = parse_index_groups();
    expect_op(":=");
    Expr body = canonicalize(parse_expr());
    auto expected = placeholders;
    auto actual = free_indices(body);
    std::sort(expected.begin(), expected.end());
    std::sort(actual.begin(), actual.end());
    if (!body.is_zero() && expected != actual) {
      fail_at(name, "definition body free indices do not match '" + name.text + "'");
    }
    model_.definitions.push_back(Definition{name.text, std::move(placeholders), std::move(body)});
  }

  std::vector<Index> parse_index_groups() {
    std::vector<Index> out;
    while ((is_op("_") || is_op("^")) && is_op("{", 1)) {
      const Variance v = next().text == "_" ? Variance::Lower : Variance::Upper;
      next();
      if (peek().kind != Tok::Ident) fail("expected an index name");
      while (peek().kind == Tok::Ident) out.push_back(Index{next().text, v});
      expect_op("}");
    }
    return out;
  }

  Expr parse_expr() {
    std::vector<Expr> terms;
    bool negate = false;
    if (is_op("-")) {
      next();
      negate = true;
    }
    Expr first = parse_term();
    terms.push_back(negate ? -first : first);
    while (is_op("+") || is_op("-")) {
      const bool minus = next().text == "-";
      Expr t = parse_term();
      terms.push_back(minus ? -t : t);
    }
    return terms.size() == 1 ? terms[0] : sum(std::move(terms));
  }

  Expr parse_term() {
    std::vector<Expr> factors{parse_factor()};
    while (is_op("*") || is_op("/")) {
      const Token op = next();
      Expr f = parse_factor();
      factors.push_back(op.text == "/" ? reciprocal(f, op) : f);
    }
    return factors.size() == 1 ? factors[0] : product(std::move(factors));
  }

  // Only numbers and constants may be divided by.
  Expr reciprocal(const Expr& divisor, const Token& at) {
    const Expr c = canonicalize(divisor);
    std::vector<Expr> factors;
    if (const auto* p = c.as<node::Product>()) {
      factors = p->factors;
    } else {
      factors.push_back(c);
    }
    std::vector<Expr> inverted;
    for (const auto& f : factors) {
      if (const auto* n = f.as<node::Number>()) {
        if (n->value == 0) fail_at(at, "division by zero");
        inverted.push_back(num(Rational(1 / n->value)));
      } else if (f.as<node::Constant>() != nullptr) {
        inverted.push_back(pow(f, -1));
      } else if (const auto* w = f.as<node::Power>(); w != nullptr && w->base.as<node::Constant>() != nullptr) {
        inverted.push_back(pow(w->base, -w->exponent));
      } else {
        fail_at(at, "only numbers and constants can be divided by");
      }
    }
    return inverted.size() == 1 ? inverted[0] : product(std::move(inverted));
  }

  Expr parse_factor() {
    Expr base = parse_atom();
    while (is_op("^") && (peek(1).kind == Tok::Number || is_op("-", 1))) {
      next();
      bool negative = false;
      if (is_op("-")) {
        next();
        negative = true;
      }
      const Token n = peek();
      if (n.kind != Tok::Number || n.text.find('/') != std::string::npos) fail("expected an integer exponent");
      next();
      int k = 0;
      try {
        k = std::stoi(n.text);
      } catch (const std::exception&) {
        fail_at(n, "exponent out of range");
      }
      base = pow(base, negative ? -k : k);
    }
    return base;
  }

  Expr parse_parenthesized() {
    expect_op("(");
    Expr e = parse_expr();
    expect_op(")");
    return e;
  }

  Expr parse_atom() {
    const Token t = peek();
    if (t.kind == Tok::Number) {
      next();
      return num(parse_rational(t.text));
    }
    if (is_op("(")) return parse_parenthesized();
    if (t.kind != Tok::Ident) {
      fail(t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
    }
    next();
    if (t.text == "i") return imag_unit();
    if (t.text == "d" && (is_op("_") || is_op("^"))) {
      auto idx = parse_index_groups();
      Expr inner = parse_parenthesized();
      for (auto it = idx.rbegin(); it != idx.rend(); ++it) inner = differentiate(inner, *it);
      return inner;
    }
    if (t.text == "conj" && is_op("(")) {
      Expr inner = canonicalize(parse_parenthesized());
      if (const auto* f = inner.as<node::Field>(); f && f->traits.reality == Reality::Real) {
        fail_at(t, "conj of real field '" + f->symbol + "'");
      }
      return conjugate(inner);
    }
    if (t.text == "gamma") {
      auto idx = parse_index_groups();
      if (idx.size() != 1) fail_at(t, "gamma takes exactly one index");
      return gamma_matrix(idx[0]);
    }
    if (t.text == "g" && (is_op("_") || is_op("^"))) {
      auto idx = parse_index_groups();
      if (idx.size() != 2) fail_at(t, "the metric takes exactly two indices");
      return metric(idx[0], idx[1]);
    }
    if (reserved_words().contains(t.text)) fail_at(t, "unexpected keyword '" + t.text + "'");
    auto idx = parse_index_groups();
    if (const Definition* def = model_.find_definition(t.text)) return instantiate(t, *def, idx);
    if (const FieldSymbol* f = model_.find_field(t.text)) {
      if (static_cast<int>(idx.size()) != index_arity(f->kind)) {
        fail_at(t, "field '" + f->name + "' is " + std::string(to_string(f->kind)) + " and takes " +
                       std::to_string(index_arity(f->kind)) + " index(es), got " +
                       std::to_string(idx.size()));
      }
      return field(f->name, f->traits(), idx);
    }
    if (t.text.size() > 3 && t.text.ends_with("bar")) {
      const FieldSymbol* f = model_.find_field(t.text.substr(0, t.text.size() - 3));
      if (f && f->kind == FieldKind::Spinor) {
        if (!idx.empty()) fail_at(t, "spinor adjoint takes no indices");
        return conj(field(f->name, f->traits()));
      }
    }
    if (t.text == "pi" || model_.find_constant(t.text)) {
      if (!idx.empty()) fail_at(t, "constant '" + t.text + "' takes no indices");
      return constant(t.text);
    }
    throw UndeclaredSymbolError("undeclared symbol '" + t.text + "'", t.line, t.column);
  }

  Expr instantiate(const Token& at, const Definition& def, const std::vector<Index>& usage) {
    if (usage.size() != def.indices.size()) {
      fail_at(at, "'" + def.name + "' takes " + std::to_string(def.indices.size()) + " index(es)");
    }
    detail::Poly body = detail::to_poly(def.body);
    std::vector<std::string> temp;
    for (const auto& p : def.indices) {
      temp.push_back(detail::fresh_index_name());
      body = detail::rename_index(body, p.name, temp.back());
    }
    for (std::size_t k = 0; k < usage.size(); ++k) {
      const Index& p = def.indices[k];
      if (p.variance == usage[k].variance) {
        body = detail::rename_index(body, temp[k], usage[k].name);
      } else {
        detail::Monomial g;
        g.metrics.push_back({usage[k], Index{temp[k], flipped(p.variance)}});
        body = body * detail::poly_of(g);
      }
    }
    return detail::to_expr(body);
  }
};

}  // namespace

LagrangianModel parse(std::string_view text) {
  LagrangianModel model;
  model.constants.push_back(ConstantSymbol{"pi", Rational(0)});
  Parser(text, model).parse_model();
  return model;
}

Expr parse_expr(std::string_view text, const LagrangianModel& model) {
  LagrangianModel scratch = model;
  if (!scratch.find_constant("pi")) scratch.constants.push_back(ConstantSymbol{"pi", Rational(0)});
  return Parser(text, scratch).parse_standalone();
}

}  // namespace fieldlint
