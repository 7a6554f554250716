#include "fieldlint/scenarios.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include <json.hpp>

#include "catalog_data.hpp"
#include "fieldlint/dimensions.hpp"
#include "fieldlint/error.hpp"
#include "fieldlint/symbolic.hpp"
#include "fieldlint/variational.hpp"

namespace fieldlint {

using nlohmann::json;

namespace {

constexpr std::string_view kModelSuffix = ".lagr";

std::string format_number(double x) {
  std::ostringstream out;
  out.precision(12);
  out << x;
  return out.str();
}

std::array<double, 3> triple(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }

struct Context {
  const Catalog& catalog;
  const json& expect;
  const RunOptions& options;
  Report& report;

  LagrangianModel model(const std::string& key) const { return catalog.model(expect.at(key).get<std::string>()); }

  /// Exact canonical equality against DSL text parsed in `m`.
  void golden(const std::string& name, const Expr& actual, const std::string& text, const LagrangianModel& m) const {
    const Expr expected = canonicalize(parse_expr(text, m));
    const Expr got = canonicalize(actual);
    if (got == expected) {
      report.add(name, Verdict::Pass, render(got));
    } else {
      report.add(name, Verdict::Fail, render(got) + " (expected " + render(expected) + ")");
    }
  }

  void expect_true(const std::string& name, bool ok, std::string witness) const {
    report.add(name, ok ? Verdict::Pass : Verdict::Fail, std::move(witness));
  }

  void close(const std::string& name, double actual, double expected, double tol, bool relative = false) const {
    const double scale = relative ? std::max(std::abs(expected), 1e-300) : 1.0;
    const bool ok = std::abs(actual - expected) / scale <= tol;
    report.add(name, ok ? Verdict::Pass : Verdict::Fail, format_number(actual), tol);
  }

  void info(const std::string& name, std::string witness) const { report.add(name, Verdict::Info, std::move(witness)); }
};

std::string join_degrees(const std::set<int>& degrees) {
  std::string out = "{";
  for (int d : degrees) out += (out.size() > 1 ? ", " : "") + std::to_string(d);
  return out + "}";
}

void dimension_expectations(const Context& c, const LagrangianModel& m,
                            const std::map<std::string, Dimension>& dims) {
  for (const auto& [name, exponent] : c.expect.at("dimensions").items()) {
    auto it = dims.find(name);
    const Rational want = parse_rational(exponent.get<std::string>());
    const bool ok = it != dims.end() && it->second.exponent == want;
    c.expect_true("dimension of " + name, ok, it == dims.end() ? "unknown" : to_string(it->second));
  }
  const json& mod = c.expect.at("modulus_squared");
  const DensityAudit audit = audit_probability_density(parse_expr(mod.at("expr").get<std::string>(), m), m, dims);
  const Rational want = parse_rational(mod.at("exponent").get<std::string>());
  const bool flag_expected = want != kProbabilityDensityExponent;
  c.expect_true("dimension of " + mod.at("expr").get<std::string>(),
                audit.dimension.exponent == want && audit.not_probability == flag_expected,
                to_string(audit.dimension) +
                    (audit.not_probability ? ", cannot represent probability density" : ", probability density"));
}

void kg_free_eom(const Context& c) {
  const LagrangianModel m = c.model("model");
  c.golden("euler-lagrange for phi", euler_lagrange(m, FieldRef{"phi", false}).lhs,
           c.expect.at("equation").get<std::string>(), m);
  const Check scalar = check_scalar(m.density);
  c.report.add("density is a Lorentz scalar", scalar.verdict, scalar.witness);
}

void kg_dimension_audit(const Context& c) {
  const LagrangianModel m = c.model("model");
  const auto dims = infer_dimensions(m);
  dimension_expectations(c, m, dims);
  const json& cur = c.expect.at("current");
  const auto d = dimension_of(parse_expr(cur.at("expr").get<std::string>(), m), m, dims);
  c.expect_true("dimension of current", d && d->exponent == parse_rational(cur.at("exponent").get<std::string>()),
                d ? to_string(*d) : "undetermined");
  for (const auto& name : c.catalog.model_names()) {
    const LagrangianModel other = c.catalog.model(name);
    if (other.density.is_zero()) continue;
    c.expect_true("requirements A and B for " + name, check_requirements(other).passed(),
                  std::to_string(monomials(other.density).size()) + " terms");
  }
}

void antisymmetric_null(const Context& c) {
  const LagrangianModel m = c.model("model");
  for (const auto& text : c.expect.at("null")) {
    const Expr e = canonicalize(parse_expr(text.get<std::string>(), m));
    c.expect_true("null contraction " + text.get<std::string>(), e.is_zero(), render(e));
  }
}

void real_interaction_vanishes(const Context& c) {
  const LagrangianModel m = c.model("model");
  const FieldEquation eq = euler_lagrange(m, FieldRef{"phi", false});
  std::vector<Expr> expected;
  for (const auto& t : c.expect.at("raw_terms")) expected.push_back(canonicalize(parse_expr(t.get<std::string>(), m)));
  std::vector<Expr> remaining = expected;
  std::string shown;
  bool all_found = eq.raw_terms.size() == expected.size();
  for (const auto& t : eq.raw_terms) {
    const Expr got = canonicalize(t);
    shown += (shown.empty() ? "" : ", ") + render(got);
    auto it = std::find(remaining.begin(), remaining.end(), got);
    if (it == remaining.end()) {
      all_found = false;
    } else {
      remaining.erase(it);
    }
  }
  c.expect_true("three Euler-Lagrange terms", all_found, shown);
  c.golden("before Lorenz gauge", eq.before_assumptions, c.expect.at("before_gauge").get<std::string>(), m);
  c.golden("with Lorenz gauge", eq.lhs, c.expect.at("equation").get<std::string>(), m);
  c.expect_true("Lorenz gauge recorded", eq.assumptions_used.contains(Assumption::LorenzGauge),
                std::string(to_string(Assumption::LorenzGauge)));
}

void complex_current_conserved(const Context& c) {
  const LagrangianModel m = c.model("model");
  const Expr divergence = canonicalize(parse_expr(c.expect.at("divergence").get<std::string>(), m));
  c.info("divergence off shell", render(divergence));
  const std::vector<FieldEquation> eqs{euler_lagrange(m, FieldRef{"phi", false}),
                                       euler_lagrange(m, FieldRef{"phi", true})};
  const Expr reduced = on_shell_reduce(divergence, eqs);
  c.expect_true("divergence on shell", reduced.is_zero(), render(reduced));
  const json& real = c.expect.at("real_current");
  const LagrangianModel rm = c.catalog.model(real.at("model").get<std::string>());
  const Expr current = canonicalize(parse_expr(real.at("expr").get<std::string>(), rm));
  c.expect_true("real field current vanishes identically", current.is_zero(), render(current));
}

void kg_em_eom(const Context& c) {
  const LagrangianModel m = c.model("model");
  const FieldEquation eq = euler_lagrange(m, resolve_field(m, c.expect.at("vary").get<std::string>()));
  c.golden("before Lorenz gauge", eq.before_assumptions, c.expect.at("before_gauge").get<std::string>(), m);
  c.golden("charged Klein-Gordon equation", eq.lhs, c.expect.at("equation").get<std::string>(), m);
  c.expect_true("Lorenz gauge recorded", eq.assumptions_used.contains(Assumption::LorenzGauge),
                std::string(to_string(Assumption::LorenzGauge)));
}

void electrostatic_contradiction(const Context& c) {
  const LagrangianModel m = c.model("model");
  const FieldEquation eq = euler_lagrange(m, FieldRef{"phi", true});
  const json& spot = c.expect.at("spot");
  const double U = spot.at("U").get<double>();
  const Complex r = kg_em_residual(eq, spot.at("m").get<double>(), U);
  c.close("residual at m=" + format_number(spot.at("m").get<double>()) + ", U=" + format_number(U), r.real(),
          spot.at("residual").get<double>(), c.options.tolerance);
  c.expect_true("residual is nonzero", std::abs(r) > c.options.tolerance, format_number(r.real()));
  double worst = 0;
  for (const auto& mass : c.expect.at("sweep").at("m")) {
    for (const auto& u : c.expect.at("sweep").at("U")) {
      const double uu = u.get<double>();
      const Complex res = kg_em_residual(eq, mass.get<double>(), uu);
      worst = std::max(worst, std::abs(res - Complex(uu * uu, 0)));
    }
  }
  c.report.add("residual equals U^2 over sweep", worst <= c.options.tolerance ? Verdict::Pass : Verdict::Fail,
               format_number(worst), c.options.tolerance);
}

void charge_expectation(const Context& c, const std::string& label, const LagrangianModel& m,
                        const std::set<int>& expected) {
  const ChargeAudit audit = charge_degree_audit(m);
  for (const auto& [term, degree] : audit.degrees) c.info(label + " term degree " + std::to_string(degree), term);
  c.expect_true(label + " charge degrees", audit.distinct == expected, join_degrees(audit.distinct));
  c.expect_true(label + " mixed-degree flag", audit.mixed == (expected.size() > 1),
                audit.mixed ? "mixed" : "uniform");
  c.expect_true(label + " no uncharged interaction", !audit.uncharged, audit.uncharged ? "uncharged term" : "none");
}

void pauli_weisskopf_audit(const Context& c) {
  const LagrangianModel m = c.model("model");
  charge_expectation(c, "seagull", m, c.expect.at("degrees").get<std::set<int>>());
  for (const auto& name : c.expect.at("linear_models")) {
    charge_expectation(c, name.get<std::string>(), c.catalog.model(name.get<std::string>()), {1});
  }
}

LagrangianModel with_gauge_function(LagrangianModel m, const std::string& name) {
  if (!m.find_field(name)) m.fields.push_back(FieldSymbol{name, FieldKind::Scalar, Reality::Real, std::nullopt});
  return m;
}

void kg_maxwell_gauge_fail(const Context& c) {
  const LagrangianModel m = c.model("model");
  const FieldEquation eq = derive_em_equation(m);
  c.golden("field equation with seagull term", eq.lhs, c.expect.at("equation").get<std::string>(), m);
  c.info("charge degree of field equation", std::to_string(poly_degree(eq.lhs, "e")));
  const GaugeVerdict g = gauge_check(eq, m);
  c.expect_true("seagull equation is not gauge invariant", !g.invariant, render(g.witness));
  c.golden("gauge witness", g.witness, c.expect.at("witness").get<std::string>(),
           with_gauge_function(m, g.gauge_function));

  const LagrangianModel cur = c.model("current_model");
  const FieldEquation eq_cur = derive_em_equation(cur);
  c.golden("field equation with current coupling", eq_cur.lhs, c.expect.at("current_equation").get<std::string>(), cur);
  const GaugeVerdict g_cur = gauge_check(eq_cur, cur);
  c.expect_true("current-coupled equation is gauge invariant", g_cur.invariant, render(g_cur.witness));

  const LagrangianModel vac = c.model("vacuum_model");
  const FieldEquation eq_vac = derive_em_equation(vac);
  c.golden("vacuum field equation", eq_vac.lhs, c.expect.at("vacuum_equation").get<std::string>(), vac);
  const GaugeVerdict g_vac = gauge_check(eq_vac, vac);
  c.expect_true("vacuum equation is gauge invariant", g_vac.invariant, render(g_vac.witness));
}

void dirac_contrast(const Context& c) {
  const LagrangianModel m = c.model("model");
  const auto dims = infer_dimensions(m);
  dimension_expectations(c, m, dims);
  const FieldEquation eq = euler_lagrange(m, FieldRef{"psi", true});
  const FieldEquation adj = euler_lagrange(m, FieldRef{"psi", false});
  c.golden("Dirac equation", eq.lhs, c.expect.at("equation").get<std::string>(), m);
  c.golden("adjoint Dirac equation", adj.lhs, c.expect.at("adjoint_equation").get<std::string>(), m);
  const Expr divergence = canonicalize(parse_expr(c.expect.at("divergence").get<std::string>(), m));
  c.info("current divergence off shell", render(divergence));
  const Expr reduced = on_shell_reduce(divergence, {eq, adj});
  c.expect_true("current divergence on shell", reduced.is_zero(), render(reduced));
  const LagrangianModel coupled = c.model("coupled_model");
  c.expect_true("requirements A and B for coupled Dirac density", check_requirements(coupled).passed(),
                std::to_string(monomials(coupled.density).size()) + " terms");
  charge_expectation(c, "Dirac coupling", coupled, c.expect.at("degrees").get<std::set<int>>());
}

void plane_wave_action_zero(const Context& c) {
  const LagrangianModel m = c.model("model");
  std::vector<Box> boxes;
  for (const auto& b : c.expect.at("boxes")) {
    boxes.push_back(Box{b.at("side").get<double>(), b.at("duration").get<double>(), b.at("cells").get<int>()});
  }
  const double tol = c.options.tolerance;

  const json& on = c.expect.at("on_shell");
  const double mass = on.at("m").get<double>();
  const auto p = triple(on.at("p"));
  FieldConfig cfg;
  cfg.constants["m"] = mass;
  cfg.fields["phi"] = PlaneWave{std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + mass * mass), p, 1};
  std::vector<double> rates;
  for (const auto& b : boxes) rates.push_back(action_box(m, cfg, b, "phi", tol).field_rate);
  c.close("on-shell action rate", rates.front(), 0, tol);
  double spread = 0;
  for (double r : rates) spread = std::max(spread, std::abs(r - rates.front()));
  c.close("action rate independent of box", spread, 0, tol);

  const json& off = c.expect.at("off_shell");
  FieldConfig off_cfg;
  off_cfg.constants["m"] = off.at("m").get<double>();
  off_cfg.fields["phi"] = PlaneWave{off.at("E").get<double>(), triple(off.at("p")), 1};
  c.close("off-shell action rate", action_box(m, off_cfg, boxes.front(), "phi", tol).field_rate,
          off.at("rate").get<double>(), tol, true);

  const json& cl = c.expect.at("classical");
  FieldConfig rest;
  rest.constants["m"] = cl.at("m").get<double>();
  rest.fields["phi"] = PlaneWave{cl.at("m").get<double>(), {0, 0, 0}, 1};
  const ActionComparison cmp = action_box(m, rest, boxes.front(), "phi", tol);
  c.close("classical action rate at rest", cmp.classical_rate, cl.at("rate").get<double>(), tol);
  c.expect_true("field and classical action rates differ", cmp.mismatch,
                format_number(cmp.field_rate) + " vs " + format_number(cmp.classical_rate));
}

void kg_stress_energy(const Context& c) {
  const LagrangianModel m = c.model("model");
  const Expr T = stress_energy(m, FieldRef{"phi", false});
  c.golden("canonical stress-energy tensor", T, c.expect.at("tensor").get<std::string>(), m);
  const Expr divergence = differentiate(T, down("mu"));
  const Expr reduced = on_shell_reduce(divergence, {euler_lagrange(m, FieldRef{"phi", false})});
  c.expect_true("stress-energy conserved on shell", reduced.is_zero(), render(reduced));
  for (const auto& y : c.expect.at("yukawa")) {
    const double g = y.at("g").get<double>();
    const double mass = y.at("m").get<double>();
    const double r = y.at("r").get<double>();
    const std::string where = "m=" + format_number(mass) + ", r=" + format_number(r);
    const double symbolic = yukawa_t00(T, g, mass, r);
    c.close("Yukawa T00 symbolic vs closed form at " + where, symbolic, yukawa_t00_closed_form(g, mass, r),
            c.options.tolerance, true);
    c.close("Yukawa T00 value at " + where, symbolic, y.at("t00").get<double>(), c.options.tolerance, true);
  }
}

void mass_scaling(const Context& c) {
  const LagrangianModel m = c.model("model");
  const LagrangianModel kg = c.model("stress_model");
  const Expr T = stress_energy(kg, FieldRef{"phi", false});
  const int stress = poly_degree(T, "m");
  c.expect_true("Klein-Gordon stress-energy degree in m", stress == c.expect.at("stress_degree").get<int>(),
                std::to_string(stress));
  const int yuk = poly_degree(parse_expr(c.expect.at("yukawa_t00").get<std::string>(), m), "m");
  c.expect_true("Yukawa energy density degree in m", yuk == c.expect.at("yukawa_degree").get<int>(), std::to_string(yuk));
  const int dust = poly_degree(parse_expr(c.expect.at("dust").get<std::string>(), m), "mu_m");
  c.expect_true("dust stress-energy degree in mass density", dust == c.expect.at("dust_degree").get<int>(),
                std::to_string(dust));
}

void yukawa_orthogonality(const Context& c) {
  const json& fx = c.expect.at("fixture");
  const double g = fx.at("g").get<double>();
  const double mass = fx.at("m").get<double>();
  const auto point = triple(fx.at("point"));
  const SpacetimePoint x{0, point[0], point[1], point[2]};
  const FourVector v = four_velocity(triple(fx.at("velocity")));
  const double product = orthogonality_check(yukawa_force(g, mass, fx.at("lambda").get<double>(), x), v);
  c.close("Yukawa force dot velocity", product, fx.at("product").get<double>(), fx.at("tolerance").get<double>());
  c.expect_true("Yukawa force not orthogonal to velocity", std::abs(product) > c.options.tolerance,
                format_number(product));
  bool scales = true;
  for (const auto& l : c.expect.at("lambdas")) {
    const double lambda = l.get<double>();
    const double p = orthogonality_check(yukawa_force(g, mass, lambda, x), v);
    scales = scales && std::abs(p) > c.options.tolerance && std::abs(p / lambda - product) <= 1e-9 * std::abs(product);
  }
  c.expect_true("non-orthogonality independent of lambda", scales, "f.v / lambda = " + format_number(product));

  const json& lz = c.expect.at("lorentz");
  const FourVector u = four_velocity(triple(lz.at("velocity")));
  const double lorentz = orthogonality_check(lorentz_force(electric_field_tensor(triple(lz.at("electric"))), u), u);
  c.close("Lorentz force dot velocity", lorentz, 0, c.options.tolerance);

  std::mt19937_64 rng(lz.at("seed").get<std::uint64_t>());
  std::uniform_real_distribution<double> entry(-1, 1);
  double worst = 0;
  const int trials = lz.at("random_trials").get<int>();
  for (int k = 0; k < trials; ++k) {
    Matrix4 F{};
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t b = a + 1; b < 4; ++b) {
        F[a][b] = entry(rng);
        F[b][a] = -F[a][b];
      }
    }
    // Random direction, speed below 0.9.
    std::array<double, 3> vel{entry(rng), entry(rng), entry(rng)};
    const double norm = std::sqrt(vel[0] * vel[0] + vel[1] * vel[1] + vel[2] * vel[2]);
    const double speed = 0.9 * std::abs(entry(rng));
    for (auto& comp : vel) comp *= norm > 0 ? speed / norm : 0.0;
    const FourVector w = four_velocity(vel);
    FourVector j = w;
    const double density = 1 + std::abs(entry(rng));
    for (auto& comp : j.v) comp *= density;
    worst = std::max(worst, std::abs(orthogonality_check(lorentz_force(F, j), w)));
  }
  c.close("Lorentz force orthogonal for random field strengths", worst, 0, c.options.tolerance);
}

void yukawa_mediator_hermiticity(const Context& c) {
  const LagrangianModel real = c.model("model");
  const LagrangianModel complex = c.model("complex_model");
  const std::string term = c.expect.at("term").get<std::string>();
  const Expr real_term = parse_expr(term, real);
  const Expr complex_term = parse_expr(term, complex);
  c.expect_true("Hermitian with real mediator", is_hermitian(real_term), render(canonicalize(conjugate(real_term))));
  c.expect_true("not Hermitian with complex mediator", !is_hermitian(complex_term),
                render(canonicalize(conjugate(complex_term))));
  c.expect_true("real square is Hermitian", is_hermitian(parse_expr(c.expect.at("real_square").get<std::string>(), real)),
                c.expect.at("real_square").get<std::string>());
  const auto d = dimension_of(real_term, real, infer_dimensions(real));
  c.expect_true("coupling term dimension", d && d->exponent == kDensityExponent, d ? to_string(*d) : "undetermined");
}

using Procedure = std::function<void(const Context&)>;

const std::map<std::string, Procedure>& procedures() {
  static const std::map<std::string, Procedure> table{
      {"kg_free_eom", kg_free_eom},
      {"kg_dimension_audit", kg_dimension_audit},
      {"antisymmetric_null", antisymmetric_null},
      {"real_interaction_vanishes", real_interaction_vanishes},
      {"complex_current_conserved", complex_current_conserved},
      {"kg_em_eom", kg_em_eom},
      {"electrostatic_contradiction", electrostatic_contradiction},
      {"pauli_weisskopf_audit", pauli_weisskopf_audit},
      {"kg_maxwell_gauge_fail", kg_maxwell_gauge_fail},
      {"dirac_contrast", dirac_contrast},
      {"plane_wave_action_zero", plane_wave_action_zero},
      {"kg_stress_energy", kg_stress_energy},
      {"mass_scaling", mass_scaling},
      {"yukawa_orthogonality", yukawa_orthogonality},
      {"yukawa_mediator_hermiticity", yukawa_mediator_hermiticity},
  };
  return table;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

Catalog::Catalog(std::map<std::string, std::string> models, const std::string& manifest)
    : models_(std::move(models)) {
  try {
    const json doc = json::parse(manifest);
    for (const auto& s : doc.at("scenarios")) {
      ScenarioInfo info{s.at("id").get<std::string>(), s.value("description", ""), s.at("model").get<std::string>()};
      expectations_[info.id] = s.value("expect", json::object()).dump();
      infos_.push_back(std::move(info));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed scenario manifest: ") + e.what());
  }
}

Catalog Catalog::builtin() {
  std::map<std::string, std::string> models;
  std::string manifest;
  for (const auto& [name, text] : detail::embedded_catalog()) {
    if (name == "manifest.json") {
      manifest = text;
    } else if (name.ends_with(kModelSuffix)) {
      models[name.substr(0, name.size() - kModelSuffix.size())] = text;
    }
  }
  return Catalog(std::move(models), manifest);
}

Catalog Catalog::load(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ConfigError("scenario directory not found: " + dir.string());
  const auto manifest = dir / "manifest.json";
  if (!std::filesystem::exists(manifest)) throw ConfigError("no manifest.json in " + dir.string());
  std::map<std::string, std::string> models;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == kModelSuffix) models[entry.path().stem().string()] = read_file(entry.path());
  }
  return Catalog(std::move(models), read_file(manifest));
}

std::vector<std::string> Catalog::list() const {
  std::vector<std::string> ids;
  for (const auto& s : infos_) ids.push_back(s.id);
  return ids;
}

std::vector<std::string> Catalog::model_names() const {
  std::vector<std::string> names;
  for (const auto& [name, text] : models_) names.push_back(name);
  return names;
}

const std::string& Catalog::source(const std::string& name) const {
  auto it = models_.find(name);
  if (it == models_.end()) throw ConfigError("unknown catalog model '" + name + "'");
  return it->second;
}

LagrangianModel Catalog::model(const std::string& name) const { return parse(source(name)); }

Report Catalog::run(const std::string& id, const RunOptions& options) const {
  auto it = expectations_.find(id);
  if (it == expectations_.end()) throw Error("unknown scenario '" + id + "'");
  auto proc = procedures().find(id);
  if (proc == procedures().end()) throw ConfigError("no procedure for scenario '" + id + "'");
  const auto& info = *std::find_if(infos_.begin(), infos_.end(), [&](const ScenarioInfo& s) { return s.id == id; });

  json expect = json::parse(it->second);
  expect["model"] = info.model;
  Report report;
  report.id = id;
  const auto start = std::chrono::steady_clock::now();
  try {
    proc->second(Context{*this, expect, options, report});
  } catch (const json::exception& e) {
    throw ConfigError("scenario '" + id + "' manifest entry: " + e.what());
  }
  report.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace fieldlint
