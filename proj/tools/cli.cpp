#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <future>
#include <optional>
#include <sstream>

#include "fieldlint/dimensions.hpp"
#include "fieldlint/error.hpp"
#include "fieldlint/scenarios.hpp"
#include "fieldlint/symbolic.hpp"
#include "fieldlint/variational.hpp"

namespace fieldlint {

namespace {

struct Options {
  std::string format = "text";
  double tolerance = kEqualityTolerance;
  std::string scenario_dir;
  std::string file;
  std::string vary;
  std::string field;
  std::string scenario_id;
  bool all = false;
  bool list = false;
};

LagrangianModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return parse(s.str());
}

std::string equation_text(const Expr& lhs) { return render(lhs) + " = 0"; }

void add_assumptions(Report& r, const FieldEquation& eq) {
  for (auto a : eq.assumptions_used) r.add("assumption applied", Verdict::Info, std::string(to_string(a)));
}

Report cmd_check(const Options& o) {
  const LagrangianModel m = load_model(o.file);
  Report r = check_requirements(m);
  r.id = "check";
  const bool has_potential =
      std::any_of(m.fields.begin(), m.fields.end(), [](const FieldSymbol& f) { return f.kind == FieldKind::Vector; });
  if (has_potential) {
    const ChargeAudit audit = charge_degree_audit(m);
    for (const auto& [term, degree] : audit.degrees) {
      r.add("charge degree " + std::to_string(degree), Verdict::Info, term);
    }
    if (audit.mixed) r.add("interaction mixes charge degrees", Verdict::Info, "mixed");
    if (audit.uncharged) r.add("interaction term without charge", Verdict::Info, "uncharged");
  }
  return r;
}

Report cmd_eom(const Options& o) {
  const LagrangianModel m = load_model(o.file);
  const FieldRef f = resolve_field(m, o.vary);
  const FieldEquation eq = euler_lagrange(m, f);
  Report r;
  r.id = "eom";
  for (const auto& t : eq.raw_terms) r.add("Euler-Lagrange term", Verdict::Info, render(t));
  if (!eq.assumptions_used.empty()) r.add("before assumptions", Verdict::Info, equation_text(eq.before_assumptions));
  add_assumptions(r, eq);
  r.add("equation for " + to_string(f), Verdict::Info, equation_text(eq.lhs));
  return r;
}

Report cmd_em_eq(const Options& o) {
  const LagrangianModel m = load_model(o.file);
  const FieldEquation eq = derive_em_equation(m);
  Report r;
  r.id = "em-eq";
  add_assumptions(r, eq);
  r.add("field equation", Verdict::Info, equation_text(eq.lhs));
  r.add("charge degree", Verdict::Info, std::to_string(poly_degree(eq.lhs, "e")));
  return r;
}

Report cmd_gauge(const Options& o) {
  const LagrangianModel m = load_model(o.file);
  const FieldEquation eq = derive_em_equation(m);
  const GaugeVerdict g = gauge_check(eq, m);
  Report r;
  r.id = "gauge";
  r.add("field equation", Verdict::Info, equation_text(eq.lhs));
  r.add("gauge invariance under A_mu -> A_mu + d_mu(" + g.gauge_function + ")",
        g.invariant ? Verdict::Pass : Verdict::Fail, render(g.witness));
  return r;
}

Report cmd_stress(const Options& o) {
  const LagrangianModel m = load_model(o.file);
  const FieldRef f = resolve_field(m, o.field);
  Report r;
  r.id = "stress";
  const Expr T = stress_energy(m, f);
  r.add("T^{mu nu}", Verdict::Info, render(T));
  r.add("degree in m", Verdict::Info, std::to_string(poly_degree(T, "m")));
  return r;
}

std::vector<Report> cmd_scenario(const Options& o, std::ostream& out) {
  const Catalog catalog = o.scenario_dir.empty() ? Catalog::builtin() : Catalog::load(o.scenario_dir);
  if (o.list) {
    for (const auto& s : catalog.scenarios()) out << s.id << "  " << s.description << "\n";
    return {};
  }
  const RunOptions run{o.tolerance, kFiniteDifferenceTolerance};
  if (!o.all) return {catalog.run(o.scenario_id, run)};
  std::vector<std::future<Report>> jobs;
  for (const auto& id : catalog.list()) {
    jobs.push_back(std::async(std::launch::async, [&catalog, id, run] { return catalog.run(id, run); }));
  }
  std::vector<Report> reports;
  for (auto& j : jobs) reports.push_back(j.get());
  return reports;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Consistency checks for field-theory Lagrangian densities", "fieldlint"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--tolerance", o.tolerance, "Numeric equality tolerance")->check(CLI::PositiveNumber);
  app.add_option("--scenario-dir", o.scenario_dir, "Directory with manifest.json and .lagr models");

  auto* check = app.add_subcommand("check", "Dimensions, Lorentz-scalar and charge-degree audits");
  check->add_option("file", o.file, ".lagr model")->required();
  auto* eom = app.add_subcommand("eom", "Euler-Lagrange equation of a field");
  eom->add_option("file", o.file, ".lagr model")->required();
  eom->add_option("--vary", o.vary, "Field to vary: phi, conj(phi), psibar")->required();
  auto* em = app.add_subcommand("em-eq", "Field equation of the vector potential");
  em->add_option("file", o.file, ".lagr model")->required();
  auto* gauge = app.add_subcommand("gauge", "Gauge invariance of the potential's field equation");
  gauge->add_option("file", o.file, ".lagr model")->required();
  auto* stress = app.add_subcommand("stress", "Canonical stress-energy tensor");
  stress->add_option("file", o.file, ".lagr model")->required();
  stress->add_option("--field", o.field, "Field")->required();
  auto* scenario = app.add_subcommand("scenario", "Run built-in scenarios");
  auto* id_opt = scenario->add_option("id", o.scenario_id, "Scenario id");
  auto* all_opt = scenario->add_flag("--all", o.all, "Run every scenario");
  auto* list_opt = scenario->add_flag("--list", o.list, "List scenario ids");
  id_opt->excludes(all_opt)->excludes(list_opt);
  all_opt->excludes(list_opt);
  // Global options are accepted after the subcommand too.
  for (auto* sub : {check, eom, em, gauge, stress, scenario}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o_out;
    std::ostringstream o_err;
    const int code = app.exit(e, o_out, o_err);
    out << o_out.str();
    err << o_err.str();
    return code == 0 ? kExitPass : kExitUsage;
  }
  if (scenario->parsed() && !o.all && !o.list && o.scenario_id.empty()) {
    err << "scenario: give an id, --all or --list\n";
    return kExitUsage;
  }

  std::vector<Report> reports;
  try {
    if (check->parsed()) reports.push_back(cmd_check(o));
    if (eom->parsed()) reports.push_back(cmd_eom(o));
    if (em->parsed()) reports.push_back(cmd_em_eq(o));
    if (gauge->parsed()) reports.push_back(cmd_gauge(o));
    if (stress->parsed()) reports.push_back(cmd_stress(o));
    if (scenario->parsed()) {
      reports = cmd_scenario(o, out);
      if (o.list) return kExitPass;
    }
  } catch (const ParseError& e) {
    err << o.file << ":" << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  out << (o.format == "json" ? format_json(reports) : format_text(reports));
  const bool ok = std::all_of(reports.begin(), reports.end(), [](const Report& r) { return r.passed(); });
  return ok ? kExitPass : kExitVerdictFailure;
}

}  // namespace fieldlint
