// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure.  Expected values are written out here rather than read from the
// catalog manifest, so the two act as independent checks of each other.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "fieldlint/dimensions.hpp"
#include "fieldlint/numeric.hpp"
#include "fieldlint/scenarios.hpp"
#include "fieldlint/symbolic.hpp"
#include "fieldlint/variational.hpp"

using namespace fieldlint;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

const Catalog& catalog() {
  static const Catalog c = Catalog::builtin();
  return c;
}

Expr canon(const std::string& text, const LagrangianModel& m) { return canonicalize(parse_expr(text, m)); }

// Collects failures for one criterion.
class Verdicts {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void equal(const Expr& got, const Expr& want, const std::string& what) {
    if (!(got == want)) failures_.push_back(what + ": got " + render(got) + ", want " + render(want));
  }
  void note(const std::string& s) { notes_.push_back(s); }
  bool ok() const { return failures_.empty(); }
  std::string summary() const {
    std::string out;
    for (const auto& f : failures_) out += (out.empty() ? "" : "; ") + f;
    for (const auto& n : notes_) out += (out.empty() ? "" : "; ") + n;
    return out;
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

int failures = 0;

void criterion(int number, const std::string& title, const std::function<void(Verdicts&)>& body) {
  Verdicts v;
  const auto t0 = Clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.expect(false, std::string("exception: ") + e.what());
  }
  const double elapsed = seconds_since(t0);
  if (!v.ok()) ++failures;
  std::printf("[%s] %2d %s (%.3f s)%s%s\n", v.ok() ? "PASS" : "FAIL", number, title.c_str(), elapsed,
              v.summary().empty() ? "" : ": ", v.summary().c_str());
  std::fflush(stdout);
}

// Each golden must finish within a second.
void timed_golden(Verdicts& v, const std::string& name, const std::function<void()>& body) {
  const auto t0 = Clock::now();
  body();
  const double s = seconds_since(t0);
  v.expect(s < 1.0, name + " took " + std::to_string(s) + " s");
}

FieldEquation vary(const LagrangianModel& m, const std::string& f) { return euler_lagrange(m, resolve_field(m, f)); }

constexpr double kFourPi = 4 * std::numbers::pi;

}  // namespace

int main() {
  criterion(1, "symbolic goldens", [](Verdicts& v) {
    timed_golden(v, "free KG", [&] {
      const auto m = catalog().model("kg_free_real");
      v.equal(vary(m, "phi").lhs, canon("d^{mu}(d_{mu}(phi)) + m^2*phi", m), "free KG equation");
    });
    timed_golden(v, "real interaction", [&] {
      const auto m = catalog().model("kg_real_interaction");
      const auto eq = vary(m, "phi");
      v.equal(eq.before_assumptions, canon("e*d_{mu}(A^{mu})*phi", m), "before gauge");
      v.expect(eq.lhs.is_zero(), "real interaction does not vanish under Lorenz gauge");
      v.expect(eq.raw_terms.size() == 3, "expected three Euler-Lagrange terms");
    });
    timed_golden(v, "charged KG", [&] {
      const auto m = catalog().model("kg_em");
      v.equal(vary(m, "conj(phi)").lhs, canon("d^{mu}(d_{mu}(phi)) + 2*i*e*A^{mu}*d_{mu}(phi) + m^2*phi", m),
              "charged KG equation");
    });
    timed_golden(v, "seagull field equation", [&] {
      const auto m = catalog().model("kg_pauli_weisskopf");
      const Expr lhs = derive_em_equation(m).lhs;
      v.equal(lhs, canon("d_{nu}(F^{mu nu}) + 4*pi*j^{mu} + 8*pi*e^2*A^{mu}*conj(phi)*phi", m), "seagull equation");
      v.expect(render(lhs).find("8*pi*e^2*A^{mu}*conj(phi)*phi") != std::string::npos, "8*pi*e^2 term not rendered");
    });
    timed_golden(v, "stress-energy", [&] {
      const auto m = catalog().model("kg_free_real");
      v.equal(stress_energy(m, FieldRef{"phi", false}),
              canon("d^{mu}(phi)*d^{nu}(phi) - 1/2*(d_{a}(phi)*d_{b}(phi)*g^{a b} - m^2*phi^2)*g^{mu nu}", m),
              "canonical stress-energy");
    });
    timed_golden(v, "Dirac", [&] {
      const auto m = catalog().model("dirac_free");
      // The Euler-Lagrange expression is -(i gamma d - m) psi; its zero set is the Dirac equation.
      v.equal(vary(m, "psibar").lhs, canon("-(i*gamma^{mu}*d_{mu}(psi) - m*psi)", m), "Dirac equation");
    });
  });

  criterion(2, "dimension table", [](Verdicts& v) {
    const auto kg = catalog().model("kg_free_complex");
    const auto kg_dims = infer_dimensions(kg);
    v.expect(kg_dims.at("phi").exponent == Rational(-1), "phi is not [L^-1]");
    const auto rho = audit_probability_density(canon("conj(phi)*phi", kg), kg, kg_dims);
    v.expect(rho.dimension.exponent == Rational(-2) && rho.not_probability, "conj(phi)*phi not [L^-2] with flag");
    const auto j = dimension_of(canon("i*(conj(phi)*d_{mu}(phi) - d_{mu}(conj(phi))*phi)", kg), kg, kg_dims);
    v.expect(j && j->exponent == Rational(-3), "current is not [L^-3]");

    const auto dirac = catalog().model("dirac_free");
    const auto d_dims = infer_dimensions(dirac);
    v.expect(d_dims.at("psi").exponent == Rational(-3) / 2, "psi is not [L^-3/2]");
    const auto pp = audit_probability_density(canon("psibar*psi", dirac), dirac, d_dims);
    v.expect(pp.dimension.exponent == Rational(-3) && !pp.not_probability, "psibar*psi not [L^-3]");

    int terms = 0;
    for (const auto& name : catalog().model_names()) {
      const auto m = catalog().model(name);
      const auto dims = infer_dimensions(m);
      for (const auto& t : monomials(m.density)) {
        const auto d = dimension_of(t, m, dims);
        if (!d) continue;
        ++terms;
        v.expect(d->exponent == Rational(-4), name + ": " + render(t) + " is not [L^-4]");
      }
    }
    v.note(std::to_string(terms) + " catalog terms at [L^-4]");
  });

  criterion(3, "antisymmetric x symmetric cancellation", [](Verdicts& v) {
    const LagrangianModel m = parse(R"(
field phi: real scalar
field A: real vector
field S: real symmetric
field F: real antisymmetric
const k
)");
    const std::vector<std::string> pieces{"d_{mu}(phi)*d_{nu}(phi)", "d_{mu nu}(phi)", "S_{mu nu}", "g_{mu nu}",
                                          "A_{mu}*A_{nu}", "d_{mu}(A_{nu}) + d_{nu}(A_{mu})", "S_{mu a}*S^{a}_{nu}",
                                          "phi^2*S_{mu nu}*k"};
    std::mt19937 rng(31337);
    std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
    std::uniform_int_distribution<int> coef(-9, 9);
    const auto t0 = Clock::now();
    for (int trial = 0; trial < 100; ++trial) {
      std::string s = "(" + std::to_string(coef(rng)) + ")*(" + pieces[pick(rng)] + ")";
      for (int k = 0; k < 2; ++k) s += " + (" + std::to_string(coef(rng)) + ")*(" + pieces[pick(rng)] + ")";
      const Expr e = canonicalize(parse_expr("F^{mu nu}*(" + s + ")", m));
      v.expect(e.is_zero(), "F*S nonzero for S = " + s);
    }
    const double elapsed = seconds_since(t0);
    v.expect(elapsed < 5.0, "100 cases took " + std::to_string(elapsed) + " s");
  });

  criterion(4, "gauge audit", [](Verdicts& v) {
    const auto current = catalog().model("maxwell_current");
    v.expect(gauge_check(derive_em_equation(current), current).invariant, "current-coupled equation not invariant");
    const auto pw = catalog().model("kg_pauli_weisskopf");
    const GaugeVerdict g = gauge_check(derive_em_equation(pw), pw);
    v.expect(!g.invariant, "seagull equation reported gauge invariant");
    const auto with_chi = parse(catalog().source("kg_pauli_weisskopf") + "\nfield chi: real scalar\n");
    const Expr content = canon("pi*e^2*d^{mu}(chi)*conj(phi)*phi", with_chi);
    const bool plus = canonicalize(g.witness - num(8) * content).is_zero();
    const bool minus = canonicalize(g.witness + num(8) * content).is_zero();
    v.expect(plus || minus, "witness field content differs: " + render(g.witness));
    v.note("witness " + render(g.witness));
  });

  criterion(5, "electrostatic contradiction", [](Verdicts& v) {
    const auto m = catalog().model("kg_em");
    const auto eq = vary(m, "conj(phi)");
    double worst = 0;
    for (double mass : {0.1, 1.0, 10.0}) {
      for (double U : {-1.0, -0.1, 0.0, 0.1, 1.0}) {
        worst = std::max(worst, std::abs(kg_em_residual(eq, mass, U) - U * U));
      }
    }
    v.expect(worst <= 1e-12, "sweep deviation " + std::to_string(worst));
    const Complex spot = kg_em_residual(eq, 1, 0.1);
    v.expect(std::abs(spot - 0.01) <= 1e-12, "spot residual " + std::to_string(spot.real()));
    std::ostringstream s;
    s << "max deviation " << worst << ", spot " << spot.real();
    v.note(s.str());
  });

  criterion(6, "plane-wave action", [](Verdicts& v) {
    const auto m = catalog().model("kg_free_complex");
    std::mt19937 rng(2718);
    std::uniform_real_distribution<double> mass_dist(0.1, 3);
    std::uniform_real_distribution<double> p_dist(-2, 2);
    auto config = [](double E, std::array<double, 3> p, double mass) {
      FieldConfig cfg;
      cfg.fields["phi"] = PlaneWave{E, p, 1};
      cfg.constants["m"] = mass;
      return cfg;
    };
    double worst_on = 0;
    double worst_off = 0;
    for (int k = 0; k < 20; ++k) {
      const double mass = mass_dist(rng);
      const std::array<double, 3> p{p_dist(rng), p_dist(rng), p_dist(rng)};
      const double p2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
      const double E = std::sqrt(p2 + mass * mass);
      worst_on = std::max(worst_on, std::abs(action_box(m, config(E, p, mass), Box{}, "phi").field_rate));
      const double E_off = E * (1.2 + 0.05 * k);
      const double want = (E_off * E_off - p2 - mass * mass) / (2 * E_off);
      const double got = action_box(m, config(E_off, p, mass), Box{}, "phi").field_rate;
      worst_off = std::max(worst_off, std::abs(got - want) / std::abs(want));
    }
    v.expect(worst_on <= 1e-12, "on-shell rate " + std::to_string(worst_on));
    v.expect(worst_off <= 1e-12, "off-shell relative error " + std::to_string(worst_off));
    const ActionComparison rest = action_box(m, config(1, {0, 0, 0}, 1), Box{}, "phi");
    v.expect(std::abs(rest.field_rate) <= 1e-12 && rest.classical_rate == -1 && rest.mismatch,
             "classical comparator at v = 0");
    const ActionComparison off = action_box(m, config(2, {0, 0, 1}, 1), Box{}, "phi");
    v.expect(std::abs(off.field_rate - 0.5) <= 1e-12, "off-shell fixture");
    std::ostringstream s;
    s << "on-shell max " << worst_on << ", off-shell rel max " << worst_off << ", classical " << rest.classical_rate;
    v.note(s.str());
  });

  criterion(7, "Yukawa energy density", [](Verdicts& v) {
    const auto m = catalog().model("kg_free_real");
    const Expr T = stress_energy(m, FieldRef{"phi", false});
    double worst = 0;
    for (double mass : {0.0, 1.0, 5.0}) {
      for (int k = 0; k < 50; ++k) {
        const double r = 0.1 + k * (20.0 - 0.1) / 49;
        // Independent closed form: (1/(2r^2) + m/r + m^2) * (exp(-m r)/r)^2 with g = 4 pi.
        const double phi = std::exp(-mass * r) / r;
        const double want = (1 / (2 * r * r) + mass / r + mass * mass) * phi * phi;
        worst = std::max(worst, std::abs(yukawa_t00(T, kFourPi, mass, r) - want) / want);
      }
    }
    v.expect(worst <= 1e-12, "relative deviation " + std::to_string(worst));
    const double spot = yukawa_t00(T, kFourPi, 1, 1);
    v.expect(std::abs(spot - 2.5 * std::exp(-2.0)) <= 1e-12, "spot " + std::to_string(spot));
    std::ostringstream s;
    s.precision(10);
    s << "spot " << spot << ", max rel deviation " << worst;
    v.note(s.str());
  });

  criterion(8, "mass scaling", [](Verdicts& v) {
    const auto kg = catalog().model("kg_free_real");
    const int kg_degree = poly_degree(stress_energy(kg, FieldRef{"phi", false}), "m");
    const auto dust = catalog().model("mass_scaling");
    const int dust_degree = poly_degree(canon("mu_m*gam^-1*v^{mu}*v^{nu}", dust), "mu_m");
    const int yukawa_degree = poly_degree(canon("(1/2*r^-2 + m*r^-1 + m^2)*phi^2", dust), "m");
    v.expect(kg_degree == 2, "KG degree " + std::to_string(kg_degree));
    v.expect(yukawa_degree == 2, "Yukawa T00 degree " + std::to_string(yukawa_degree));
    v.expect(dust_degree == 1, "dust degree " + std::to_string(dust_degree));
  });

  criterion(9, "orthogonality", [](Verdicts& v) {
    const double product = orthogonality_check(yukawa_force(kFourPi, 1, 1, {0, 0, 0, 1}), four_velocity({0, 0, -0.6}));
    v.expect(std::abs(product - (-0.5518192)) <= 1e-6, "Yukawa f.v = " + std::to_string(product));
    v.expect(product != 0, "Yukawa f.v vanished");
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> entry(-10, 10);
    std::uniform_real_distribution<double> speed(-0.57, 0.57);
    double worst = 0;
    for (int k = 0; k < 100; ++k) {
      Matrix4 F{};
      for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) {
          F[a][b] = entry(rng);
          F[b][a] = -F[a][b];
        }
      }
      const FourVector u = four_velocity({speed(rng), speed(rng), speed(rng)});
      const double q = entry(rng);
      const FourVector j{{q * u[0], q * u[1], q * u[2], q * u[3]}};
      worst = std::max(worst, std::abs(orthogonality_check(lorentz_force(F, j), u)));
    }
    v.expect(worst <= 1e-12, "Lorentz f.v " + std::to_string(worst));
    std::ostringstream s;
    s.precision(8);
    s << "Yukawa f.v " << product << ", Lorentz max " << worst;
    v.note(s.str());
  });

  criterion(10, "on-shell current conservation", [](Verdicts& v) {
    const auto kg = catalog().model("kg_free_complex");
    const Expr kg_div = canon("d^{mu}(i*(conj(phi)*d_{mu}(phi) - d_{mu}(conj(phi))*phi))", kg);
    v.expect(!kg_div.is_zero(), "KG divergence vanished off shell");
    v.expect(on_shell_reduce(kg_div, {vary(kg, "conj(phi)"), vary(kg, "phi")}).is_zero(), "KG current not conserved");
    const auto dirac = catalog().model("dirac_free");
    const Expr d_div = canon("d_{mu}(psibar*gamma^{mu}*psi)", dirac);
    v.expect(!d_div.is_zero(), "Dirac divergence vanished off shell");
    v.expect(on_shell_reduce(d_div, {vary(dirac, "psibar"), vary(dirac, "psi")}).is_zero(),
             "Dirac current not conserved");
  });

  criterion(11, "full catalog via the command line", [](Verdicts& v) {
    const std::string command = std::string("\"") + FIELDLINT_CLI + "\" scenario --all > /dev/null";
    const auto t0 = Clock::now();
    const int status = std::system(command.c_str());
    const double elapsed = seconds_since(t0);
    v.expect(status == 0, "exit status " + std::to_string(status));
    v.expect(elapsed < 10.0, "took " + std::to_string(elapsed) + " s");
    v.note(std::to_string(catalog().list().size()) + " scenarios");
  });

  std::printf("%s: %d criterion(s) failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
