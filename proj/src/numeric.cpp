#include "fieldlint/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fieldlint/error.hpp"
#include "fieldlint/symbolic.hpp"
#include "poly.hpp"

namespace fieldlint {

using detail::FieldAtom;
using detail::Monomial;

double SpacetimePoint::operator[](int mu) const {
  switch (mu) {
    case 0:
      return t;
    case 1:
      return x;
    case 2:
      return y;
    case 3:
      return z;
    default:
      throw Error("spacetime component out of range");
  }
}

SpacetimePoint SpacetimePoint::shifted(int mu, double h) const {
  SpacetimePoint p = *this;
  switch (mu) {
    case 0:
      p.t += h;
      break;
    case 1:
      p.x += h;
      break;
    case 2:
      p.y += h;
      break;
    case 3:
      p.z += h;
      break;
    default:
      throw Error("spacetime component out of range");
  }
  return p;
}

namespace {

double eta(int mu) { return mu == 0 ? 1.0 : -1.0; }

// Slot values for one term: index name -> component.
using Assignment = std::map<std::string, int>;

int component(const Index& i, const Assignment& a) { return a.at(i.name); }

Complex plane_wave(const PlaneWave& w, const FieldAtom& atom, const SpacetimePoint& x,
                   const Assignment& a) {
  // Negative energies are allowed here; kg_em_residual needs E = m + U < 0
  // for deep potentials.  action_box insists on E > 0.
  if (!std::isfinite(w.energy) || !std::isfinite(w.amplitude) ||
      !std::all_of(w.momentum.begin(), w.momentum.end(), [](double p) { return std::isfinite(p); })) {
    throw ConfigError("plane wave parameters must be finite");
  }
  const double phase = w.momentum[0] * x.x + w.momentum[1] * x.y + w.momentum[2] * x.z - w.energy * x.t;
  Complex value = w.amplitude * std::exp(Complex(0, phase));
  for (const auto& d : atom.derivs) {
    const int mu = component(d, a);
    // k_mu = (E, -p); d_mu exp(-i k.x) = -i k_mu exp(-i k.x).
    double k = mu == 0 ? w.energy : -w.momentum[static_cast<std::size_t>(mu - 1)];
    if (d.variance == Variance::Upper) k *= eta(mu);
    value *= Complex(0, -k);
  }
  return value;
}

double yukawa(const Yukawa& y, const FieldAtom& atom, const SpacetimePoint& x, const Assignment& a) {
  const double r = std::sqrt(x.x * x.x + x.y * x.y + x.z * x.z);
  if (r == 0) throw SingularityError("Yukawa profile evaluated at r = 0");
  const double c = y.coupling / (4 * std::numbers::pi);
  const double m = y.mass;
  const double decay = std::exp(-m * r);
  std::vector<int> spatial;
  double sign = 1;
  for (const auto& d : atom.derivs) {
    const int mu = component(d, a);
    if (mu == 0) return 0;  // static
    if (d.variance == Variance::Upper) sign = -sign;
    spatial.push_back(mu);
  }
  const double pos[4] = {x.t, x.x, x.y, x.z};
  const double f1 = -c * decay * (m * r + 1) / (r * r);
  switch (spatial.size()) {
    case 0:
      return c * decay / r;
    case 1:
      return sign * f1 * pos[spatial[0]] / r;
    case 2: {
      const double f2 = c * decay * (m * m * r * r + 2 * m * r + 2) / (r * r * r);
      const double xi = pos[spatial[0]];
      const double xj = pos[spatial[1]];
      const double delta = spatial[0] == spatial[1] ? 1.0 : 0.0;
      return sign * (f2 * xi * xj / (r * r) + f1 * (delta / r - xi * xj / (r * r * r)));
    }
    default:
      throw UnsupportedError("Yukawa derivatives beyond second order");
  }
}

Complex field_value(const FieldAtom& atom, const FieldConfig& cfg, const SpacetimePoint& x,
                    const Assignment& a) {
  auto it = cfg.fields.find(atom.symbol);
  if (it == cfg.fields.end()) throw ConfigError("no configuration assigned to field '" + atom.symbol + "'");
  Complex value;
  switch (atom.traits.kind) {
    case FieldKind::Scalar:
      if (const auto* w = std::get_if<PlaneWave>(&it->second)) {
        value = plane_wave(*w, atom, x, a);
      } else if (const auto* y = std::get_if<Yukawa>(&it->second)) {
        value = yukawa(*y, atom, x, a);
      } else {
        throw ConfigError("scalar field '" + atom.symbol + "' cannot take a constant potential");
      }
      break;
    case FieldKind::Vector: {
      const auto* v = std::get_if<ConstantPotential>(&it->second);
      if (v == nullptr) throw ConfigError("vector field '" + atom.symbol + "' needs a constant potential");
      const int mu = component(atom.indices[0], a);
      value = (atom.derivs.empty() && mu == 0) ? v->potential : 0.0;
      break;
    }
    default:
      throw UnsupportedError("numeric evaluation of tensor field '" + atom.symbol + "'");
  }
  return atom.conj ? std::conj(value) : value;
}

double constant_value(const std::string& name, const FieldConfig& cfg) {
  if (auto it = cfg.constants.find(name); it != cfg.constants.end()) return it->second;
  if (name == "pi") return std::numbers::pi;
  throw ConfigError("no value assigned to constant '" + name + "'");
}

Complex eval_monomial(const Monomial& m, const FieldConfig& cfg, const SpacetimePoint& x,
                      const std::map<std::string, int>& components) {
  if (m.chain) throw UnsupportedError("numeric evaluation of spinor expressions");
  Complex prefactor = 1;
  for (const auto& [s, k] : m.consts) prefactor *= std::pow(constant_value(s, cfg), k);

  Assignment a;
  for (const auto& i : detail::free_indices_of(m)) {
    auto it = components.find(i.name);
    if (it == components.end()) throw ConfigError("free index '" + i.name + "' has no component");
    if (it->second < 0 || it->second > 3) throw ConfigError("component of '" + i.name + "' out of range");
    a[i.name] = it->second;
  }
  const std::vector<std::string> dummies = detail::dummy_names_of(m);
  for (const auto& d : dummies) a[d] = 0;

  Complex total = 0;
  while (true) {
    Complex product = 1;
    for (const auto& g : m.metrics) {
      const int mu = component(g.a, a);
      const int nu = component(g.b, a);
      if (mu != nu) {
        product = 0;
      } else if (g.a.variance == g.b.variance) {
        product *= eta(mu);
      }
    }
    for (const auto& f : m.fields) {
      if (product == 0.0) break;
      product *= field_value(f, cfg, x, a);
    }
    total += product;
    std::size_t k = 0;
    for (; k < dummies.size(); ++k) {
      if (++a[dummies[k]] < 4) break;
      a[dummies[k]] = 0;
    }
    if (k == dummies.size()) break;
  }
  return prefactor * total;
}

Complex to_complex(const Coefficient& c) { return {to_double(c.re), to_double(c.im)}; }

}  // namespace

double minkowski(const FourVector& a, const FourVector& b) {
  double s = 0;
  for (int mu = 0; mu < 4; ++mu) s += eta(mu) * a[mu] * b[mu];
  return s;
}

FourVector four_velocity(const std::array<double, 3>& velocity) {
  const double v2 = velocity[0] * velocity[0] + velocity[1] * velocity[1] + velocity[2] * velocity[2];
  if (v2 >= 1) throw ConfigError("speed must be below 1");
  const double gamma = 1 / std::sqrt(1 - v2);
  return FourVector{{gamma, gamma * velocity[0], gamma * velocity[1], gamma * velocity[2]}};
}

Complex eval(const Expr& e, const FieldConfig& cfg, const SpacetimePoint& x,
             const std::map<std::string, int>& components) {
  Complex total = 0;
  for (const auto& [m, c] : detail::to_poly(e).terms()) {
    total += to_complex(c) * eval_monomial(m, cfg, x, components);
  }
  return total;
}

double finite_diff_check(const Expr& e, const FieldConfig& cfg, const SpacetimePoint& x, double h) {
  if (!(h > 0)) throw ConfigError("finite-difference step must be positive");
  const std::string slot = "fd";
  const Expr derivative = differentiate(e, down(slot));
  std::array<Complex, 4> symbolic;
  std::array<Complex, 4> numeric;
  double reference = 0;
  for (int mu = 0; mu < 4; ++mu) {
    symbolic[static_cast<std::size_t>(mu)] = eval(derivative, cfg, x, {{slot, mu}});
    numeric[static_cast<std::size_t>(mu)] =
        (eval(e, cfg, x.shifted(mu, h)) - eval(e, cfg, x.shifted(mu, -h))) / (2 * h);
    reference = std::max(reference, std::abs(symbolic[static_cast<std::size_t>(mu)]));
  }
  double worst = 0;
  for (std::size_t mu = 0; mu < 4; ++mu) {
    const double gap = std::abs(symbolic[mu] - numeric[mu]);
    worst = std::max(worst, reference == 0 ? gap : gap / reference);
  }
  return worst;
}

Complex kg_em_residual(const FieldEquation& eq, double m, double U, double charge) {
  if (charge == 0) throw ConfigError("charge must be nonzero");
  FieldConfig cfg;
  cfg.fields[eq.varied.symbol] = PlaneWave{m + U, {0, 0, 0}, 1};
  cfg.fields["A"] = ConstantPotential{U / charge};
  cfg.constants = {{"m", m}, {"e", charge}};
  const SpacetimePoint x{0.7, 0.1, -0.2, 0.3};
  const FieldAtom phi{eq.varied.symbol, {FieldKind::Scalar, Reality::Complex}, false, {}, {}};
  return eval(eq.lhs, cfg, x) / field_value(phi, cfg, x, {});
}

ActionComparison action_box(const LagrangianModel& model, const FieldConfig& cfg, const Box& box,
                            const std::string& field_name, double tolerance) {
  auto it = cfg.fields.find(field_name);
  const auto* wave = it == cfg.fields.end() ? nullptr : std::get_if<PlaneWave>(&it->second);
  if (wave == nullptr) throw ConfigError("field '" + field_name + "' needs a plane-wave configuration");
  if (!(wave->energy > 0)) throw ConfigError("plane-wave energy must be positive");
  if (box.cells < 1 || !(box.side > 0) || !(box.duration > 0)) throw ConfigError("degenerate box");
  const FieldSymbol* sym = model.find_field(field_name);
  if (sym == nullptr) throw ConfigError("'" + field_name + "' is not a field of the model");

  const Expr f = field(sym->name, sym->traits(), {}, {});
  const Expr density_of_probability =
      num(2) * constant("E") * (sym->reality == Reality::Complex ? conj(f) : f) * f;
  FieldConfig with_energy = cfg;
  with_energy.constants["E"] = wave->energy;

  const int n = box.cells;
  const double dx = box.side / n;
  const double dt = box.duration / n;
  const double volume = dx * dx * dx;
  double action = 0;
  double norm = 0;
  for (int it_t = 0; it_t < n; ++it_t) {
    for (int ix = 0; ix < n; ++ix) {
      for (int iy = 0; iy < n; ++iy) {
        for (int iz = 0; iz < n; ++iz) {
          const SpacetimePoint p{(it_t + 0.5) * dt, (ix + 0.5) * dx - box.side / 2,
                                 (iy + 0.5) * dx - box.side / 2, (iz + 0.5) * dx - box.side / 2};
          action += eval(model.density, with_energy, p).real() * volume * dt;
          norm += eval(density_of_probability, with_energy, p).real() * volume;
        }
      }
    }
  }
  norm /= n;  // average over time slices

  ActionComparison out;
  out.field_rate = action / box.duration / norm;
  const auto& p = wave->momentum;
  const double v = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / wave->energy;
  if (v >= 1) throw ConfigError("plane wave moves at or above the speed of light");
  out.classical_rate = -constant_value("m", cfg) * std::sqrt(1 - v * v);
  out.mismatch = std::abs(out.field_rate - out.classical_rate) > tolerance;
  return out;
}

double yukawa_t00(const Expr& stress, double g, double m, double r, const std::string& field_name,
                  const std::string& first, const std::string& second) {
  if (!(r > 0)) throw SingularityError("Yukawa T00 requires r > 0");
  FieldConfig cfg;
  cfg.fields[field_name] = Yukawa{g, m};
  cfg.constants["m"] = m;
  const Complex v = eval(stress, cfg, SpacetimePoint{0, 0, 0, r}, {{first, 0}, {second, 0}});
  return v.real();
}

double yukawa_t00_closed_form(double g, double m, double r) {
  if (!(r > 0)) throw SingularityError("Yukawa T00 requires r > 0");
  const double phi = g * std::exp(-m * r) / (4 * std::numbers::pi * r);
  return (1 / (2 * r * r) + m / r + m * m) * phi * phi;
}

double orthogonality_check(const FourVector& force, const FourVector& velocity, double tolerance) {
  if (std::abs(minkowski(velocity, velocity) - 1) > tolerance) {
    throw ConfigError("4-velocity is not normalized");
  }
  return minkowski(force, velocity);
}

FourVector yukawa_force(double g, double m, double lambda, const SpacetimePoint& x) {
  FieldConfig cfg;
  cfg.fields["phi"] = Yukawa{g, m};
  const Expr gradient = field("phi", {FieldKind::Scalar, Reality::Real}, {}, {down("i")});
  FourVector f;
  for (int i = 1; i < 4; ++i) f.v[static_cast<std::size_t>(i)] = lambda * eval(gradient, cfg, x, {{"i", i}}).real();
  return f;
}

FourVector lorentz_force(const Matrix4& field_strength, const FourVector& current) {
  FourVector f;
  for (std::size_t mu = 0; mu < 4; ++mu) {
    for (std::size_t nu = 0; nu < 4; ++nu) {
      f.v[mu] += field_strength[mu][nu] * eta(static_cast<int>(nu)) * current.v[nu];
    }
  }
  return f;
}

Matrix4 electric_field_tensor(const std::array<double, 3>& electric) {
  Matrix4 F{};
  for (std::size_t i = 0; i < 3; ++i) {
    F[i + 1][0] = electric[i];
    F[0][i + 1] = -electric[i];
  }
  return F;
}

}  // namespace fieldlint
