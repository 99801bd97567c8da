#include "zs/potential.hpp"

#include <cmath>
#include <utility>

#include "zs/spectral.hpp"

namespace zs {

PotentialKind potential_kind_from_name(const std::string& name) {
  if (name == "zero") return PotentialKind::zero;
  if (name == "sech") return PotentialKind::sech;
  if (name == "gaussian") return PotentialKind::gaussian;
  if (name == "box_smoothed") return PotentialKind::box_smoothed;
  if (name == "chirped_sech") return PotentialKind::chirped_sech;
  throw ConfigError("unknown potential kind: " + name);
}

Potential Potential::from_samples(ComplexField field, std::string label) {
  Potential p;
  p.midpoints = cell_midpoint_values(field);
  p.psi = std::move(field);
  p.label = std::move(label);
  const double boundary =
      std::max(std::abs(p.psi.values.front()), std::abs(p.psi.values.back()));
  p.decay_ok = boundary <= kPotentialDecayTol;
  return p;
}

Potential Potential::from_analytic(const Grid& g, std::function<Complex(double)> f,
                                   std::string label) {
  Potential p = from_samples(ComplexField::sample(g, f), std::move(label));
  p.midpoints.resize(g.n - 1);
  for (std::size_t i = 0; i + 1 < g.n; ++i)
    p.midpoints[i] = f(g.node(i) + 0.5 * g.dx());
  p.analytic = std::move(f);
  return p;
}

namespace {

double get_param(const std::map<std::string, double>& params, const std::string& key,
                 double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void reject_unknown(const std::map<std::string, double>& params,
                    std::initializer_list<const char*> known) {
  for (const auto& [key, value] : params) {
    (void)value;
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ConfigError("potential: unknown parameter '" + key + "'");
  }
}

}  // namespace

Potential make_potential(PotentialKind kind, const std::map<std::string, double>& params,
                         const Grid& g) {
  std::function<Complex(double)> f;
  std::string label;
  switch (kind) {
    case PotentialKind::zero: {
      reject_unknown(params, {});
      f = [](double) { return Complex{0.0, 0.0}; };
      label = "zero";
      break;
    }
    case PotentialKind::sech: {
      reject_unknown(params, {"A", "w", "x0"});
      const double a = get_param(params, "A", 0.5);
      const double w = get_param(params, "w", 1.0);
      const double x0 = get_param(params, "x0", 0.0);
      if (w <= 0.0) throw ConfigError("potential: width must be positive");
      f = [=](double x) { return Complex{a / std::cosh((x - x0) / w), 0.0}; };
      label = "sech";
      break;
    }
    case PotentialKind::gaussian: {
      reject_unknown(params, {"A", "w", "x0"});
      const double a = get_param(params, "A", 0.5);
      const double w = get_param(params, "w", 1.0);
      const double x0 = get_param(params, "x0", 0.0);
      if (w <= 0.0) throw ConfigError("potential: width must be positive");
      f = [=](double x) {
        const double u = (x - x0) / w;
        return Complex{a * std::exp(-u * u), 0.0};
      };
      label = "gaussian";
      break;
    }
    case PotentialKind::box_smoothed: {
      reject_unknown(params, {"A", "width", "k", "x0"});
      const double a = get_param(params, "A", 0.5);
      const double width = get_param(params, "width", 4.0);
      const double k = get_param(params, "k", 8.0);
      const double x0 = get_param(params, "x0", 0.0);
      if (width <= 0.0 || k <= 0.0)
        throw ConfigError("potential: width and steepness must be positive");
      f = [=](double x) {
        const double u = x - x0;
        return Complex{
            0.5 * a * (std::tanh(k * (u + 0.5 * width)) - std::tanh(k * (u - 0.5 * width))),
            0.0};
      };
      label = "box_smoothed";
      break;
    }
    case PotentialKind::chirped_sech: {
      reject_unknown(params, {"A", "w", "x0", "c"});
      const double a = get_param(params, "A", 0.5);
      const double w = get_param(params, "w", 1.0);
      const double x0 = get_param(params, "x0", 0.0);
      const double c = get_param(params, "c", 1.0);
      if (w <= 0.0) throw ConfigError("potential: width must be positive");
      f = [=](double x) {
        return (a / std::cosh((x - x0) / w)) * std::exp(kI * (c * x));
      };
      label = "chirped_sech";
      break;
    }
  }
  Potential p = Potential::from_analytic(g, std::move(f), std::move(label));
  if (!p.decay_ok)
    throw ConfigError("potential '" + p.label + "': |psi| at the grid ends exceeds " +
                      std::to_string(kPotentialDecayTol) +
                      "; widen the grid or recenter the potential");
  return p;
}

Hamiltonians hamiltonians(const Potential& p) {
  const ComplexField& psi = p.psi;
  const ComplexField dpsi = derivative(psi);
  ComplexField abs2 = ComplexField::zeros(psi.grid);
  ComplexField cross = ComplexField::zeros(psi.grid);
  ComplexField density3 = ComplexField::zeros(psi.grid);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double a2 = std::norm(psi.values[i]);
    abs2.values[i] = a2;
    cross.values[i] = std::conj(psi.values[i]) * dpsi.values[i];
    density3.values[i] = std::norm(dpsi.values[i]) + a2 * a2;
  }
  Hamiltonians h;
  h.h1 = 0.5 * quadrature(abs2).real();
  h.h2 = (quadrature(cross) / (2.0 * kI)).real();
  h.h3 = 0.5 * quadrature(density3).real();
  return h;
}

std::vector<std::string> catalogue_names() { return {"zero", "sech", "chirped_sech"}; }

Potential catalogue_potential(const std::string& name, const Grid& g) {
  if (name == "zero") return make_potential(PotentialKind::zero, {}, g);
  if (name == "sech") return make_potential(PotentialKind::sech, {{"A", 0.5}}, g);
  if (name == "chirped_sech")
    return make_potential(PotentialKind::chirped_sech, {{"A", 0.5}, {"c", 1.0}}, g);
  throw ConfigError("not a catalogue potential: " + name);
}

}  // namespace zs
