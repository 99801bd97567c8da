#include <cmath>
#include <sstream>

#include "doctest.h"
#include "zs/grid.hpp"
#include "zs/spectral.hpp"

using namespace zs;

namespace {
const Grid kDefault = Grid::make(-20.0, 20.0, 4096);
}

TEST_CASE("quadrature: zero field and exactness through cubics") {
  CHECK(std::abs(quadrature(ComplexField::zeros(kDefault))) == 0.0);

  auto cubic = ComplexField::sample(kDefault, [](double x) {
    return Complex{2.0 * x * x * x - 3.0 * x * x + x - 1.0, 0.0};
  });
  // Antiderivative x^4/2 - x^3 + x^2/2 - x evaluated at +-20.
  const double exact = 72180.0 - 88220.0;
  CHECK(std::abs(quadrature(cubic).real() - exact) < 1e-9 * std::abs(exact));
}

TEST_CASE("quadrature: sech^2 and Gaussian against closed forms") {
  auto sech2 = ComplexField::sample(kDefault, [](double x) {
    const double s = 1.0 / std::cosh(x);
    return Complex{s * s, 0.0};
  });
  CHECK(std::abs(quadrature(sech2).real() - 2.0 * std::tanh(20.0)) < 1e-10);

  auto gauss = ComplexField::sample(
      kDefault, [](double x) { return Complex{std::exp(-x * x), 0.0}; });
  CHECK(std::abs(quadrature(gauss).real() - 1.772453850905516) < 1e-10);
}

TEST_CASE("quadrature: linearity and subrange splitting") {
  auto f = ComplexField::sample(kDefault, [](double x) {
    return std::exp(-x * x / 8.0) * Complex{std::cos(x), 0.3 * std::sin(2.0 * x)};
  });
  auto g = ComplexField::sample(kDefault, [](double x) {
    return Complex{1.0, 0.5} / std::cosh(x - 1.0);
  });
  const Complex alpha{2.0, -1.0};
  const Complex beta{0.5, 3.0};
  ComplexField combo = ComplexField::zeros(kDefault);
  for (std::size_t i = 0; i < combo.size(); ++i)
    combo.values[i] = alpha * f.values[i] + beta * g.values[i];
  const Complex lhs = quadrature(combo);
  const Complex rhs = alpha * quadrature(f) + beta * quadrature(g);
  CHECK(std::abs(lhs - rhs) < 1e-12 * (std::abs(alpha) + std::abs(beta)) *
                                  (1.0 + std::abs(lhs)));

  const Complex whole = quadrature(f);
  const Complex split = quadrature_range(f, 0, 1234) + quadrature_range(f, 1234, 4095);
  CHECK(std::abs(whole - split) < 1e-12);

  CHECK_THROWS_AS(quadrature_range(f, 10, 11), ConfigError);
}

TEST_CASE("derivative: fourth-order accuracy on sin") {
  auto f = ComplexField::sample(kDefault,
                                [](double x) { return Complex{std::sin(x), 0.0}; });
  auto d = derivative(f);
  double err = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i)
    err = std::max(err, std::abs(d.values[i].real() - std::cos(kDefault.node(i))));
  CHECK(err < 1e-7);
}

TEST_CASE("antiderivative_D: odd primitive of sech^2 and of the Gaussian") {
  auto zero = antiderivative_D(ComplexField::zeros(kDefault));
  CHECK(zero.field.max_abs() == 0.0);
  CHECK(zero.boundary_decay_ok);

  auto sech2 = ComplexField::sample(kDefault, [](double x) {
    const double s = 1.0 / std::cosh(x);
    return Complex{s * s, 0.0};
  });
  auto r = antiderivative_D(sech2);
  CHECK(r.boundary_decay_ok);
  double err = 0.0;
  for (std::size_t i = 0; i < r.field.size(); ++i)
    err = std::max(err,
                   std::abs(r.field.values[i].real() - std::tanh(kDefault.node(i))));
  CHECK(err < 1e-8);

  auto gauss = ComplexField::sample(
      kDefault, [](double x) { return Complex{std::exp(-x * x), 0.0}; });
  auto rg = antiderivative_D(gauss);
  // (sqrt(pi)/2) erf at exact node coordinates, precomputed and frozen.
  CHECK(std::abs(rg.field.values[2150].real() - 0.74727276583178358) < 1e-8);
  CHECK(std::abs(rg.field.values[2303].real() - 0.88585793509449343) < 1e-8);
}

TEST_CASE("antiderivative_D: derivative recovers the integrand; decay flagging") {
  auto f = ComplexField::sample(kDefault, [](double x) {
    return Complex{std::exp(-x * x / 4.0) * std::cos(2.0 * x), 0.0};
  });
  auto r = antiderivative_D(f);
  auto back = derivative(r.field);
  double err = 0.0;
  for (std::size_t i = 2; i + 2 < back.size(); ++i)
    err = std::max(err, std::abs(back.values[i] - f.values[i]));
  CHECK(err < 1e-6);

  auto flat = ComplexField::sample(kDefault, [](double) { return Complex{1.0, 0.0}; });
  CHECK_FALSE(antiderivative_D(flat).boundary_decay_ok);
}

TEST_CASE("hilbert_transform: Lorentzian matches the analytic transform") {
  auto f = ComplexField::sample(
      kDefault, [](double t) { return Complex{1.0 / (1.0 + t * t), 0.0}; });
  auto h = hilbert_transform(f);
  // H[1/(1+t^2)](x) = -x/(1+x^2) with this sign convention.
  double err = 0.0;
  for (double x0 : {0.0, 0.7, -1.3, 3.0, -7.5, 12.0}) {
    const std::size_t i = kDefault.nearest_node(x0);
    const double x = kDefault.node(i);
    err = std::max(err, std::abs(h.values[i].real() + x / (1.0 + x * x)));
  }
  CHECK(err < 1e-6);
}

TEST_CASE("hilbert_transform: Gaussian against the frozen Dawson oracle") {
  auto f = ComplexField::sample(
      kDefault, [](double t) { return Complex{std::exp(-t * t), 0.0}; });
  auto h = hilbert_transform(f);
  // -(2/sqrt(pi)) Dawson(x) at exact node coordinates, precomputed and frozen.
  CHECK(std::abs(h.values[2150].real() - (-0.60705200125888983)) < 1e-8);
  CHECK(std::abs(h.values[2252].real() - (-0.34059282796996977)) < 1e-8);
  CHECK(std::abs(h.values[2560].real() - (-0.11509914245234316)) < 1e-8);
}

TEST_CASE("hilbert_transform: double application is minus the identity") {
  auto f = ComplexField::sample(
      kDefault, [](double t) { return Complex{std::exp(-t * t), 0.0}; });
  auto hh = hilbert_transform(hilbert_transform(f));
  double err = 0.0;
  for (std::size_t i = 0; i < hh.size(); ++i) {
    if (std::abs(kDefault.node(i)) > 16.0) continue;
    err = std::max(err, std::abs(hh.values[i].real() + f.values[i].real()));
  }
  CHECK(err < 1e-6);
}

TEST_CASE("hilbert_transform: input validation") {
  auto flat = ComplexField::sample(kDefault, [](double) { return Complex{1.0, 0.0}; });
  CHECK_THROWS_AS(hilbert_transform(flat), ConfigError);
  auto cplx = ComplexField::sample(
      kDefault, [](double t) { return Complex{0.0, 1.0} * std::exp(-t * t); });
  CHECK_THROWS_AS(hilbert_transform(cplx), ConfigError);
}

TEST_CASE("spectral_translate shifts a decayed field") {
  auto f = ComplexField::sample(kDefault, [](double x) {
    return Complex{std::exp(-(x - 1.0) * (x - 1.0)), 0.0};
  });
  auto g = spectral_translate(f, 0.5);
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = kDefault.node(i);
    err = std::max(err, std::abs(g.values[i].real() - std::exp(-std::pow(x - 1.5, 2))));
  }
  CHECK(err < 1e-10);
}

TEST_CASE("cell_midpoint_values interpolates band-limited data") {
  auto f = ComplexField::sample(kDefault, [](double x) {
    return Complex{std::exp(-x * x / 2.0) * std::cos(3.0 * x), 0.0};
  });
  auto mid = cell_midpoint_values(f);
  double err = 0.0;
  for (std::size_t i = 0; i < mid.size(); ++i) {
    const double x = kDefault.node(i) + 0.5 * kDefault.dx();
    err = std::max(err, std::abs(mid[i].real() - std::exp(-x * x / 2.0) * std::cos(3.0 * x)));
  }
  CHECK(err < 1e-10);
}

TEST_CASE("field serialization round-trips exactly") {
  auto f = ComplexField::sample(kDefault, [](double x) {
    return Complex{std::sin(x) / (1.0 + x * x), std::cos(2.0 * x) / (2.0 + x * x)};
  });
  std::stringstream csv;
  field_to_csv(f, csv);
  auto f2 = field_from_csv(csv);
  REQUIRE(f2.size() == f.size());
  CHECK(f2.grid == f.grid);
  double err = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    err = std::max(err, std::abs(f.values[i] - f2.values[i]));
  CHECK(err == 0.0);

  std::stringstream js;
  field_to_json(f, js);
  auto f3 = field_from_json(js);
  REQUIRE(f3.size() == f.size());
  double jerr = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    jerr = std::max(jerr, std::abs(f.values[i] - f3.values[i]));
  CHECK(jerr == 0.0);
}
