#include "zs/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "zs/spectral.hpp"

namespace zs {

Grid Grid::make(double x_min, double x_max, std::size_t n) {
  if (!(x_min < x_max)) throw ConfigError("grid: x_min must be below x_max");
  if (n < 16) throw ConfigError("grid: need at least 16 nodes");
  return Grid{x_min, x_max, n};
}

std::size_t Grid::nearest_node(double x) const {
  const double t = (x - x_min) / dx();
  const long i = std::lround(t);
  return static_cast<std::size_t>(std::clamp(i, 0L, static_cast<long>(n - 1)));
}

ComplexField ComplexField::zeros(const Grid& g) {
  return ComplexField{g, std::vector<Complex>(g.n, Complex{0.0, 0.0})};
}

ComplexField ComplexField::sample(const Grid& g,
                                  const std::function<Complex(double)>& f) {
  ComplexField out = zeros(g);
  for (std::size_t i = 0; i < g.n; ++i) out.values[i] = f(g.node(i));
  return out;
}

double ComplexField::max_abs() const {
  double m = 0.0;
  for (const Complex& v : values) m = std::max(m, std::abs(v));
  return m;
}

bool ComplexField::all_finite() const {
  return std::all_of(values.begin(), values.end(),
                     [](Complex v) { return is_finite(v); });
}

namespace {

// Composite Simpson node weights in units of dx; a trailing 3/8 block absorbs
// an odd interval count. Exact through cubics either way.
void add_simpson_weights(std::vector<double>& w, std::size_t lo, std::size_t hi) {
  const std::size_t intervals = hi - lo;
  std::size_t third_end = hi;
  if (intervals % 2 != 0) {
    if (intervals < 3) throw ConfigError("quadrature: need at least 2 intervals");
    third_end = hi - 3;
    const double c = 3.0 / 8.0;
    w[third_end] += c;
    w[third_end + 1] += 3.0 * c;
    w[third_end + 2] += 3.0 * c;
    w[hi] += c;
  }
  if (third_end > lo) {
    w[lo] += 1.0 / 3.0;
    for (std::size_t i = lo + 1; i < third_end; ++i)
      w[i] += (((i - lo) % 2 == 1) ? 4.0 : 2.0) / 3.0;
    w[third_end] += 1.0 / 3.0;
  }
}

Complex weighted_sum(const ComplexField& f, std::size_t lo, std::size_t hi) {
  std::vector<double> w(f.size(), 0.0);
  add_simpson_weights(w, lo, hi);
  Complex acc{0.0, 0.0};
  for (std::size_t i = lo; i <= hi; ++i) acc += w[i] * f.values[i];
  return acc * f.grid.dx();
}

}  // namespace

Complex quadrature(const ComplexField& f) {
  if (f.size() < 3) throw ConfigError("quadrature: need at least 3 nodes");
  return weighted_sum(f, 0, f.size() - 1);
}

Complex quadrature_range(const ComplexField& f, std::size_t i_lo, std::size_t i_hi) {
  if (i_hi >= f.size() || i_hi - i_lo < 2)
    throw ConfigError("quadrature_range: need at least 2 intervals inside the grid");
  return weighted_sum(f, i_lo, i_hi);
}

ComplexField derivative(const ComplexField& f) {
  const std::size_t n = f.size();
  if (n < 5) throw ConfigError("derivative: need at least 5 nodes");
  const double h = f.grid.dx();
  ComplexField out = ComplexField::zeros(f.grid);
  const auto& v = f.values;
  for (std::size_t i = 2; i + 2 < n; ++i)
    out.values[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * h);
  out.values[0] =
      (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) / (12.0 * h);
  out.values[1] =
      (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) / (12.0 * h);
  out.values[n - 2] = (3.0 * v[n - 1] + 10.0 * v[n - 2] - 18.0 * v[n - 3] +
                       6.0 * v[n - 4] - v[n - 5]) /
                      (12.0 * h);
  out.values[n - 1] = (25.0 * v[n - 1] - 48.0 * v[n - 2] + 36.0 * v[n - 3] -
                       16.0 * v[n - 4] + 3.0 * v[n - 5]) /
                      (12.0 * h);
  return out;
}

AntiderivativeResult antiderivative_D(const ComplexField& f, double decay_tol) {
  const std::size_t n = f.size();
  if (n < 8) throw ConfigError("antiderivative_D: need at least 8 nodes");
  const double h = f.grid.dx();
  const auto& v = f.values;

  // Cell integrals from the cubic through the four nearest nodes.
  std::vector<Complex> cell(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (i == 0) {
      cell[i] = (9.0 * v[0] + 19.0 * v[1] - 5.0 * v[2] + v[3]) * (h / 24.0);
    } else if (i + 2 >= n) {
      cell[i] = (9.0 * v[n - 1] + 19.0 * v[n - 2] - 5.0 * v[n - 3] + v[n - 4]) * (h / 24.0);
    } else {
      cell[i] = (-v[i - 1] + 13.0 * v[i] + 13.0 * v[i + 1] - v[i + 2]) * (h / 24.0);
    }
  }

  ComplexField cumulative = ComplexField::zeros(f.grid);
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    acc += cell[i];
    cumulative.values[i + 1] = acc;
  }
  const Complex total = acc;
  for (std::size_t i = 0; i < n; ++i) cumulative.values[i] -= 0.5 * total;

  const double boundary = std::max(std::abs(v.front()), std::abs(v.back()));
  return AntiderivativeResult{std::move(cumulative), boundary <= decay_tol, boundary};
}

namespace {

// integral_A^infty t^{-p} / (t - lambda) dt for 0 < |lambda| < A, p >= 1.
double tail_integral(int p, double lambda, double a) {
  if (std::abs(lambda) <= 0.6 * a) {
    // sum_m lambda^m a^{-p-m} / (p+m); converges geometrically for |lambda| < a.
    double sum = 0.0;
    double term = std::pow(a, -p);
    for (int m = 0; m < 64; ++m) {
      sum += term / static_cast<double>(p + m);
      term *= lambda / a;
    }
    return sum;
  }
  std::array<double, 4> t{};
  t[1] = -std::log1p(-lambda / a) / lambda;
  for (int q = 2; q <= p; ++q)
    t[q] = (t[q - 1] - std::pow(a, 1 - q) / static_cast<double>(q - 1)) / lambda;
  return t[p];
}

}  // namespace

ComplexField hilbert_transform(const ComplexField& f) {
  const std::size_t n = f.size();
  if (n < 64) throw ConfigError("hilbert_transform: need at least 64 nodes");
  const double h = f.grid.dx();
  const double peak = f.max_abs();

  double max_imag = 0.0;
  for (const Complex& v : f.values) max_imag = std::max(max_imag, std::abs(v.imag()));
  if (max_imag > 1e-9 * (1.0 + peak))
    throw ConfigError("hilbert_transform: input must be real-valued");

  ComplexField out = ComplexField::zeros(f.grid);
  if (peak == 0.0) return out;

  const double boundary = std::max(std::abs(f.values.front()), std::abs(f.values.back()));
  if (boundary > 0.05 * peak)
    throw ConfigError("hilbert_transform: input does not decay at the grid ends");

  // Odd-offset trapezoid rule: H[f](x_k) ~ (2/pi) sum_{j-k odd} f_j / (j-k),
  // via one linear convolution with kernel K(m) = -(2/pi)/m on odd m.
  std::vector<Complex> kernel(2 * n - 1, Complex{0.0, 0.0});
  for (std::size_t t = 0; t < kernel.size(); ++t) {
    const long m = static_cast<long>(t) - static_cast<long>(n - 1);
    if (m % 2 != 0) kernel[t] = Complex{-(2.0 / kPi) / static_cast<double>(m), 0.0};
  }
  const std::vector<Complex> conv = linear_convolution(f.values, kernel);
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = conv[k + n - 1].real();

  // The odd-offset subset is a trapezoid with spacing 2 dx; its two end nodes
  // carry half weight, which the convolution overcounted.
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j0 = (k % 2 == 0) ? 1 : 0;
    const std::size_t je = ((n - 1 - k) % 2 == 1) ? n - 1 : n - 2;
    g[k] -= (h / kPi) * f.values[j0].real() / (f.grid.node(j0) - f.grid.node(k));
    g[k] -= (h / kPi) * f.values[je].real() / (f.grid.node(je) - f.grid.node(k));
  }

  // Inverse-power tail fit on the outer bands; the closed-form tail integrals
  // restore the mass outside the grid for slowly decaying input.
  const double band_width = 2.0;
  const std::size_t nb = std::min(n / 8, static_cast<std::size_t>(band_width / h) + 1);
  double band_peak = 0.0;
  for (std::size_t i = 0; i < nb; ++i) {
    band_peak = std::max(band_peak, std::abs(f.values[i]));
    band_peak = std::max(band_peak, std::abs(f.values[n - 1 - i]));
  }
  std::array<double, 3> c{0.0, 0.0, 0.0};
  if (band_peak > 1e-13 * peak) {
    const double scale = std::max(std::abs(f.grid.x_min), std::abs(f.grid.x_max));
    double ata[3][3] = {{0}};
    double atb[3] = {0, 0, 0};
    auto accumulate = [&](std::size_t i) {
      const double t = f.grid.node(i);
      const double row[3] = {scale / t, std::pow(scale / t, 2), std::pow(scale / t, 3)};
      for (int r = 0; r < 3; ++r) {
        atb[r] += row[r] * f.values[i].real();
        for (int s = 0; s < 3; ++s) ata[r][s] += row[r] * row[s];
      }
    };
    for (std::size_t i = 0; i < nb; ++i) {
      accumulate(i);
      accumulate(n - 1 - i);
    }
    // Solve the 3x3 normal equations by Cramer's rule.
    auto det3 = [](const double m[3][3]) {
      return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
             m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
             m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    const double d = det3(ata);
    if (std::abs(d) > 1e-30) {
      // The fitted basis is (scale/t)^{r+1}; c[r] is the plain 1/t^{r+1}
      // coefficient.
      for (int r = 0; r < 3; ++r) {
        double mod[3][3];
        std::copy(&ata[0][0], &ata[0][0] + 9, &mod[0][0]);
        for (int s = 0; s < 3; ++s) mod[s][r] = atb[s];
        c[r] = det3(mod) / d * std::pow(scale, r + 1);
      }
    }
  }

  const double safe_band = 2.0 * band_width;
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = f.grid.node(k);
    if (lam > f.grid.x_max - safe_band || lam < f.grid.x_min + safe_band) continue;
    if (c[0] == 0.0 && c[1] == 0.0 && c[2] == 0.0) continue;
    const std::size_t j0 = (k % 2 == 0) ? 1 : 0;
    const std::size_t je = ((n - 1 - k) % 2 == 1) ? n - 1 : n - 2;
    const double a_right = f.grid.node(je);
    const double a_left = -f.grid.node(j0);
    double corr = 0.0;
    for (int p = 1; p <= 3; ++p) {
      const double sign_left = (p % 2 == 1) ? 1.0 : -1.0;
      corr += c[p - 1] * (tail_integral(p, lam, a_right) +
                          sign_left * tail_integral(p, -lam, a_left));
    }
    g[k] += corr / kPi;
  }

  for (std::size_t k = 0; k < n; ++k) out.values[k] = Complex{g[k], 0.0};
  return out;
}

void field_to_csv(const ComplexField& f, std::ostream& out) {
  out << "x,re,im\n";
  char line[128];
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", f.grid.node(i),
                  f.values[i].real(), f.values[i].imag());
    out << line;
  }
}

ComplexField field_from_csv(std::istream& in) {
  std::string line;
  std::vector<double> xs;
  std::vector<Complex> vs;
  bool header_skipped = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!header_skipped) {
      header_skipped = true;
      if (line.find("x,") == 0 || line.find("x ,") == 0) continue;
    }
    double x = 0.0, re = 0.0, im = 0.0;
    if (std::sscanf(line.c_str(), "%lg,%lg,%lg", &x, &re, &im) != 3)
      throw ConfigError("field_from_csv: malformed row: " + line);
    xs.push_back(x);
    vs.push_back(Complex{re, im});
  }
  if (xs.size() < 16) throw ConfigError("field_from_csv: too few rows");
  const Grid g = Grid::make(xs.front(), xs.back(), xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (std::abs(xs[i] - g.node(i)) > 1e-9 * (1.0 + std::abs(xs[i])))
      throw ConfigError("field_from_csv: nodes are not uniformly spaced");
  return ComplexField{g, std::move(vs)};
}

void field_to_json(const ComplexField& f, std::ostream& out) {
  nlohmann::json j;
  j["grid"] = {{"x_min", f.grid.x_min}, {"x_max", f.grid.x_max}, {"n", f.grid.n}};
  std::vector<double> re(f.size()), im(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    re[i] = f.values[i].real();
    im[i] = f.values[i].imag();
  }
  j["re"] = re;
  j["im"] = im;
  out << j.dump();
}

ComplexField field_from_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("field_from_json: ") + e.what());
  }
  try {
    const Grid g = Grid::make(j.at("grid").at("x_min").get<double>(),
                              j.at("grid").at("x_max").get<double>(),
                              j.at("grid").at("n").get<std::size_t>());
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    if (re.size() != g.n || im.size() != g.n)
      throw ConfigError("field_from_json: array lengths disagree with grid");
    ComplexField out = ComplexField::zeros(g);
    for (std::size_t i = 0; i < g.n; ++i) out.values[i] = Complex{re[i], im[i]};
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("field_from_json: ") + e.what());
  }
}

}  // namespace zs
