#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "zs/types.hpp"

/// Uniform real-line discretization plus the integral operators every other
/// module builds on: quadrature, the odd antiderivative D^{-1}, and the
/// principal-value Hilbert transform.
namespace zs {

/// Uniform grid on [x_min, x_max] with n nodes including both endpoints.
struct Grid {
  double x_min = -20.0;
  double x_max = 20.0;
  std::size_t n = 4096;

  /// Validates x_min < x_max and n >= 16.
  static Grid make(double x_min, double x_max, std::size_t n);

  double dx() const { return (x_max - x_min) / static_cast<double>(n - 1); }
  double node(std::size_t i) const { return x_min + dx() * static_cast<double>(i); }
  std::size_t nearest_node(double x) const;

  bool operator==(const Grid&) const = default;
};

/// Complex samples, one per grid node.
struct ComplexField {
  Grid grid;
  std::vector<Complex> values;

  static ComplexField zeros(const Grid& g);
  static ComplexField sample(const Grid& g, const std::function<Complex(double)>& f);

  std::size_t size() const { return values.size(); }
  double max_abs() const;
  bool all_finite() const;
};

/// Composite Simpson integral over the full grid (3/8 rule absorbs an odd
/// interval count). Rejects grids with fewer than 3 nodes.
Complex quadrature(const ComplexField& f);

/// Same rule restricted to nodes [i_lo, i_hi]; needs i_hi - i_lo >= 2.
Complex quadrature_range(const ComplexField& f, std::size_t i_lo, std::size_t i_hi);

/// Fourth-order centered first derivative, one-sided at the boundary nodes.
ComplexField derivative(const ComplexField& f);

struct AntiderivativeResult {
  ComplexField field;
  bool boundary_decay_ok = true;
  double boundary_magnitude = 0.0;
};

/// D^{-1} f (x) = (1/2) [ integral_{x_min}^{x} f - integral_{x}^{x_max} f ],
/// cumulative cubic quadrature per cell. Flags boundary magnitudes above
/// decay_tol instead of failing; the caller decides.
AntiderivativeResult antiderivative_D(const ComplexField& f, double decay_tol = 1e-10);

/**
 * Principal-value Hilbert transform with the convention
 *
 *     H[f](x) = (1/pi) p.v. integral f(t) / (t - x) dt,
 *
 * so boundary values of functions analytic and decaying in the upper half
 * plane satisfy Re = +H[Im]. The singular node is excluded by the
 * odd-offset trapezoid rule (spacing 2 dx), which is spectrally accurate for
 * smooth data. Mass outside the grid is modelled by fitting
 * c1/t + c2/t^2 + c3/t^3 on the outer bands and adding the tail integrals in
 * closed form; without this, a second application on slowly decaying output
 * would be off at the percent level. Nodes within two band widths of the
 * boundary keep the uncorrected rule.
 *
 * Requires real-valued, decaying input: max |Im f| <= 1e-9 (1 + max |f|) and
 * boundary |f| <= 0.05 max |f|.
 */
ComplexField hilbert_transform(const ComplexField& f);

/// CSV with header "x,re,im", one row per node, 17 significant digits.
void field_to_csv(const ComplexField& f, std::ostream& out);
ComplexField field_from_csv(std::istream& in);

/// JSON object {"grid": {"x_min", "x_max", "n"}, "re": [...], "im": [...]}.
void field_to_json(const ComplexField& f, std::ostream& out);
ComplexField field_from_json(std::istream& in);

}  // namespace zs
