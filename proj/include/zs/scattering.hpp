#pragma once

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "zs/potential.hpp"
#include "zs/types.hpp"

/**
 * The auxiliary linear problem f' = V(x, lambda) f with
 *
 *     V = -(i lambda / 2) sigma_3 + [[0, conj(psi)], [psi, 0]],
 *
 * integrated by a fourth-order commutator-free Magnus scheme. Each cell step
 * factors the free phase E(lambda h / 4) exactly, so the spectral parameter
 * never limits the step size; the two inner exponentials involve only the
 * recentered off-diagonal part and are evaluated in closed form. Every step
 * is exactly unimodular and, for real lambda, commutes with the sigma_1
 * conjugation symmetry, so |a|^2 - |b|^2 = 1 holds structurally.
 */
namespace zs {

/// M(x_to, x_from, lambda) = exp(log_scale) * unit. The scaled form keeps
/// entries representable for large |Im lambda| * (x_to - x_from).
struct TransferMatrix {
  Mat2 unit;
  double log_scale = 0.0;
  Complex lambda;
  double x_from = 0.0;
  double x_to = 0.0;

  /// exp(log_scale) * unit; throws NumericalError if it cannot be represented.
  Mat2 value() const;
  /// |det M - 1| evaluated in scale-compensated form.
  double unimodularity_defect() const;
  /// T = E(lambda x_to / 2)^{-1} M E(lambda x_from / 2); bounded for real
  /// lambda, where its limit as the interval grows is [[a, conj b],[b, conj a]].
  Mat2 reduced_view() const;
};

/// Integrates M' = V M, M(x_from) = I, snapping both ends to grid nodes.
/// substeps > 1 subdivides each cell (requires an analytic potential).
TransferMatrix transfer_matrix(const Potential& p, Complex lambda, double x_from,
                               double x_to, unsigned substeps = 1);

enum class JostColumnKind { plus1, plus2, minus1, minus2 };
enum class HalfPlane { upper, lower };

/**
 * One Jost column on the whole grid, log-scaled per node:
 * j(x_i) = exp(log_scale[i]) * unit[i]. Columns normalized at -infinity
 * (minus1, minus2) integrate upward from x_min, columns normalized at
 * +infinity integrate downward from x_max; each starts from its free
 * asymptote E(lambda x / 2) column with the magnitude held in log_scale.
 */
struct JostSolution {
  Grid grid;
  Complex lambda;
  JostColumnKind column = JostColumnKind::minus1;
  HalfPlane half_plane = HalfPlane::upper;
  std::vector<Vec2> unit;
  std::vector<double> log_scale;

  /// exp(log_scale[i]) * unit[i]; throws NumericalError on overflow.
  Vec2 value(std::size_t i) const;
};

/// The analytic pair for the half-plane of lambda: (j_minus^(1), j_plus^(2))
/// for Im lambda >= 0, (j_minus^(2), j_plus^(1)) for Im lambda < 0. Real
/// lambda is treated as the boundary value lambda + i0 of the upper pair.
struct JostPair {
  JostSolution minus;
  JostSolution plus;
};

JostPair jost_solutions(const Potential& p, Complex lambda, unsigned substeps = 1);

/// Any single column. For columns that decay off the real axis only in the
/// other half-plane, lambda must be real (boundary-value interpretation).
JostSolution jost_column(const Potential& p, Complex lambda, JostColumnKind kind,
                         unsigned substeps = 1);

/// Residual of the ODE at node i, measured in the frame with the free phase
/// removed (finite differences over a 5-node window, scale-relative).
double ode_residual(const JostSolution& j, const Potential& p, std::size_t i);

/// exp(s_u + s_w) * (u1 w2 - u2 w1) at node i, exponent-compensated.
Complex scaled_wronskian(const JostSolution& u, const JostSolution& w, std::size_t i);

/// Scattering coefficients on a real lambda grid plus cached upper-half-plane
/// values of a.
struct ScatteringData {
  std::vector<double> lambda_grid;
  std::vector<Complex> a;
  std::vector<Complex> b;
  std::vector<std::pair<Complex, Complex>> a_upper;
};

/// a from the Wronskian of the Jost pair (checked x-independent within
/// sc_tol), b from the scattering-rule asymptotics of the minus column at
/// x_max. jobs > 1 parallelizes over lambda.
ScatteringData scattering_coefficients(const Potential& p,
                                       const std::vector<double>& lambda_grid,
                                       unsigned jobs = 1);

/// a(lambda) anywhere in the closed upper half plane (or lower, by the
/// reflected pair).
Complex a_coefficient(const Potential& p, Complex lambda, unsigned substeps = 1);

/// b(lambda) on the real axis.
Complex b_coefficient(const Potential& p, double lambda);

/// Evaluates a at the given points and appends to sd.a_upper.
void fill_a_upper(const Potential& p, ScatteringData& sd, std::span<const Complex> points,
                  unsigned substeps = 2);

/// Max-norm residuals over x of the gluing identity H- = H+ S and its dual
/// H-* = S^{-1} H+*, assembled from all four columns at real lambda.
struct GluingReport {
  double rh_residual = 0.0;
  double arh_residual = 0.0;
};

GluingReport gluing_check(const Potential& p, double lambda);

/// p_infinity = (i/2) log a, branch-tracked from the largest |lambda| down.
struct TraceSample {
  Complex lambda;
  Complex p_inf;
  double rel_err1 = 0.0;  // against -h1/lambda
  double rel_err2 = 0.0;  // against -h1/lambda - h2/lambda^2
  double rel_err3 = 0.0;  // three terms
};

struct TraceReport {
  std::vector<TraceSample> samples;
};

/// Requires sd.a_upper to cover the ray points (fill_a_upper). Throws
/// NumericalError on branch discontinuity along the ray.
TraceReport p_infinity_and_trace(const ScatteringData& sd, std::span<const Complex> ray,
                                 const Hamiltonians& h);

/// Leading large-lambda coefficients of the Jost columns at x, extracted by
/// polynomial extrapolation in 1/lambda along an upper ray and compared with
/// their closed forms:
///   e^{-i lambda x/2} j_plus^(2)  = (g1/lambda, 1 + k1/lambda) + O(lambda^-2)
///   e^{+i lambda x/2} j_minus^(1) = (1 + h1/lambda, f1/lambda) + O(lambda^-2)
/// with g1 = -i conj(psi(x)), k1 = i int_x^inf |psi|^2,
///      h1 = i int_-inf^x |psi|^2, f1 = i psi(x).
struct AsymptoticCoefficients {
  Complex g1, k1, f1, h1;
  Complex g1_ref, k1_ref, f1_ref, h1_ref;
  double max_error = 0.0;
};

AsymptoticCoefficients asymptotic_coefficients(const Potential& p, double x,
                                               std::span<const Complex> ray_samples);

/// CSV columns: lambda, re_a, im_a, re_b, im_b (17 significant digits).
void scattering_to_csv(const ScatteringData& sd, std::ostream& out);
void scattering_to_json(const ScatteringData& sd, std::ostream& out);

}  // namespace zs
