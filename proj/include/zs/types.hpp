#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

/// Small fixed-size complex linear algebra shared by every module: 2-vectors,
/// 2x2 matrices, the traceless matrix exponential in closed form, and the
/// error types the library throws.
namespace zs {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// Raised when input files, parameter maps, or CLI options are malformed.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a computation loses numerical meaning (overflow, NaN,
/// branch-tracking failure). Maps to a dedicated process exit code.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

struct Vec2 {
  Complex c1{0.0, 0.0};
  Complex c2{0.0, 0.0};

  Vec2 operator+(const Vec2& o) const { return {c1 + o.c1, c2 + o.c2}; }
  Vec2 operator-(const Vec2& o) const { return {c1 - o.c1, c2 - o.c2}; }
  Vec2 operator*(Complex s) const { return {c1 * s, c2 * s}; }
  double max_abs() const { return std::max(std::abs(c1), std::abs(c2)); }
  Complex sum() const { return c1 + c2; }
};

/// Row-major 2x2 complex matrix.
struct Mat2 {
  Complex m11{0.0, 0.0}, m12{0.0, 0.0}, m21{0.0, 0.0}, m22{0.0, 0.0};

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 diag(Complex a, Complex b) { return {a, 0.0, 0.0, b}; }

  Mat2 operator+(const Mat2& o) const {
    return {m11 + o.m11, m12 + o.m12, m21 + o.m21, m22 + o.m22};
  }
  Mat2 operator-(const Mat2& o) const {
    return {m11 - o.m11, m12 - o.m12, m21 - o.m21, m22 - o.m22};
  }
  Mat2 operator*(Complex s) const { return {m11 * s, m12 * s, m21 * s, m22 * s}; }
  Mat2 operator*(const Mat2& o) const {
    return {m11 * o.m11 + m12 * o.m21, m11 * o.m12 + m12 * o.m22,
            m21 * o.m11 + m22 * o.m21, m21 * o.m12 + m22 * o.m22};
  }
  Vec2 operator*(const Vec2& v) const {
    return {m11 * v.c1 + m12 * v.c2, m21 * v.c1 + m22 * v.c2};
  }

  Complex det() const { return m11 * m22 - m12 * m21; }
  Complex trace() const { return m11 + m22; }
  Mat2 transpose() const { return {m11, m21, m12, m22}; }
  Mat2 conj() const {
    return {std::conj(m11), std::conj(m12), std::conj(m21), std::conj(m22)};
  }
  double max_abs() const {
    return std::max(std::max(std::abs(m11), std::abs(m12)),
                    std::max(std::abs(m21), std::abs(m22)));
  }
  Mat2 inverse() const {
    const Complex d = det();
    return Mat2{m22, -m12, -m21, m11} * (1.0 / d);
  }
};

inline Vec2 conj(const Vec2& v) { return {std::conj(v.c1), std::conj(v.c2)}; }

/// sigma_1 * v: swaps the components.
inline Vec2 sigma1(const Vec2& v) { return {v.c2, v.c1}; }

/// sigma_1 * M * sigma_1: swaps rows and columns simultaneously.
inline Mat2 sigma1_conjugate(const Mat2& m) { return {m.m22, m.m21, m.m12, m.m11}; }

/// sigma_3 * M.
inline Mat2 sigma3_times(const Mat2& m) { return {m.m11, m.m12, -m.m21, -m.m22}; }

/// u^T J w with J = [[0,1],[-1,0]]; the 2x2 Wronskian u1 w2 - u2 w1.
inline Complex wronskian(const Vec2& u, const Vec2& w) {
  return u.c1 * w.c2 - u.c2 * w.c1;
}

/// sinh(z)/z, stable near z = 0.
inline Complex sinhc(Complex z) {
  if (std::abs(z) < 1e-3) {
    const Complex z2 = z * z;
    return 1.0 + z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sinh(z) / z;
}

/// exp(M) for traceless M, via exp(M) = cosh(mu) I + sinhc(mu) M with
/// mu^2 = -det(M). Exactly unimodular up to rounding.
inline Mat2 exp_traceless(const Mat2& m) {
  const Complex mu = std::sqrt(-m.det());
  const Complex ch = std::cosh(mu);
  const Complex sh = sinhc(mu);
  return {ch + sh * m.m11, sh * m.m12, sh * m.m21, ch + sh * m.m22};
}

/// E(theta) = exp(-i theta sigma_3) = diag(e^{-i theta}, e^{+i theta}).
inline Mat2 phase_matrix(Complex theta) {
  return Mat2::diag(std::exp(-kI * theta), std::exp(kI * theta));
}

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

/// Distance between two angles on the circle.
inline double circle_distance(double a, double b) {
  return std::abs(wrap_angle(a - b));
}

inline bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace zs
