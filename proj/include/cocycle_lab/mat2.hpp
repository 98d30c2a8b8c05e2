#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace cocycle_lab {

/// Real 2x2 matrix, row-major: [[a11, a12], [a21, a22]].
struct Mat2 {
  double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 zero() { return {0.0, 0.0, 0.0, 0.0}; }
  static constexpr Mat2 diag(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }

  constexpr double det() const { return a11 * a22 - a12 * a21; }
  constexpr double trace() const { return a11 + a22; }
  constexpr double frobenius_sq() const {
    return a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22;
  }
  bool finite() const {
    return std::isfinite(a11) && std::isfinite(a12) && std::isfinite(a21) && std::isfinite(a22);
  }

  constexpr bool operator==(const Mat2&) const = default;

  constexpr Mat2& operator*=(double s) {
    a11 *= s; a12 *= s; a21 *= s; a22 *= s;
    return *this;
  }
};

constexpr Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
          a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}
constexpr Mat2 operator*(double s, Mat2 m) { return m *= s; }
constexpr Mat2 operator+(const Mat2& a, const Mat2& b) {
  return {a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
}
constexpr Mat2 operator-(const Mat2& a, const Mat2& b) {
  return {a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
}

/// m applied to the column vector v.
constexpr std::array<double, 2> apply(const Mat2& m, const std::array<double, 2>& v) {
  return {m.a11 * v[0] + m.a12 * v[1], m.a21 * v[0] + m.a22 * v[1]};
}

/// Largest singular value in closed form,
///   (hypot(a11 + a22, a21 - a12) + hypot(a11 - a22, a21 + a12)) / 2,
/// which equals sqrt((f + sqrt(f^2 - 4 det^2)) / 2) for f the squared
/// Frobenius norm but does not cancel when the two singular values are
/// close. Throws invalid_input on non-finite entries.
double spectral_norm(const Mat2& m);

/// Same as spectral_norm without the finiteness check; used in hot loops.
inline double spectral_norm_unchecked(const Mat2& m) {
  return 0.5 * (std::hypot(m.a11 + m.a22, m.a21 - m.a12) + std::hypot(m.a11 - m.a22, m.a21 + m.a12));
}

/// Inverse; det == 1 inputs return the adjugate exactly. Throws singular_matrix
/// when |det| <= 1e-300.
Mat2 inverse(const Mat2& m);

/// |det - 1| <= 1e-12 * max(1, frobenius^2).
bool is_sl2(const Mat2& m, double rel_tol = 1e-12);

}  // namespace cocycle_lab
