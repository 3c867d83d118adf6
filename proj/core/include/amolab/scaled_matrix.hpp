#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "amolab/log_scalar.hpp"

namespace amolab {

// Plain 2x2 double matrix, used where magnitudes stay in binary64 range.
struct Mat2 {
  double a00 = 1, a01 = 0, a10 = 0, a11 = 1;

  static Mat2 identity() { return {}; }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a00 * y.a00 + x.a01 * y.a10, x.a00 * y.a01 + x.a01 * y.a11,
            x.a10 * y.a00 + x.a11 * y.a10, x.a10 * y.a01 + x.a11 * y.a11};
  }
  friend Mat2 operator+(const Mat2& x, const Mat2& y) {
    return {x.a00 + y.a00, x.a01 + y.a01, x.a10 + y.a10, x.a11 + y.a11};
  }
  friend Mat2 operator-(const Mat2& x, const Mat2& y) {
    return {x.a00 - y.a00, x.a01 - y.a01, x.a10 - y.a10, x.a11 - y.a11};
  }
  double max_abs() const {
    return std::max(std::max(std::fabs(a00), std::fabs(a01)),
                    std::max(std::fabs(a10), std::fabs(a11)));
  }
  double det() const { return a00 * a11 - a01 * a10; }
};

// Spectral norm (largest singular value) of a 2x2, closed form.
inline double spectral_norm(const Mat2& m) {
  const double f2 = m.a00 * m.a00 + m.a01 * m.a01 + m.a10 * m.a10 + m.a11 * m.a11;
  const double d = m.det();
  const double disc = std::max(0.0, f2 * f2 - 4.0 * d * d);
  return std::sqrt(0.5 * (f2 + std::sqrt(disc)));
}

// Rescaled 2x2 with entries kept near unit size: the represented matrix is
// e^{logscale} * entries, with max-abs entry in [1/2, 2] after every
// normalization (power-of-two scaling, so entries are never rounded).
//
// The determinant of long hyperbolic products shrinks below the entry
// roundoff floor, so it is also carried algebraically: factor determinants
// are well conditioned and multiply exactly in log form.
struct ScaledMatrix2 {
  Mat2 entries;
  double logscale = 0.0;
  int det_sign = 1;
  double det_log = 0.0;  // ln|det| of the represented matrix

  static ScaledMatrix2 identity() { return {Mat2::identity(), 0.0, 1, 0.0}; }

  static ScaledMatrix2 from(const Mat2& m, double logscale = 0.0) {
    ScaledMatrix2 r{m, logscale, 0, 0.0};
    const double d = m.det();
    if (d > 0) {
      r.det_sign = 1;
      r.det_log = std::log(d) + 2.0 * logscale;
    } else if (d < 0) {
      r.det_sign = -1;
      r.det_log = std::log(-d) + 2.0 * logscale;
    } else {
      r.det_sign = 0;
      r.det_log = -std::numeric_limits<double>::infinity();
    }
    r.normalize();
    return r;
  }

  void normalize() {
    const double s = entries.max_abs();
    if (s == 0.0 || !std::isfinite(s)) return;
    const int e = std::ilogb(s);
    if (e == 0) return;
    const double f = std::ldexp(1.0, -e);
    entries.a00 *= f;
    entries.a01 *= f;
    entries.a10 *= f;
    entries.a11 *= f;
    logscale += e * std::log(2.0);
  }

  // log of the spectral norm of the represented matrix.
  double log_norm() const { return logscale + std::log(spectral_norm(entries)); }

  // Determinant of the represented matrix (tracked form).
  LogScalar log_det() const { return LogScalar::from_log(det_sign, det_log); }

  // Naive recovery det(entries) e^{2 logscale}; cancellation-limited, only
  // meaningful while |det| is within roundoff of the entry scale.
  LogScalar det_from_entries() const {
    LogScalar r = LogScalar::from_real(entries.det());
    if (r.sign != 0) r.logmag += 2.0 * logscale;
    return r;
  }

  LogScalar entry(int i, int j) const {
    const double v = (i == 0) ? (j == 0 ? entries.a00 : entries.a01)
                              : (j == 0 ? entries.a10 : entries.a11);
    LogScalar r = LogScalar::from_real(v);
    if (r.sign != 0) r.logmag += logscale;
    return r;
  }
};

inline ScaledMatrix2 operator*(const ScaledMatrix2& x, const ScaledMatrix2& y) {
  ScaledMatrix2 r{x.entries * y.entries, x.logscale + y.logscale,
                  x.det_sign * y.det_sign, x.det_log + y.det_log};
  r.normalize();
  return r;
}

// Difference of two represented matrices, computed after aligning scales.
inline ScaledMatrix2 sub(const ScaledMatrix2& x, const ScaledMatrix2& y) {
  const double s = std::max(x.logscale, y.logscale);
  const double fx = std::exp(x.logscale - s);
  const double fy = std::exp(y.logscale - s);
  Mat2 d{fx * x.entries.a00 - fy * y.entries.a00, fx * x.entries.a01 - fy * y.entries.a01,
         fx * x.entries.a10 - fy * y.entries.a10, fx * x.entries.a11 - fy * y.entries.a11};
  return ScaledMatrix2::from(d, s);
}

// Matrix-vector product in LogScalar arithmetic.
inline std::array<LogScalar, 2> apply(const ScaledMatrix2& m,
                                      const std::array<LogScalar, 2>& v) {
  std::array<LogScalar, 2> out;
  out[0] = m.entry(0, 0) * v[0] + m.entry(0, 1) * v[1];
  out[1] = m.entry(1, 0) * v[0] + m.entry(1, 1) * v[1];
  return out;
}

}  // namespace amolab
