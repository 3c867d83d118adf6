#pragma once

// Independent reference computations for the test suites.  Everything here
// avoids the library's own evaluation paths: 200-digit arithmetic, exact
// integer continued fractions of quadratic surds, dense linear algebra on
// small tridiagonal blocks, and brute-force grid searches.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "amolab/big_float.hpp"
#include "amolab/log_scalar.hpp"
#include "amolab/scaled_matrix.hpp"

namespace oracles {

namespace mp = boost::multiprecision;
using Oracle = mp::number<mp::mpfr_float_backend<200>, mp::et_off>;
using amolab::BigInt;

inline double oracle_log_abs(const Oracle& x) { return amolab::log_abs(x); }

// Exact partial quotients of (p0 + sqrt(d))/q0 (irrational, d not a square),
// starting from a_0; the fractional-part convention drops a_0 = floor(x).
inline std::vector<BigInt> surd_quotients(BigInt p0, BigInt q0, BigInt d, int count) {
  BigInt s = sqrt(d);  // floor sqrt
  if (s * s == d) throw std::runtime_error("d is a perfect square");
  // Normalize so q | d - p^2.
  if ((d - p0 * p0) % q0 != 0) {
    p0 *= abs(q0);
    d *= q0 * q0;
    q0 *= abs(q0);
    s = sqrt(d);
  }
  std::vector<BigInt> out;
  BigInt p = p0, q = q0;
  for (int i = 0; i <= count; ++i) {
    BigInt a;
    if (q > 0) {
      a = (p + s) / q;
      if (p + s < 0 && (p + s) % q != 0) --a;
    } else {
      a = (p + s + 1) / q;
      if ((p + s + 1) % q != 0 && (p + s + 1) > 0) --a;
    }
    if (i > 0) out.push_back(a);
    p = a * q - p;
    q = (d - p * p) / q;
  }
  return out;
}

// Dense determinant of the tridiagonal block diag(d_i) with unit off-diagonals,
// by long double LU without pivoting growth issues at these sizes.
inline long double dense_tridiag_det(const std::vector<double>& diag) {
  const size_t n = diag.size();
  std::vector<std::vector<long double>> a(n, std::vector<long double>(n, 0.0L));
  for (size_t i = 0; i < n; ++i) {
    a[i][i] = diag[i];
    if (i + 1 < n) {
      a[i][i + 1] = 1.0L;
      a[i + 1][i] = 1.0L;
    }
  }
  long double det = 1.0L;
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    for (size_t r = c + 1; r < n; ++r) {
      if (std::fabs((double)a[r][c]) > std::fabs((double)a[piv][c])) piv = r;
    }
    if (a[piv][c] == 0.0L) return 0.0L;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (size_t r = c + 1; r < n; ++r) {
      const long double f = a[r][c] / a[c][c];
      for (size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

// Solve (T - 0) x = e_col for tridiagonal T (diag + unit offdiag), dense LU.
inline std::vector<double> dense_tridiag_solve_column(const std::vector<double>& diag,
                                                      size_t col) {
  const size_t n = diag.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i) {
    a[i][i] = diag[i];
    if (i + 1 < n) {
      a[i][i + 1] = 1.0;
      a[i + 1][i] = 1.0;
    }
  }
  std::vector<double> b(n, 0.0);
  b[col] = 1.0;
  // Gaussian elimination with partial pivoting.
  std::vector<size_t> perm(n);
  for (size_t i = 0; i < n; ++i) perm[i] = i;
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    for (size_t r = c + 1; r < n; ++r) {
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    }
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      b[r] -= f * b[c];
      for (size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  for (size_t i = n; i-- > 0;) {
    double s = b[i];
    for (size_t k = i + 1; k < n; ++k) s -= a[i][k] * b[k];
    b[i] = s / a[i][i];
  }
  return b;
}

// Random SL(2,R) matrix with entries of moderate size.
inline amolab::Mat2 random_sl2(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  amolab::Mat2 m{u(rng), u(rng), u(rng), 0.0};
  // solve for a11 so that det = 1: a00*a11 - a01*a10 = 1
  while (std::fabs(m.a00) < 0.1) m.a00 = u(rng);
  m.a11 = (1.0 + m.a01 * m.a10) / m.a00;
  return m;
}

}  // namespace oracles
