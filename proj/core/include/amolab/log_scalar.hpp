#pragma once

#include <cmath>
#include <limits>

namespace amolab {

// Sign + log-magnitude representation of an extended-range real.
// Represents sign * exp(logmag); sign == 0 means exactly zero and the
// stored logmag is ignored by every operation.
struct LogScalar {
  int sign = 0;
  double logmag = -std::numeric_limits<double>::infinity();

  static LogScalar zero() { return {}; }
  static LogScalar one() { return {1, 0.0}; }

  static LogScalar from_real(double x) {
    if (x > 0.0) return {1, std::log(x)};
    if (x < 0.0) return {-1, std::log(-x)};
    return {};
  }

  static LogScalar from_log(int sign, double logmag) {
    if (sign == 0) return {};
    return {sign > 0 ? 1 : -1, logmag};
  }

  bool is_zero() const { return sign == 0; }

  // May overflow/underflow binary64; callers that care stay in log domain.
  double to_real() const {
    if (sign == 0) return 0.0;
    return sign * std::exp(logmag);
  }

  LogScalar operator-() const {
    if (sign == 0) return {};
    return {-sign, logmag};
  }

  LogScalar abs() const {
    if (sign == 0) return {};
    return {1, logmag};
  }
};

inline LogScalar operator*(LogScalar a, LogScalar b) {
  if (a.sign == 0 || b.sign == 0) return {};
  return {a.sign * b.sign, a.logmag + b.logmag};
}

inline LogScalar operator/(LogScalar a, LogScalar b) {
  if (b.sign == 0) return {a.sign, std::numeric_limits<double>::infinity()};
  if (a.sign == 0) return {};
  return {a.sign * b.sign, a.logmag - b.logmag};
}

struct LogAddResult {
  LogScalar value;
  bool cancellation = false;  // opposite signs with |logmag difference| < 1e-12
};

// a + b via the larger-magnitude pivot.  Exact sign handling: equal
// magnitudes with opposite signs collapse to the zero element.
inline LogAddResult log_add_flagged(LogScalar a, LogScalar b) {
  if (a.sign == 0) return {b, false};
  if (b.sign == 0) return {a, false};
  const bool opposite = (a.sign != b.sign);
  if (a.logmag == b.logmag && opposite) return {LogScalar::zero(), false};
  const LogScalar& big = (a.logmag >= b.logmag) ? a : b;
  const LogScalar& small = (a.logmag >= b.logmag) ? b : a;
  const double diff = small.logmag - big.logmag;  // <= 0
  const bool flag = opposite && (-diff < 1e-12);
  const double t = std::log1p((opposite ? -1.0 : 1.0) * std::exp(diff));
  return {LogScalar{big.sign, big.logmag + t}, flag};
}

inline LogScalar operator+(LogScalar a, LogScalar b) {
  return log_add_flagged(a, b).value;
}

inline LogScalar operator-(LogScalar a, LogScalar b) { return a + (-b); }

inline LogScalar& operator+=(LogScalar& a, LogScalar b) { return a = a + b; }
inline LogScalar& operator*=(LogScalar& a, LogScalar b) { return a = a * b; }

inline bool abs_less(LogScalar a, LogScalar b) {
  if (b.sign == 0) return false;
  if (a.sign == 0) return true;
  return a.logmag < b.logmag;
}

inline bool operator<(LogScalar a, LogScalar b) {
  if (a.sign != b.sign) return a.sign < b.sign;
  if (a.sign == 0) return false;
  return a.sign > 0 ? a.logmag < b.logmag : a.logmag > b.logmag;
}

inline bool abs_leq(LogScalar a, LogScalar b) { return !abs_less(b, a); }

// log(e^s - 1) for s > 0, stable for both tails.
inline double log_expm1(double s) {
  if (s > 36.0) return s + std::log1p(-std::exp(-s));
  return std::log(std::expm1(s));
}

}  // namespace amolab
