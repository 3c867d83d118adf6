#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <cmath>

#include "amolab/log_scalar.hpp"

namespace amolab {

namespace mp = boost::multiprecision;

// Exact integers and rationals (GMP-backed).
using BigInt = mp::mpz_int;
using BigRat = mp::mpq_rational;

// Fixed high-precision real (~332 bits), the default high-precision mode.
using BigFloat = mp::number<mp::mpfr_float_backend<100>, mp::et_off>;

// Runtime-precision real for deep eigenfunction propagation.  Precision is
// process-global state; set it through PrecisionGuard on a single thread.
using DynFloat = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;

class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned digits10)
      : saved_(DynFloat::default_precision()) {
    DynFloat::default_precision(digits10);
  }
  ~PrecisionGuard() { DynFloat::default_precision(saved_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_;
};

// ln|x| extracted through frexp so huge exponents survive the trip to double.
template <class F>
double log_abs(const F& x) {
  if (x == 0) return -std::numeric_limits<double>::infinity();
  int e = 0;
  F m = frexp(abs(x), &e);
  return std::log(m.template convert_to<double>()) + e * std::log(2.0);
}

template <class F>
LogScalar to_log_scalar(const F& x) {
  if (x == 0) return LogScalar::zero();
  return LogScalar::from_log(x > 0 ? 1 : -1, log_abs(x));
}

// ln of a positive big integer.
inline double log_big(const BigInt& q) {
  if (q <= 0) return -std::numeric_limits<double>::infinity();
  const auto bits = msb(q);
  if (bits < 900) return std::log(q.convert_to<double>());
  const BigInt top = q >> (bits - 52);
  return std::log(top.convert_to<double>()) + static_cast<double>(bits - 52) * std::log(2.0);
}

// ln of a positive rational.
inline double log_big(const BigRat& r) {
  return log_big(numerator(r)) - log_big(denominator(r));
}

}  // namespace amolab
