#include "amolab/phase_lattice.hpp"

#include <cmath>

namespace amolab {

namespace {

BigInt rat_floor(const BigRat& r) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  BigInt n = numerator(r), d = denominator(r);
  BigInt q = n / d;
  if (n < 0 && q * d != n) --q;
  return q;
}

}  // namespace

PhaseLattice::PhaseLattice(const Frequency& freq, const Phase& theta,
                           long long max_abs_site, double ln_abs_err)
    : freq_(freq), theta_desc_(theta) {
  const double mscale =
      static_cast<double>(max_abs_site) + std::fabs(static_cast<double>(theta.m)) / 2.0 + 2.0;
  auto [mid, ln_err] = freq_.midpoint_ln(ln_abs_err - std::log(mscale));
  alpha_mid_ = mid;
  ln_achieved_err_ = ln_err + std::log(mscale);
  alpha_double_ = mid.convert_to<double>();
  alpha_ld_ = mid.convert_to<long double>();
  if (theta.kind == Phase::Kind::Exact) {
    theta_rat_ = (theta.m * alpha_mid_ + theta.l) / 2;
  } else {
    theta_rat_ = BigRat(theta.real_value);
  }
  theta_rat_ = frac(theta_rat_);
}

BigRat PhaseLattice::frac(const BigRat& r) const { return r - BigRat(rat_floor(r)); }

BigRat PhaseLattice::phase_rat(long long x) const {
  return frac(theta_rat_ + x * alpha_mid_);
}

double PhaseLattice::phase(long long x) const {
  return phase_rat(x).convert_to<double>();
}

DynFloat PhaseLattice::phase_dyn(long long x) const {
  const BigRat r = phase_rat(x);
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  return DynFloat(numerator(r)) / DynFloat(denominator(r));
}

void PhaseLattice::fill(long long x0, long long count, double* out) const {
  BigRat r = phase_rat(x0);
  const BigRat one(1);
  for (long long i = 0; i < count; ++i) {
    out[i] = r.convert_to<double>();
    r += alpha_mid_;
    if (r >= one) r -= one;
  }
}

double PhaseLattice::theta_value() const { return theta_rat_.convert_to<double>(); }

}  // namespace amolab
