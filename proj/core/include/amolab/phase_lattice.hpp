#pragma once

#include <vector>

#include "amolab/big_float.hpp"
#include "amolab/frequency.hpp"
#include "amolab/phase.hpp"

namespace amolab {

// Reduced phases theta + x*alpha mod 1 along the integer lattice, computed
// through an exact rational stand-in for alpha whose error is certified at
// construction.  All reductions mod 1 happen in exact arithmetic, so phases
// stay accurate for sites far from the origin.
class PhaseLattice {
 public:
  // max_abs_site bounds the |x| this lattice will be asked about; ln_abs_err
  // is the natural log of the admissible absolute phase error at the extreme
  // sites (log domain so precisions beyond binary64 range are expressible).
  PhaseLattice(const Frequency& freq, const Phase& theta, long long max_abs_site,
               double ln_abs_err = -69.0);

  double phase(long long x) const;            // in [0, 1)
  BigRat phase_rat(long long x) const;
  DynFloat phase_dyn(long long x) const;      // at the current DynFloat precision

  // Fills out[0..count) with phases of sites x0, x0+1, ..., stepping exactly.
  void fill(long long x0, long long count, double* out) const;

  double alpha() const { return alpha_double_; }
  long double alpha_ld() const { return alpha_ld_; }
  double theta_value() const;
  double ln_achieved_err() const { return ln_achieved_err_; }
  const Frequency& frequency() const { return freq_; }
  const Phase& theta() const { return theta_desc_; }

 private:
  Frequency freq_;
  Phase theta_desc_;
  BigRat alpha_mid_;
  BigRat theta_rat_;   // theta reduced mod 1
  double alpha_double_ = 0.0;
  long double alpha_ld_ = 0.0L;
  double ln_achieved_err_ = 0.0;

  BigRat frac(const BigRat& r) const;
};

}  // namespace amolab
