#pragma once

#include <string>
#include <vector>

#include "amolab/frequency.hpp"
#include "amolab/greens.hpp"
#include "amolab/lagrange.hpp"
#include "amolab/phase.hpp"

namespace amolab {

enum class SchemeKind { HalfSite, FullSite };

// Lagrange interpolation scheme around a resonant site: the node intervals
// I1 (near the origin) and I2 (near the resonant site), with
// n0 = least index such that q_{n-n0} <= (eps/2)(c - 2 eps) q_n,
// s  = largest integer with s q_{n-n0} <= (c - 2 eps) q_n,
// c = 1/8 for half-site schemes and 1/4 for full-site ones.
struct LagrangeScheme {
  int n = 0;
  SchemeKind kind = SchemeKind::HalfSite;
  long long j = 0;
  double epsilon = 0.0;
  double c = 0.0;
  int n0 = 0;
  long long s = 0;
  long long q_n = 0;
  long long q_nn0 = 0;      // q_{n - n0}
  Interval I1, I2;
  long long k = 0;          // 6 s q_{n-n0} - 1; |I1| + |I2| = k + 1

  std::vector<long long> nodes() const;  // I1 then I2, ascending within each
};

// Errors: ScaleTooSmall when no valid n0 exists (or eps >= c/2),
// RangeExceeded when |j| > 2 b_{n+1}/q_n + 10.
LagrangeScheme build_scheme(const Frequency& freq, int n, long long j, SchemeKind kind,
                            double epsilon);

struct SineMinRecord {
  long long m = 0;
  int block = 0;               // 0: I1 (claim 1) / left block (claim 2); 1: the rest
  double min_phase_log = 0.0;  // min over l in I1 u I2 of ln|sin pi(2 theta + (l+m) alpha)|
  long long phase_achievers = 0;
  double min_freq_log = 0.0;   // min over l != m of ln|sin pi (l - m) alpha|
  long long freq_achievers = 0;
  double phase_floor_log = 0.0;
  double freq_floor_log = 0.0;
  bool phase_pass = false, freq_pass = false;
  long long phase_achiever_cap = 0;  // 0 when the claim makes no count assertion
  double lag = 0.0, lag_bound = 0.0;
  bool lag_pass = false;
};

struct SineMinimaAudit {
  std::vector<SineMinRecord> records;
  bool floors_pass = true;
  bool achievers_pass = true;
  bool achievers_applicable = false;  // beta_j q_n dominates C ln q_n
  bool lag_pass = true;
  double beta_j = 0.0;
  std::string lag_method;
};

// Audits the sine-minima floors, the near-extremal achiever counts and the
// Lag_m conclusions for the scheme.  theta must be completely resonant.
SineMinimaAudit sine_minima_audit(const LagrangeScheme& scheme, const Frequency& freq,
                                  const Phase& theta, double C);

}  // namespace amolab
