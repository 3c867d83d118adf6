#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "amolab/eigenfunction.hpp"
#include "amolab/operator_params.hpp"
#include "amolab/phase_lattice.hpp"

namespace amolab {

struct Interval {
  long long lo = 0, hi = 0;
  long long length() const { return hi - lo + 1; }
};

struct BoxDeterminant {
  Interval interval;
  LogScalar value;
  double theta_base = 0.0;   // phase at the left edge
  bool cancellation = false; // near-cancellation seen during the recursion
};

struct EdgeEntries {
  LogScalar g_left;   // G(x1, y), sign convention (-1)^{y-x1} P_{[y+1,x2]} / P
  LogScalar g_right;  // G(y, x2), sign convention (-1)^{x2-y} P_{[x1,y-1]} / P
  bool cancellation = false;
};

struct Klem2Bound {
  Interval interval;
  double measured_log = 0.0;
  double claimed_log = 0.0;
  bool pass = false;
  bool cancellation = false;
};

struct Klem2Audit {
  Klem2Bound left_half;    // [-x, p1] vs L(q_n/2 - x) + C eps q_n
  Klem2Bound right_half;   // [-p1, x] vs the same bound
  Klem2Bound full;         // [-x, p2] vs L(q_n - x) + C eps q_n
};

struct NumeratorAudit {
  Interval interval;
  LogScalar measured;
  LogScalar bound;     // e^{(L+eps) |x2-x1|}
  bool pass = false;
  bool exempt = false; // below the minimum audited length
};

struct GreensOptions {
  long long max_abs_site = 1 << 20;
  long long length_budget = 5'000'000;
  double cancellation_rel = 1e-12;  // |P| below this times the running scale
};

// Restriction determinants P_{[x1,x2]} and Green's-function edge entries for
// one (lambda, alpha, theta, E) instance.  All determinants run the
// three-term recursion P_k = (E - v) P_{k-1} - P_{k-2} in LogScalar
// arithmetic with sign tracking.
class GreensEngine {
 public:
  using Options = GreensOptions;

  explicit GreensEngine(OperatorParams params, Options opt = GreensOptions());

  const OperatorParams& params() const { return params_; }
  const PhaseLattice& lattice() const { return *lattice_; }

  // P_{[x1,x2]}; with phase_override the recursion runs at raw phases
  // phase_override + j*alpha instead of lattice phases (the shift-identity
  // route P_k(theta + x1 alpha)).
  BoxDeterminant box_det(Interval iv, std::optional<double> phase_override = {}) const;

  // |G(x1,y)| = |P_{[y+1,x2]}| / |P|, |G(y,x2)| = |P_{[x1,y-1]}| / |P|,
  // empty-box determinant = 1.  Signs follow the tridiagonal inverse formula;
  // only magnitudes are contractual.
  EdgeEntries green_edge_entries(Interval iv, long long y) const;

  // |phi(y) + G(x1,y) phi(x1-1) + G(y,x2) phi(x2+1)|.  phi must satisfy the
  // eigen-equation on the interval to 1e-8 relative.
  LogScalar block_identity_residual(const Eigenfunction& phi, Interval iv, long long y) const;

  Klem2Audit klem2_audit(long long x, long long p1, long long p2, int n, double epsilon,
                         double C) const;

  NumeratorAudit numerator_bound_audit(Interval iv, double epsilon,
                                       long long min_length = 16) const;

 private:
  OperatorParams params_;
  Options opt_;
  std::shared_ptr<PhaseLattice> lattice_;

  LogScalar det_recursion(const std::vector<double>& phases, bool* cancellation) const;
};

}  // namespace amolab
