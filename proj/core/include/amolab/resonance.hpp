#pragma once

#include <map>
#include <vector>

#include "amolab/eigenfunction.hpp"
#include "amolab/frequency.hpp"
#include "amolab/operator_params.hpp"

namespace amolab {

// Resonant amplitudes r_j = sup over the window |site - center| <= 10 eps q_n
// of |phi|, with center j q_n for integer j and l q_n + floor(q_n/2) for
// j = l + 1/2.  Keys are 2j so half-integers live on an integer grid.
struct ResonanceProfile {
  int n = 0;
  long long q_n = 0;
  double epsilon = 0.0;
  long long b_n = 0;    // floor(1e-5 q_n)
  long long b_n1 = 0;   // floor(1e-5 q_{n+1})
  std::map<long long, LogScalar> r;  // key = 2j

  bool has2(long long two_j) const { return r.count(two_j) != 0; }
  LogScalar at2(long long two_j) const {
    auto it = r.find(two_j);
    if (it == r.end()) {
      raise(ErrorCode::InsufficientProfiles,
            "amplitude 2j=" + std::to_string(two_j) + " not in profile");
    }
    return it->second;
  }
};

// Errors: RangeExceeded when a window leaves phi's domain.
ResonanceProfile resonance_amplitudes(const Eigenfunction& phi, const Frequency& freq,
                                      int n, double epsilon, long long j_abs_max);

struct OffdiagCheck {
  long long k = 0;
  double d_low = 0.0, d_high = 0.0;  // distances to the two bracketing centers
  LogScalar actual;                  // |phi(k)|
  LogScalar bound;                   // two-term resonant bound
  bool pass = false;
};

// |phi(k)| against r_l e^{-(L-eps)(d_l - 3 eps q_n)} + r_{l'} e^{-(L-eps)(d_{l'} - 3 eps q_n)}.
// Errors: SiteTooResonant if dist(k, q_n Z + (q_n/2) Z) < 10 eps q_n,
// RangeExceeded if l is outside the lemma's range.
OffdiagCheck offdiag_decay_check(const Eigenfunction& phi, const ResonanceProfile& profile,
                                 const OperatorParams& params, long long k);

struct HalfSiteContraction {
  long long j = 0;
  double ratio_log = 0.0;    // ln r_{j+1/2}/(r_j + r_{j+1})
  double claimed_log = 0.0;  // -(1/2)(L - 2 beta_j - C eps) q_n
  bool pass = false;
  bool trivial = false;      // r_{j+1/2} = 0
};

// Errors: DegenerateDenominator when r_j + r_{j+1} = 0; RangeExceeded when
// |j| > 2 b_{n+1}/q_n + 10.
HalfSiteContraction half_site_contraction(const ResonanceProfile& profile,
                                          const Frequency& freq, long long j, double L,
                                          double C, double epsilon);

struct FullSiteContraction {
  long long j = 0;
  double measured_log = 0.0;   // ln r_j
  double half_term_log = 0.0;  // ln e^{-(1/2)(...) q_n}(r_{j+1/2} + r_{j-1/2})
  double full_term_log = 0.0;  // ln e^{-(...) q_n}(r_{j+1} + r_{j-1})
  bool pass = false;
  bool trivial = false;        // r_j = 0
};

FullSiteContraction full_site_contraction(const ResonanceProfile& profile,
                                          const Frequency& freq, long long j, double L,
                                          double C, double epsilon);

struct SiteBound {
  double claimed_log = 0.0;      // from the iterated inequalities
  double closed_form_log = 0.0;  // (2l+2) q_n e^{-(L-2beta-C eps) l q_n} family
  bool has_measured = false;
  double measured_log = 0.0;
  bool pass = true;              // measured <= claimed when measured exists
};

struct DecayCertificate {
  int n = 0;
  double epsilon = 0.0, C = 0.0, beta_used = 0.0, L = 0.0;
  std::map<long long, SiteBound> rates;  // key = 2j, j >= 1/2
  bool monotone = true;
  double final_rate = 0.0;       // min over audited k of -ln(phi^2(k)+phi^2(k-1))/(2|k|)
  bool final_rate_clamped = false;
  double main_theorem_rate = 0.0;  // L - 2 beta_used
  bool satisfied = false;          // final_rate >= main rate - slack
  long long audited_k_lo = 0, audited_k_hi = 0;
};

struct CertificateOptions {
  double C = 10.0;
  double epsilon = 0.05;
  double slack = 0.0;
  double rate_cap = 50.0;
  long long j_max = 0;  // 0: derive from the profile
  int beta_depth = 40;
};

// Iterates the half-site/full-site inequalities from the trivial seeds
// |r_j| <= (j+1) q_n, records per-site claimed bounds against the measured
// profile, and estimates the end-to-end decay rate of phi.
DecayCertificate decay_certificate(const Eigenfunction& phi,
                                   const std::vector<ResonanceProfile>& profiles,
                                   const OperatorParams& params,
                                   const CertificateOptions& opt = {});

}  // namespace amolab
