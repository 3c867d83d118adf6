#include "amolab/resonance.hpp"

#include <algorithm>
#include <cmath>

namespace amolab {

ResonanceProfile resonance_amplitudes(const Eigenfunction& phi, const Frequency& freq,
                                      int n, double epsilon, long long j_abs_max) {
  ResonanceProfile out;
  out.n = n;
  out.epsilon = epsilon;
  auto [pn, qn_big] = freq.convergent(n);
  if (qn_big > BigInt(1) << 40) raise(ErrorCode::BudgetExceeded, "q_n too large for profiles");
  out.q_n = qn_big.convert_to<long long>();
  out.b_n = freq.b_n(n);
  out.b_n1 = freq.b_n(n + 1);
  const long long w = static_cast<long long>(
      std::floor(10.0 * epsilon * static_cast<double>(out.q_n) + 1e-9));
  const long long half = out.q_n / 2;
  for (long long two_j = -2 * j_abs_max; two_j <= 2 * j_abs_max; ++two_j) {
    const long long center =
        (two_j % 2 == 0) ? (two_j / 2) * out.q_n
                         : ((two_j - 1) / 2) * out.q_n + half;  // l q_n + floor(q_n/2)
    if (center - w < phi.lo || center + w > phi.hi) {
      raise(ErrorCode::RangeExceeded,
            "window around 2j=" + std::to_string(two_j) + " leaves phi's domain");
    }
    LogScalar best = LogScalar::zero();
    for (long long x = center - w; x <= center + w; ++x) {
      const LogScalar a = phi.at(x).abs();
      if (abs_less(best, a)) best = a;
    }
    out.r[two_j] = best;
  }
  return out;
}

OffdiagCheck offdiag_decay_check(const Eigenfunction& phi, const ResonanceProfile& profile,
                                 const OperatorParams& params, long long k) {
  const double qn = static_cast<double>(profile.q_n);
  const double eps = profile.epsilon;
  // dist(k, q_n Z + (q_n/2) Z)
  const double half = qn / 2.0;
  const double t = std::round(static_cast<double>(k) / half);
  const double dist_half_lattice = std::fabs(static_cast<double>(k) - t * half);
  if (dist_half_lattice < 10.0 * eps * qn) {
    raise(ErrorCode::SiteTooResonant,
          "site " + std::to_string(k) + " is within 10 eps q_n of a resonant center");
  }
  const long long l = static_cast<long long>(std::floor(static_cast<double>(k) / qn));
  const double cap = 100.0 * static_cast<double>(profile.b_n1) / qn + 100.0;
  if (std::fabs(static_cast<double>(l)) > cap) {
    raise(ErrorCode::RangeExceeded, "l outside the lemma range");
  }
  const bool first_half = static_cast<double>(k) <= (static_cast<double>(l) + 0.5) * qn;
  const double L = params.log_lambda();

  OffdiagCheck out;
  out.k = k;
  const long long two_t1 = first_half ? 2 * l : 2 * l + 1;
  const long long two_t2 = first_half ? 2 * l + 1 : 2 * l + 2;
  const double d1 = std::fabs(static_cast<double>(k) - static_cast<double>(two_t1) * half);
  const double d2 = std::fabs(static_cast<double>(two_t2) * half - static_cast<double>(k));
  out.d_low = d1;
  out.d_high = d2;
  LogScalar term1 = profile.at2(two_t1).abs() *
                    LogScalar::from_log(1, -(L - eps) * (d1 - 3.0 * eps * qn));
  LogScalar term2 = profile.at2(two_t2).abs() *
                    LogScalar::from_log(1, -(L - eps) * (d2 - 3.0 * eps * qn));
  out.bound = term1 + term2;
  out.actual = phi.at(k).abs();
  out.pass = abs_leq(out.actual, out.bound);
  return out;
}

namespace {

void check_j_range(const ResonanceProfile& profile, long long j) {
  const double cap =
      2.0 * static_cast<double>(profile.b_n1) / static_cast<double>(profile.q_n) + 10.0;
  if (std::fabs(static_cast<double>(j)) > cap) {
    raise(ErrorCode::RangeExceeded, "j outside the theorem range");
  }
}

}  // namespace

HalfSiteContraction half_site_contraction(const ResonanceProfile& profile,
                                          const Frequency& freq, long long j, double L,
                                          double C, double epsilon) {
  check_j_range(profile, j);
  HalfSiteContraction out;
  out.j = j;
  const double beta_j = freq.beta_j(profile.n, j);
  const double qn = static_cast<double>(profile.q_n);
  out.claimed_log = -0.5 * (L - 2.0 * beta_j - C * epsilon) * qn;
  LogScalar num = profile.at2(2 * j + 1).abs();
  LogScalar den = profile.at2(2 * j).abs() + profile.at2(2 * j + 2).abs();
  if (den.is_zero()) {
    raise(ErrorCode::DegenerateDenominator, "r_j + r_{j+1} = 0");
  }
  if (num.is_zero()) {
    out.trivial = true;
    out.ratio_log = -std::numeric_limits<double>::infinity();
    out.pass = true;
    return out;
  }
  out.ratio_log = num.logmag - den.logmag;
  out.pass = out.ratio_log <= out.claimed_log;
  return out;
}

FullSiteContraction full_site_contraction(const ResonanceProfile& profile,
                                          const Frequency& freq, long long j, double L,
                                          double C, double epsilon) {
  if (j == 0) raise(ErrorCode::ConfigInvalid, "full-site contraction needs j != 0");
  check_j_range(profile, j);
  FullSiteContraction out;
  out.j = j;
  const double beta_j = freq.beta_j(profile.n, j);
  const double qn = static_cast<double>(profile.q_n);
  const double k_half = -0.5 * (L - 2.0 * beta_j - C * epsilon) * qn;
  const double k_full = -(L - 2.0 * beta_j - C * epsilon) * qn;
  LogScalar half_sum = profile.at2(2 * j + 1).abs() + profile.at2(2 * j - 1).abs();
  LogScalar full_sum = profile.at2(2 * j + 2).abs() + profile.at2(2 * j - 2).abs();
  LogScalar rhs = LogScalar::from_log(1, k_half) * half_sum +
                  LogScalar::from_log(1, k_full) * full_sum;
  LogScalar lhs = profile.at2(2 * j).abs();
  out.measured_log = lhs.is_zero() ? -std::numeric_limits<double>::infinity() : lhs.logmag;
  out.half_term_log = half_sum.is_zero() ? -std::numeric_limits<double>::infinity()
                                         : k_half + half_sum.logmag;
  out.full_term_log = full_sum.is_zero() ? -std::numeric_limits<double>::infinity()
                                         : k_full + full_sum.logmag;
  out.trivial = lhs.is_zero();
  out.pass = abs_leq(lhs, rhs);
  return out;
}

DecayCertificate decay_certificate(const Eigenfunction& phi,
                                   const std::vector<ResonanceProfile>& profiles,
                                   const OperatorParams& params,
                                   const CertificateOptions& opt) {
  if (profiles.empty()) {
    raise(ErrorCode::InsufficientProfiles, "decay certificate needs at least one profile");
  }
  const ResonanceProfile& prof =
      *std::max_element(profiles.begin(), profiles.end(),
                        [](const auto& a, const auto& b) { return a.n < b.n; });
  DecayCertificate cert;
  cert.n = prof.n;
  cert.epsilon = opt.epsilon;
  cert.C = opt.C;
  cert.L = params.log_lambda();
  int depth = opt.beta_depth;
  if (!params.freq.extendable()) depth = std::min(depth, params.freq.available_depth() - 1);
  cert.beta_used = params.freq.beta_tail(depth);
  cert.main_theorem_rate = cert.L - 2.0 * cert.beta_used;

  const double qn = static_cast<double>(prof.q_n);
  const double K = (cert.L - 2.0 * cert.beta_used - opt.C * opt.epsilon) * qn;

  long long jmax = opt.j_max;
  if (jmax <= 0) {
    jmax = prof.r.empty() ? 1 : std::max<long long>(1, prof.r.rbegin()->first / 2);
  }
  const long long top = 2 * (jmax + 2);
  std::vector<double> bound(static_cast<size_t>(top + 1));
  auto seed = [&](long long key) {
    const double j_up = std::ceil(static_cast<double>(key) / 2.0);
    return std::log((j_up + 1.0) * qn);
  };
  for (long long t = 0; t <= top; ++t) bound[static_cast<size_t>(t)] = seed(t);
  auto at = [&](long long t) -> double {
    return t <= top ? bound[static_cast<size_t>(t)] : seed(t);
  };
  const long long sweeps = 2 * jmax + 4;
  for (long long sweep = 0; sweep < sweeps; ++sweep) {
    for (long long t = top; t >= 1; --t) {
      double cand;
      if (t % 2 == 1) {
        // r_{j-1/2} <= e^{-K/2 q_n-scale} max(r_{j-1}, r_j)
        cand = -K / 2.0 + std::max(at(t - 1), at(t + 1));
      } else {
        cand = std::max(std::max(-K + at(t - 2), -K + at(t + 2)),
                        std::max(-K / 2.0 + at(t - 1), -K / 2.0 + at(t + 1)));
      }
      bound[static_cast<size_t>(t)] = std::min(bound[static_cast<size_t>(t)], cand);
    }
  }

  for (long long t = 1; t <= 2 * jmax; ++t) {
    SiteBound sb;
    sb.claimed_log = at(t);
    const double l = std::ceil(static_cast<double>(t) / 2.0);
    const double site = static_cast<double>(t) / 2.0;
    sb.closed_form_log = std::log((2.0 * l + 2.0) * qn) - K * site;
    if (prof.has2(t)) {
      const LogScalar m = prof.at2(t).abs();
      sb.has_measured = true;
      sb.measured_log = m.is_zero() ? -std::numeric_limits<double>::infinity() : m.logmag;
      sb.pass = sb.measured_log <= sb.claimed_log;
    }
    if (t >= 2 && cert.rates.count(t - 1) && sb.claimed_log > cert.rates[t - 1].claimed_log) {
      cert.monotone = false;
    }
    cert.rates[t] = sb;
  }

  // End-to-end decay of phi over the audited range.
  const long long extent = std::min(phi.hi, -phi.lo);
  cert.audited_k_lo = std::max<long long>(8, static_cast<long long>(0.05 * extent));
  cert.audited_k_hi = static_cast<long long>(0.9 * extent);
  double fr = std::numeric_limits<double>::infinity();
  for (long long k = cert.audited_k_lo; k <= cert.audited_k_hi; ++k) {
    for (long long sk : {k, -k}) {
      // pair_log is (1/2) ln(phi^2(k)+phi^2(k-1)), so the Main-Theorem
      // quantity ln(...)/(2|k|) is pair_log/|k|.
      const double pl = phi.pair_log(sk);
      if (!std::isfinite(pl)) continue;
      fr = std::min(fr, -pl / static_cast<double>(std::llabs(sk)));
    }
  }
  if (!std::isfinite(fr) || fr > opt.rate_cap) {
    cert.final_rate = opt.rate_cap;
    cert.final_rate_clamped = true;
  } else {
    cert.final_rate = fr;
  }
  cert.satisfied = cert.final_rate >= cert.main_theorem_rate - opt.slack;
  return cert;
}

}  // namespace amolab
