#include "amolab/scheme.hpp"

#include <cmath>

namespace amolab {

std::vector<long long> LagrangeScheme::nodes() const {
  std::vector<long long> out;
  out.reserve(static_cast<size_t>(k + 1));
  for (long long m = I1.lo; m <= I1.hi; ++m) out.push_back(m);
  for (long long m = I2.lo; m <= I2.hi; ++m) out.push_back(m);
  return out;
}

LagrangeScheme build_scheme(const Frequency& freq, int n, long long j, SchemeKind kind,
                            double epsilon) {
  LagrangeScheme sch;
  sch.n = n;
  sch.kind = kind;
  sch.j = j;
  sch.epsilon = epsilon;
  sch.c = (kind == SchemeKind::HalfSite) ? 0.125 : 0.25;
  if (!(epsilon > 0.0) || sch.c - 2.0 * epsilon <= 0.0) {
    raise(ErrorCode::ScaleTooSmall, "epsilon too large for this scheme kind");
  }
  auto [pn, qn_big] = freq.convergent(n);
  if (qn_big > BigInt(1) << 40) {
    raise(ErrorCode::BudgetExceeded, "q_n too large to enumerate scheme sites");
  }
  sch.q_n = qn_big.convert_to<long long>();
  const double budget = 0.5 * epsilon * (sch.c - 2.0 * epsilon) * static_cast<double>(sch.q_n);

  const long long b_n1 = freq.b_n(n + 1);
  const double j_cap = 2.0 * static_cast<double>(b_n1) / static_cast<double>(sch.q_n) + 10.0;
  if (std::fabs(static_cast<double>(j)) > j_cap) {
    raise(ErrorCode::RangeExceeded, "resonant index j outside the theorem range");
  }

  int n0 = -1;
  for (int cand = 1; cand <= n; ++cand) {
    auto [p, q] = freq.convergent(n - cand);
    if (q.convert_to<double>() <= budget) {
      n0 = cand;
      break;
    }
  }
  if (n0 < 0) {
    raise(ErrorCode::ScaleTooSmall,
          "no valid n0: even q_0 = 1 exceeds (eps/2)(c - 2 eps) q_n");
  }
  sch.n0 = n0;
  auto [pq, qq] = freq.convergent(n - n0);
  sch.q_nn0 = qq.convert_to<long long>();
  sch.s = static_cast<long long>(std::floor((sch.c - 2.0 * epsilon) *
                                            static_cast<double>(sch.q_n) /
                                            static_cast<double>(sch.q_nn0)));
  if (sch.s < 1) raise(ErrorCode::ScaleTooSmall, "s < 1");

  const long long w = 2 * sch.s * sch.q_nn0;
  sch.I1 = {-w, -1};
  if (kind == SchemeKind::HalfSite) {
    const long long half = sch.q_n / 2;  // floor(q_n / 2)
    sch.I2 = {j * sch.q_n + half - w, j * sch.q_n + half + w - 1};
  } else {
    sch.I2 = {j * sch.q_n - w, j * sch.q_n + w - 1};
  }
  sch.k = 3 * w - 1;
  return sch;
}

namespace {

// ln|sin(pi x)| for ||x|| given as an exact rational in [0, 1/2].
double log_sin_pi(const BigRat& dist) {
  const double d = dist.convert_to<double>();
  if (d > 1e-280) return std::log(std::sin(M_PI * d));
  if (dist == 0) return -std::numeric_limits<double>::infinity();
  return std::log(M_PI) + log_big(dist);
}

BigInt rat_floor(const BigRat& r) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  BigInt nn = numerator(r), d = denominator(r);
  BigInt q = nn / d;
  if (nn < 0 && q * d != nn) --q;
  return q;
}

// ln|sin pi((base_m + u) alpha)| for u in [u_lo, u_hi], exact mod-1 stepping.
std::vector<double> sin_log_table(const BigRat& alpha, long long base_m, long long u_lo,
                                  long long u_hi) {
  std::vector<double> out(static_cast<size_t>(u_hi - u_lo + 1));
  BigRat r = (base_m + u_lo) * alpha;
  r -= BigRat(rat_floor(r));
  const BigRat one(1);
  BigRat step = alpha - BigRat(rat_floor(alpha));
  for (long long u = u_lo; u <= u_hi; ++u) {
    BigRat dist = r <= BigRat(1, 2) ? r : one - r;
    out[static_cast<size_t>(u - u_lo)] = log_sin_pi(dist);
    r += step;
    if (r >= one) r -= one;
  }
  return out;
}

}  // namespace

SineMinimaAudit sine_minima_audit(const LagrangeScheme& scheme, const Frequency& freq,
                                  const Phase& theta, double C) {
  if (theta.kind != Phase::Kind::Exact) {
    raise(ErrorCode::ConfigInvalid, "sine minima audit needs a completely resonant phase");
  }
  SineMinimaAudit out;
  const auto nodes = scheme.nodes();
  const long long span_lo = nodes.front(), span_hi = nodes.back();
  const double qn = static_cast<double>(scheme.q_n);
  const double beta_j = freq.beta_j(scheme.n, scheme.j);
  out.beta_j = beta_j;
  const double lnq = std::log(qn);
  out.achievers_applicable = beta_j * qn > 2.0 * C * lnq;

  // alpha at enough precision that the smallest ||m alpha|| in range is resolved.
  auto [pn2, qn2] = freq.convergent(std::min(scheme.n + 2, freq.extendable()
                                                               ? scheme.n + 2
                                                               : freq.available_depth()));
  const double ln_err = -(2.0 * log_big(qn2) + 80.0);
  auto [alpha_mid, err] = freq.midpoint_ln(ln_err);

  // Phase table: ln|sin pi(2 theta + (l + m) alpha)| = ln|sin pi((m_theta + l + m) alpha)|.
  const auto phase_tab =
      sin_log_table(alpha_mid, theta.m, 2 * span_lo, 2 * span_hi);
  // Frequency table: ln|sin pi (l - m) alpha| for l - m in [span_lo-span_hi, span_hi-span_lo].
  const auto freq_tab = sin_log_table(alpha_mid, 0, span_lo - span_hi, span_hi - span_lo);

  // Lagrange terms at the scheme nodes.
  PhaseLattice lattice(freq, theta, std::llabs(span_hi) + std::llabs(span_lo) + 2);
  std::vector<double> thetas(nodes.size());
  for (size_t i = 0; i < nodes.size(); ++i) thetas[i] = lattice.phase(nodes[i]);
  auto lag = lagrange_terms_from_phases(thetas);
  out.lag_method = lag.method;

  const bool half = scheme.kind == SchemeKind::HalfSite;
  out.records.reserve(nodes.size());
  for (size_t mi = 0; mi < nodes.size(); ++mi) {
    const long long m = nodes[mi];
    SineMinRecord rec;
    rec.m = m;
    const bool in_I1 = m <= scheme.I1.hi;
    if (half) {
      rec.block = in_I1 ? 0 : 1;
    } else {
      rec.block = (in_I1 || m < scheme.j * scheme.q_n) ? 0 : 1;
    }

    rec.min_phase_log = std::numeric_limits<double>::infinity();
    rec.min_freq_log = std::numeric_limits<double>::infinity();
    for (long long l : nodes) {
      const double sp = phase_tab[static_cast<size_t>(l + m - 2 * span_lo)];
      rec.min_phase_log = std::min(rec.min_phase_log, sp);
      if (l != m) {
        const double sf = freq_tab[static_cast<size_t>(l - m - (span_lo - span_hi))];
        rec.min_freq_log = std::min(rec.min_freq_log, sf);
      }
    }

    double phase_floor, freq_floor;
    long long cap = 0;
    double lag_bound;
    if (half) {
      if (rec.block == 0) {
        phase_floor = -C * lnq;
        freq_floor = -C * lnq;
        lag_bound = scheme.epsilon * qn;
      } else {
        phase_floor = -beta_j * qn - C * lnq;
        freq_floor = -C * lnq;
        cap = 1;
        lag_bound = (beta_j + scheme.epsilon) * qn;
      }
    } else {
      lag_bound = 2.0 * qn * (beta_j + scheme.epsilon);
      if (rec.block == 0) {
        phase_floor = -beta_j * qn - C * lnq;
        freq_floor = -beta_j * qn - C * lnq;
        cap = 1;
      } else {
        phase_floor = -beta_j * qn - C * lnq;
        freq_floor = -C * lnq;
        cap = 2;
      }
    }
    rec.phase_floor_log = phase_floor;
    rec.freq_floor_log = freq_floor;
    rec.phase_achiever_cap = cap;
    rec.lag = lag.lag[mi];
    rec.lag_bound = lag_bound;
    rec.lag_pass = rec.lag <= rec.lag_bound;
    rec.phase_pass = rec.min_phase_log >= phase_floor;
    rec.freq_pass = rec.min_freq_log >= freq_floor;

    // Near-extremal counting: within C ln q_n of the resonant level.
    const double threshold = -beta_j * qn + C * lnq;
    for (long long l : nodes) {
      if (phase_tab[static_cast<size_t>(l + m - 2 * span_lo)] <= threshold) {
        ++rec.phase_achievers;
      }
      if (l != m &&
          freq_tab[static_cast<size_t>(l - m - (span_lo - span_hi))] <= threshold) {
        ++rec.freq_achievers;
      }
    }

    out.floors_pass = out.floors_pass && rec.phase_pass && rec.freq_pass;
    out.lag_pass = out.lag_pass && rec.lag_pass;
    if (out.achievers_applicable && cap > 0) {
      out.achievers_pass = out.achievers_pass && rec.phase_achievers <= cap;
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

}  // namespace amolab
