#include "amolab/frequency.hpp"

#include <algorithm>
#include <climits>
#include <cmath>

namespace amolab {

struct Frequency::State {
  mutable std::mutex mu;
  mutable std::vector<BigInt> a;       // a[i] = a_{i+1}
  mutable std::vector<BigInt> p, q;    // p[n], q[n], n >= 0
  std::vector<BigInt> period;          // nonempty => infinite source
  std::string note;

  State() {
    p = {BigInt(0)};
    q = {BigInt(1)};
  }

  int quotients_available() const {
    return period.empty() ? static_cast<int>(a.size()) : INT_MAX;
  }

  // Appends quotients (from the periodic source) and convergents up to n.
  // Returns false if the finite source is exhausted before n.
  bool grow(int n) const {
    while (static_cast<int>(a.size()) < n) {
      if (period.empty()) return false;
      a.push_back(period[a.size() % period.size()]);
    }
    while (static_cast<int>(q.size()) <= n) {
      const size_t m = q.size();  // generating convergent index m
      const BigInt& am = a[m - 1];
      BigInt pm = (m >= 2) ? am * p[m - 1] + p[m - 2] : BigInt(1);
      BigInt qm = (m >= 2) ? am * q[m - 1] + q[m - 2] : am;
      p.push_back(std::move(pm));
      q.push_back(std::move(qm));
    }
    return true;
  }
};

Frequency Frequency::from_quotients(std::vector<BigInt> quotients, std::string note) {
  for (const auto& x : quotients) {
    if (x < 1) raise(ErrorCode::ConfigInvalid, "partial quotients must be positive");
  }
  auto s = std::make_shared<State>();
  s->a = std::move(quotients);
  s->note = std::move(note);
  return Frequency(std::move(s));
}

Frequency Frequency::from_quotients(const std::vector<long long>& quotients,
                                    std::string note) {
  std::vector<BigInt> a;
  a.reserve(quotients.size());
  for (long long x : quotients) a.emplace_back(x);
  return from_quotients(std::move(a), std::move(note));
}

Frequency Frequency::periodic(std::vector<BigInt> block, std::string note) {
  if (block.empty()) raise(ErrorCode::ConfigInvalid, "empty periodic block");
  for (const auto& x : block) {
    if (x < 1) raise(ErrorCode::ConfigInvalid, "partial quotients must be positive");
  }
  auto s = std::make_shared<State>();
  s->period = std::move(block);
  s->note = std::move(note);
  return Frequency(std::move(s));
}

Frequency Frequency::golden() { return periodic({BigInt(1)}, "golden mean"); }
Frequency Frequency::silver() { return periodic({BigInt(2)}, "sqrt2 - 1"); }

void Frequency::ensure(int n) const {
  std::lock_guard<std::mutex> lock(state_->mu);
  if (!state_->grow(n)) {
    raise(ErrorCode::PrecisionExhausted,
          "quotient source exhausted at depth " + std::to_string(state_->a.size()) +
              " (requested " + std::to_string(n) + ")");
  }
}

bool Frequency::try_ensure(int n) const {
  std::lock_guard<std::mutex> lock(state_->mu);
  return state_->grow(n);
}

int Frequency::deepest() const {
  std::lock_guard<std::mutex> lock(state_->mu);
  return static_cast<int>(state_->q.size()) - 1;
}

BigInt Frequency::quotient(int n) const {
  if (n < 1) raise(ErrorCode::ConfigInvalid, "quotient index must be >= 1");
  ensure(n);
  std::lock_guard<std::mutex> lock(state_->mu);
  return state_->a[n - 1];
}

std::pair<BigInt, BigInt> Frequency::convergent(int n) const {
  if (n < 0) raise(ErrorCode::ConfigInvalid, "convergent index must be >= 0");
  if (n > 0) ensure(n);
  std::lock_guard<std::mutex> lock(state_->mu);
  return {state_->p[n], state_->q[n]};
}

int Frequency::available_depth() const { return state_->quotients_available(); }
bool Frequency::extendable() const { return !state_->period.empty(); }
const std::string& Frequency::note() const { return state_->note; }

Frequency::RatInterval Frequency::bracket(int n) const {
  ensure(n + 1);
  std::lock_guard<std::mutex> lock(state_->mu);
  BigRat c1(state_->p[n], state_->q[n]);
  BigRat c2(state_->p[n + 1], state_->q[n + 1]);
  if (c1 <= c2) return {c1, c2};
  return {c2, c1};
}

// Bracket at the requested depth, or, when a finite source runs out, the
// open tail bracket (p_K/q_K, (p_K+p_{K-1})/(q_K+q_{K-1})) that contains
// every continuation of the expansion.
Frequency::RatInterval Frequency::working_bracket(int depth, int* used_depth) const {
  if (try_ensure(depth + 1)) {
    if (used_depth) *used_depth = depth;
    return bracket(depth);
  }
  const int K = available_depth();
  ensure(K);
  if (K < 1) raise(ErrorCode::PrecisionExhausted, "no quotients available");
  if (used_depth) *used_depth = K - 1;
  std::lock_guard<std::mutex> lock(state_->mu);
  BigRat c1(state_->p[K], state_->q[K]);
  BigRat c2(state_->p[K] + state_->p[K - 1], state_->q[K] + state_->q[K - 1]);
  if (c1 <= c2) return {c1, c2};
  return {c2, c1};
}

double Frequency::value() const {
  int n = 2;
  while (try_ensure(n + 1)) {
    std::lock_guard<std::mutex> lock(state_->mu);
    if (log_big(state_->q[n]) + log_big(state_->q[n + 1]) > 40.0) break;
    if (n >= 400) break;
    ++n;
  }
  const int depth = std::min(n, deepest() - 1);
  auto br = bracket(std::max(1, depth));
  BigRat mid = (br.lo + br.hi) / 2;
  return mid.convert_to<double>();
}

std::pair<BigRat, double> Frequency::midpoint_ln(double ln_abs_err) const {
  const double target_log = ln_abs_err + std::log(2.0);  // bracket width bound
  int n = 1;
  for (;;) {
    if (!try_ensure(n + 2)) break;  // working_bracket falls back to the tail form
    double width_log;
    {
      std::lock_guard<std::mutex> lock(state_->mu);
      width_log = -(log_big(state_->q[n]) + log_big(state_->q[n + 1]));
    }
    if (width_log <= target_log) break;
    ++n;
  }
  auto br = working_bracket(n);
  BigRat mid = (br.lo + br.hi) / 2;
  BigRat width = br.hi - br.lo;
  return {mid, width == 0 ? -std::numeric_limits<double>::infinity()
                          : log_big(width) - std::log(2.0)};
}

namespace {

// ln q_{n+1} / q_n without overflowing the denominator conversion.
double ratio_ln_q(const BigInt& q_next, const BigInt& q_cur) {
  const double ln_next = log_big(q_next);
  const double ln_cur = log_big(q_cur);
  if (ln_cur < 700.0) return ln_next / q_cur.convert_to<double>();
  return std::exp(std::log(ln_next) - ln_cur);
}

}  // namespace

double beta_window(const Frequency& f, int n_lo, int n_hi) {
  double best = 0.0;
  for (int n = std::max(1, n_lo); n <= n_hi; ++n) {
    auto [pn, qn] = f.convergent(n);
    auto [pn1, qn1] = f.convergent(n + 1);
    best = std::max(best, ratio_ln_q(qn1, qn));
  }
  return best;
}

double Frequency::beta_upto(int N) const { return beta_window(*this, 1, N); }

double Frequency::beta_tail(int N) const {
  return beta_window(*this, (N + 1) / 2, N);
}

double Frequency::beta_j(int n, long long j) const {
  auto [pn1, qn1] = convergent(n + 1);
  auto [pn, qn] = convergent(n);
  const double qd = qn.convert_to<double>();
  return (log_big(qn1) - std::log(static_cast<double>(std::llabs(j)) + 1.0)) / qd;
}

long long Frequency::b_n(int n) const {
  auto [pn, qn] = convergent(n);
  BigInt b = qn / 100000;
  if (b > BigInt(LLONG_MAX)) raise(ErrorCode::RangeExceeded, "b_n exceeds integer range");
  return b.convert_to<long long>();
}

namespace {

// ||x|| as an interval for x in [lo, hi] (exact rational endpoints).
Frequency::RatInterval interval_dist_to_Z(const BigRat& lo, const BigRat& hi) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  // floor of a rational
  auto rfloor = [](const BigRat& r) -> BigInt {
    BigInt n = numerator(r), d = denominator(r);
    BigInt q = n / d;
    if (n < 0 && q * d != n) --q;
    return q;
  };
  auto dist = [&](const BigRat& x) -> BigRat {
    BigInt f = rfloor(x);
    BigRat fr = x - BigRat(f);
    BigRat other = 1 - fr;
    return fr <= other ? fr : other;
  };
  BigRat dlo = dist(lo), dhi = dist(hi);
  BigRat lo_out = dlo <= dhi ? dlo : dhi;
  BigRat hi_out = dlo <= dhi ? dhi : dlo;
  // If an integer or half-integer sits inside the interval, the extremes
  // 0 or 1/2 are attained inside.
  BigRat two_lo = 2 * lo, two_hi = 2 * hi;
  BigInt k_lo = rfloor(two_lo), k_hi = rfloor(two_hi);
  if (k_hi > k_lo || BigRat(k_lo) == two_lo) {
    for (BigInt k = k_lo; k <= k_hi; ++k) {
      BigRat half = BigRat(k) / 2;
      if (half < lo || half > hi) continue;
      if (k % 2 == 0) lo_out = BigRat(0);
      else hi_out = BigRat(1, 2);
    }
  }
  return {lo_out, hi_out};
}

double rat_to_double_log(const BigRat& r) { return log_big(r); }

}  // namespace

Frequency::RatInterval Frequency::knorm(const BigInt& k, double rel_tol) const {
  BigInt kk = k < 0 ? BigInt(-k) : k;
  if (kk == 0) return {BigRat(0), BigRat(0)};
  // Start deep enough that the bracket width times k is well below 1.
  int n = 2;
  const double lk = log_big(kk);
  while (true) {
    if (!try_ensure(n + 2)) break;
    double wlog;
    {
      std::lock_guard<std::mutex> lock(state_->mu);
      wlog = -(log_big(state_->q[n]) + log_big(state_->q[n + 1]));
    }
    if (lk + wlog < std::log(1.0 / 8.0)) break;
    ++n;
  }
  for (;;) {
    int used = n;
    auto br = working_bracket(n, &used);
    auto iv = interval_dist_to_Z(kk * br.lo, kk * br.hi);
    if (iv.lo > 0) {
      BigRat width = iv.hi - iv.lo;
      if (rat_to_double_log(width) - rat_to_double_log(iv.lo) <= std::log(rel_tol)) {
        return iv;
      }
    }
    if (used < n || !try_ensure(n + 2)) {
      if (iv.lo > 0) return iv;  // best effort from a finite source
      raise(ErrorCode::PrecisionExhausted,
            "cannot separate ||k alpha|| from zero at available depth");
    }
    ++n;
  }
}

double Frequency::log_knorm(const BigInt& k, double rel_tol) const {
  auto iv = knorm(k, rel_tol);
  BigRat mid = (iv.lo + iv.hi) / 2;
  return rat_to_double_log(mid);
}

Frequency::DiophantineAudit Frequency::diophantine_audit(int n, long long enumeration_cap) const {
  if (n < 1) raise(ErrorCode::ConfigInvalid, "audit scale must be >= 1");
  ensure(n + 1);
  DiophantineAudit out;
  out.n = n;
  auto [pn, qn] = convergent(n);
  auto [pn1, qn1] = convergent(n + 1);
  out.gdc1_range = qn1;

  const BigRat upper(BigInt(1), qn1);
  const BigRat lower(BigInt(1), 2 * qn1);
  out.lower = LogScalar::from_log(1, rat_to_double_log(lower));
  out.upper = LogScalar::from_log(1, rat_to_double_log(upper));

  // |q_n alpha - p_n| as an interval; refine until it certifies the sandwich
  // and is narrow enough to report a meaningful midpoint.
  int depth = n + 2;
  BigRat alo, ahi;
  bool certified = false;
  for (;;) {
    int used = depth;
    auto br = working_bracket(depth, &used);
    BigRat v1 = qn * br.lo - pn, v2 = qn * br.hi - pn;
    if (v1 < 0) v1 = -v1;
    if (v2 < 0) v2 = -v2;
    alo = v1 <= v2 ? v1 : v2;
    ahi = v1 <= v2 ? v2 : v1;
    certified = (alo >= lower && ahi <= upper);
    const bool narrow =
        alo > 0 && rat_to_double_log(ahi - alo) - rat_to_double_log(alo) < std::log(1e-9);
    if ((certified && narrow) || used < depth || depth >= n + 60) break;
    ++depth;
  }
  out.actual = LogScalar::from_log(1, rat_to_double_log((alo + ahi) / 2));
  if (certified) {
    out.pass = true;
    out.method = "interval";
  } else {
    // The open-tail structure gives 1/(q_{n+1}+q_n) < |q_n alpha - p_n| < 1/q_{n+1}
    // whenever the expansion continues past n+1; both sandwich bounds follow.
    out.pass = (qn <= qn1);
    out.method = "interval+structural";
  }

  if (qn1 <= BigInt(enumeration_cap)) {
    // Exhaustive check of dist(k alpha, Z) >= |q_n alpha - p_n| for 1 <= k < q_{n+1}.
    auto br = working_bracket(n + 4);
    const long long kmax = qn1.convert_to<long long>() - 1;
    bool ok = true;
    BigRat flo(0), fhi(0);
    for (long long k = 1; k <= kmax && ok; ++k) {
      flo += br.lo;
      fhi += br.hi;
      if (flo >= 1) { flo -= 1; fhi -= 1; }
      if (BigInt(k) == qn) continue;  // equality case, holds by identity
      auto iv = interval_dist_to_Z(flo, fhi);
      if (!(iv.lo >= ahi)) ok = false;
    }
    out.gdc1_checked = true;
    out.gdc1_pass = ok;
  }
  return out;
}

Frequency::DeltaResult Frequency::delta_estimate_exact(long long m, long long K) const {
  if (K < 1) raise(ErrorCode::ConfigInvalid, "K must be >= 1");
  DeltaResult out;
  out.value = -std::numeric_limits<double>::infinity();
  for (long long k = -K; k <= K; ++k) {
    if (k == 0) continue;
    const long long u = m + k;
    if (u == 0) {
      out.complete_resonance = true;  // 2theta + k alpha in Z exactly; skipped
      continue;
    }
    const double lg = log_knorm(BigInt(u));
    const double cand = -lg / static_cast<double>(std::llabs(k));
    if (cand > out.value) {
      out.value = cand;
      out.arg_k = k;
    }
  }
  return out;
}

Frequency::DeltaResult Frequency::delta_estimate_real(double two_theta, double radius,
                                                      long long K) const {
  if (K < 1) raise(ErrorCode::ConfigInvalid, "K must be >= 1");
  const BigRat t(two_theta);
  const BigRat r(radius);
  DeltaResult out;
  out.value = -std::numeric_limits<double>::infinity();
  // Depth: bracket width * K well below any admissible distance.
  int n = 2;
  while (try_ensure(n + 2)) {
    std::lock_guard<std::mutex> lock(state_->mu);
    if (log_big(state_->q[n]) + log_big(state_->q[n + 1]) >
        std::log(static_cast<double>(K)) + 80.0)
      break;
    ++n;
  }
  auto br = working_bracket(n);
  for (long long k = -K; k <= K; ++k) {
    if (k == 0) continue;
    BigRat xlo = t - r + k * (k > 0 ? br.lo : br.hi);
    BigRat xhi = t + r + k * (k > 0 ? br.hi : br.lo);
    auto iv = interval_dist_to_Z(xlo, xhi);
    if (iv.lo == 0) {
      if (radius == 0.0 && iv.hi == 0) {
        out.complete_resonance = true;
        continue;
      }
      raise(ErrorCode::PrecisionExhausted,
            "phase too close to resonance at k=" + std::to_string(k) +
                " for the stated precision");
    }
    BigRat mid = (iv.lo + iv.hi) / 2;
    const double cand = -rat_to_double_log(mid) / static_cast<double>(std::llabs(k));
    if (cand > out.value) {
      out.value = cand;
      out.arg_k = k;
    }
  }
  return out;
}

Frequency Frequency::expand(const BigRat& lo_in, const BigRat& hi_in, int n_max) {
  if (n_max < 1) raise(ErrorCode::ConfigInvalid, "n_max must be >= 1");
  if (!(lo_in > 0 && hi_in < 1 && lo_in <= hi_in)) {
    raise(ErrorCode::ConfigInvalid, "input interval must sit inside (0,1)");
  }
  std::vector<BigInt> a;
  BigRat lo = lo_in, hi = hi_in;
  for (int i = 1; i <= n_max; ++i) {
    if (lo <= 0) {
      raise(ErrorCode::NonGeneric, "input is rational within the stated precision");
    }
    // y -> 1/y reverses the interval.
    BigRat inv_lo = 1 / hi, inv_hi = 1 / lo;
    BigInt f_lo = numerator(inv_lo) / denominator(inv_lo);
    BigInt f_hi = numerator(inv_hi) / denominator(inv_hi);
    if (BigRat(f_hi) == inv_hi && f_lo + 1 == f_hi) f_hi = f_lo;  // touching endpoint
    if (f_lo != f_hi) {
      raise(ErrorCode::PrecisionExhausted,
            "quotient " + std::to_string(i) + " cannot be certified");
    }
    a.push_back(f_lo);
    BigRat nlo = inv_lo - BigRat(f_lo), nhi = inv_hi - BigRat(f_lo);
    lo = nlo;
    hi = nhi;
    if (lo == 0 && hi == 0) {
      if (i < n_max) raise(ErrorCode::NonGeneric, "input is exactly rational");
      break;
    }
  }
  return from_quotients(std::move(a), "from-real(certified)");
}

Frequency Frequency::expand(double x, double radius, int n_max) {
  if (!(x > 0.0 && x < 1.0)) raise(ErrorCode::ConfigInvalid, "x must be in (0,1)");
  const double r = std::max(radius, 0.0);
  return expand(BigRat(x) - BigRat(r), BigRat(x) + BigRat(r), n_max);
}

namespace {

// round((e^{beta*qn} - q_{n-1})/qn), >= 1, exact via MPFR at adaptive precision.
BigInt beta_rule_quotient(double beta, const BigInt& qn, const BigInt& qnm1) {
  const double log_e = beta * qn.convert_to<double>();  // qn is small when this matters most
  const unsigned bits = static_cast<unsigned>(log_e * 1.4427) + 96;
  mp::number<mp::mpfr_float_backend<0>, mp::et_off>::default_precision(
      static_cast<unsigned>(bits / 3.32) + 8);
  DynFloat e = exp(DynFloat(beta) * DynFloat(qn));
  DynFloat cand = (e - DynFloat(qnm1)) / DynFloat(qn);
  DynFloat rounded = floor(cand + DynFloat(0.5));
  BigInt out = rounded.convert_to<BigInt>();
  if (out < 1) out = 1;
  return out;
}

}  // namespace

Frequency Frequency::with_beta(double target_beta, int depth, long max_bits) {
  if (!(target_beta > 0)) raise(ErrorCode::ConfigInvalid, "target_beta must be positive");
  if (depth < 2) raise(ErrorCode::ConfigInvalid, "depth must be >= 2");
  const double window = 0.05;

  auto simulate = [&](long long m, std::vector<BigInt>* out) -> bool {
    std::vector<BigInt> a = {BigInt(m)};
    BigInt q_prev(1), q_cur(m);  // q_0, q_1
    for (int n = 1; n <= depth; ++n) {
      // q_n is q_cur here; pick a_{n+1}.
      const double qd = q_cur.convert_to<double>();
      if (!std::isfinite(qd) || qd * target_beta * 1.4427 > static_cast<double>(max_bits)) {
        raise(ErrorCode::DepthOverflow,
              "q_" + std::to_string(n + 1) + " would exceed the integer budget");
      }
      BigInt an1 = beta_rule_quotient(target_beta, q_cur, q_prev);
      BigInt q_next = an1 * q_cur + q_prev;
      if (static_cast<long>(msb(q_next)) + 1 > max_bits) {
        raise(ErrorCode::DepthOverflow,
              "q_" + std::to_string(n + 1) + " would exceed the integer budget");
      }
      const double ratio = ratio_ln_q(q_next, q_cur);
      if (n >= 2 && std::fabs(ratio - target_beta) > window) return false;
      a.push_back(an1);
      q_prev = q_cur;
      q_cur = q_next;
    }
    if (out) *out = std::move(a);
    return true;
  };

  std::vector<BigInt> chosen;
  long long m = 2;
  while (m <= 2'000'000) {
    if (simulate(m, &chosen)) {
      return from_quotients(std::move(chosen),
                            "with-beta(" + std::to_string(target_beta) + ")");
    }
    m = std::max(m + 1, static_cast<long long>(static_cast<double>(m) * 1.07));
  }
  raise(ErrorCode::ConfigInvalid,
        "no feasible start for target_beta window; try a different target");
}

std::vector<std::string> Frequency::quotient_strings(int n_max) const {
  const int n = std::min(n_max, available_depth());
  std::vector<std::string> out;
  out.reserve(n);
  for (int i = 1; i <= n; ++i) out.push_back(quotient(i).str());
  return out;
}

}  // namespace amolab
