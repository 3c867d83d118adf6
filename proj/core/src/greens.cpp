#include "amolab/greens.hpp"

#include <cmath>

namespace amolab {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

GreensEngine::GreensEngine(OperatorParams params, Options opt)
    : params_(std::move(params)), opt_(opt) {
  lattice_ = std::make_shared<PhaseLattice>(params_.freq, params_.theta,
                                            opt_.max_abs_site, -69.0);
}

LogScalar GreensEngine::det_recursion(const std::vector<double>& phases,
                                      bool* cancellation) const {
  LogScalar p_prev = LogScalar::one();   // P_0
  LogScalar p_prev2 = LogScalar::zero(); // P_{-1}
  bool flag = false;
  double running_max = -std::numeric_limits<double>::infinity();
  for (double ph : phases) {
    const double diag = params_.energy - 2.0 * params_.lambda * std::cos(kTwoPi * ph);
    auto sum = log_add_flagged(LogScalar::from_real(diag) * p_prev, -p_prev2);
    flag = flag || sum.cancellation;
    p_prev2 = p_prev;
    p_prev = sum.value;
    if (p_prev.sign != 0) running_max = std::max(running_max, p_prev.logmag);
  }
  if (p_prev.sign == 0 ||
      p_prev.logmag < running_max + std::log(opt_.cancellation_rel)) {
    flag = true;
  }
  if (cancellation) *cancellation = flag;
  return p_prev;
}

BoxDeterminant GreensEngine::box_det(Interval iv, std::optional<double> phase_override) const {
  const long long len = iv.length();
  // Empty box: determinant 1; one below empty: P_{-1} = 0.
  if (len == 0) return {iv, LogScalar::one(), 0.0, false};
  if (len == -1) return {iv, LogScalar::zero(), 0.0, false};
  if (len < -1) raise(ErrorCode::ConfigInvalid, "box interval must satisfy x2 >= x1 - 2");
  if (len > opt_.length_budget) {
    raise(ErrorCode::BudgetExceeded, "box length " + std::to_string(len));
  }
  std::vector<double> phases(static_cast<size_t>(len));
  if (phase_override) {
    // Long-double stepping keeps the phase drift at the 1e-17 level over
    // the contracted lengths, so both determinant routes agree to 1e-10.
    const long double alpha = lattice_->alpha_ld();
    const long double base = static_cast<long double>(*phase_override);
    for (long long j = 0; j < len; ++j) {
      long double ph = base + static_cast<long double>(j) * alpha;
      ph -= std::floor(static_cast<double>(ph));
      while (ph >= 1.0L) ph -= 1.0L;
      while (ph < 0.0L) ph += 1.0L;
      phases[static_cast<size_t>(j)] = static_cast<double>(ph);
    }
  } else {
    lattice_->fill(iv.lo, len, phases.data());
  }
  BoxDeterminant out;
  out.interval = iv;
  out.theta_base = phases.front();
  out.value = det_recursion(phases, &out.cancellation);
  return out;
}

EdgeEntries GreensEngine::green_edge_entries(Interval iv, long long y) const {
  if (y < iv.lo || y > iv.hi) raise(ErrorCode::ConfigInvalid, "y outside the interval");
  BoxDeterminant den = box_det(iv);
  if (den.value.sign == 0) {
    raise(ErrorCode::Singular, "restriction determinant vanishes on [" +
                                   std::to_string(iv.lo) + "," + std::to_string(iv.hi) + "]");
  }
  EdgeEntries out;
  out.cancellation = den.cancellation;
  LogScalar num_left = LogScalar::one();   // empty box [y+1, x2] when y == x2
  LogScalar num_right = LogScalar::one();  // empty box [x1, y-1] when y == x1
  if (y < iv.hi) {
    BoxDeterminant b = box_det({y + 1, iv.hi});
    num_left = b.value;
    out.cancellation = out.cancellation || b.cancellation;
  }
  if (y > iv.lo) {
    BoxDeterminant b = box_det({iv.lo, y - 1});
    num_right = b.value;
    out.cancellation = out.cancellation || b.cancellation;
  }
  // With the E - H determinant flavor and unit off-diagonals the restricted
  // resolvent entries carry one overall sign: G(x1,y) = -P_{[y+1,x2]}/P.
  out.g_left = -(num_left / den.value);
  out.g_right = -(num_right / den.value);
  return out;
}

LogScalar GreensEngine::block_identity_residual(const Eigenfunction& phi, Interval iv,
                                                long long y) const {
  if (!phi.contains(iv.lo - 1) || !phi.contains(iv.hi + 1)) {
    raise(ErrorCode::RangeExceeded, "phi must cover [x1-1, x2+1]");
  }
  // Validate the eigen-equation pointwise on the interval.
  std::vector<double> phases(static_cast<size_t>(iv.length()));
  lattice_->fill(iv.lo, iv.length(), phases.data());
  for (long long x = iv.lo; x <= iv.hi; ++x) {
    const double diag = params_.energy -
                        2.0 * params_.lambda * std::cos(kTwoPi * phases[static_cast<size_t>(x - iv.lo)]);
    LogScalar r = phi.at(x + 1) + phi.at(x - 1) - LogScalar::from_real(diag) * phi.at(x);
    double local = std::max({phi.at(x + 1).abs().logmag, phi.at(x - 1).abs().logmag,
                             (LogScalar::from_real(diag) * phi.at(x)).abs().logmag});
    if (!r.is_zero() && r.logmag > local + std::log(1e-8)) {
      raise(ErrorCode::NotAnEigenfunctionLocally,
            "eigen-equation residual too large at site " + std::to_string(x));
    }
  }
  EdgeEntries g = green_edge_entries(iv, y);
  LogScalar r = phi.at(y) + g.g_left * phi.at(iv.lo - 1) + g.g_right * phi.at(iv.hi + 1);
  return r.abs();
}

Klem2Audit GreensEngine::klem2_audit(long long x, long long p1, long long p2, int n,
                                     double epsilon, double C) const {
  auto [pn, qn_big] = params_.freq.convergent(n);
  const double qn = qn_big.convert_to<double>();
  if (x < 0 || x > static_cast<long long>(qn / 4.0) + 1) {
    raise(ErrorCode::ConfigInvalid, "x must lie in [0, q_n/4]");
  }
  if (std::fabs(static_cast<double>(p1) - qn / 2.0) > 20.0 * epsilon * qn + 1.0) {
    raise(ErrorCode::ConfigInvalid, "p1 must be within 20 eps q_n of q_n/2");
  }
  if (std::fabs(static_cast<double>(p2) - qn) > 20.0 * epsilon * qn + 1.0) {
    raise(ErrorCode::ConfigInvalid, "p2 must be within 20 eps q_n of q_n");
  }
  const double L = params_.log_lambda();
  auto one = [&](Interval iv, double claimed) {
    Klem2Bound b;
    b.interval = iv;
    BoxDeterminant d = box_det(iv);
    if (d.value.sign == 0) raise(ErrorCode::Singular, "vanishing box determinant in klem2");
    b.measured_log = d.value.logmag;
    b.claimed_log = claimed;
    b.cancellation = d.cancellation;
    b.pass = b.measured_log <= b.claimed_log;
    return b;
  };
  const double slack = C * epsilon * qn;
  Klem2Audit out;
  out.left_half = one({-x, p1}, L * (qn / 2.0 - static_cast<double>(x)) + slack);
  out.right_half = one({-p1, x}, L * (qn / 2.0 - static_cast<double>(x)) + slack);
  out.full = one({-x, p2}, L * (qn - static_cast<double>(x)) + slack);
  return out;
}

NumeratorAudit GreensEngine::numerator_bound_audit(Interval iv, double epsilon,
                                                   long long min_length) const {
  NumeratorAudit out;
  out.interval = iv;
  BoxDeterminant d = box_det(iv);
  out.measured = d.value.abs();
  const double L = params_.log_lambda();
  out.bound = LogScalar::from_log(1, (L + epsilon) * static_cast<double>(iv.hi - iv.lo));
  out.exempt = iv.length() < min_length;
  out.pass = out.exempt || abs_leq(out.measured, out.bound);
  return out;
}

}  // namespace amolab
