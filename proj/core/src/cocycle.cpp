#include "amolab/cocycle.hpp"

#include <cmath>

#include "amolab/errors.hpp"

namespace amolab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double wrap01(double x) {
  double r = std::fmod(x, 1.0);
  return r < 0 ? r + 1.0 : r;
}

Mat2 inverse_unimodular_step(const Mat2& m) {
  // Step matrices have det 1: inv([[a,-1],[1,0]]) = [[0,1],[-1,a]].
  return {m.a11, -m.a01, -m.a10, m.a00};
}

}  // namespace

Mat2 step_matrix(const OperatorParams& params, double phase) {
  return {params.energy - 2.0 * params.lambda * std::cos(kTwoPi * phase), -1.0, 1.0, 0.0};
}

TransferProduct transfer(const OperatorParams& params, long long k, double base_phase,
                         long long budget) {
  if (std::llabs(k) > budget) {
    raise(ErrorCode::BudgetExceeded, "transfer step count " + std::to_string(k));
  }
  const double alpha = params.freq.value();
  ScaledMatrix2 acc = ScaledMatrix2::identity();
  if (k > 0) {
    for (long long j = 0; j < k; ++j) {
      const double ph = wrap01(base_phase + static_cast<double>(j) * alpha);
      acc = ScaledMatrix2::from(step_matrix(params, ph)) * acc;
    }
  } else if (k < 0) {
    // A_{-|k|}(theta) = A_{|k|}(theta - |k| alpha)^{-1}: inverse steps,
    // leftmost factor at phase theta - |k| alpha.
    const long long kk = -k;
    for (long long j = kk; j >= 1; --j) {
      const double ph = wrap01(base_phase - static_cast<double>(j) * alpha);
      acc = acc * ScaledMatrix2::from(inverse_unimodular_step(step_matrix(params, ph)));
    }
  }
  return {k, wrap01(base_phase), acc};
}

TransferProduct transfer_lattice(const OperatorParams& params, const PhaseLattice& lattice,
                                 long long k, long long m, long long budget) {
  if (std::llabs(k) > budget) {
    raise(ErrorCode::BudgetExceeded, "transfer step count " + std::to_string(k));
  }
  ScaledMatrix2 acc = ScaledMatrix2::identity();
  if (k > 0) {
    std::vector<double> ph(static_cast<size_t>(k));
    lattice.fill(m, k, ph.data());
    for (long long j = 0; j < k; ++j) {
      acc = ScaledMatrix2::from(step_matrix(params, ph[static_cast<size_t>(j)])) * acc;
    }
  } else if (k < 0) {
    const long long kk = -k;
    std::vector<double> ph(static_cast<size_t>(kk));
    lattice.fill(m - kk, kk, ph.data());
    for (long long j = 0; j < kk; ++j) {
      acc = acc * ScaledMatrix2::from(
                      inverse_unimodular_step(step_matrix(params, ph[static_cast<size_t>(j)])));
    }
  }
  return {k, lattice.phase(m), acc};
}

std::array<LogScalar, 2> propagate(const OperatorParams& params, const PhaseLattice& lattice,
                                   std::array<LogScalar, 2> pair, long long m, long long k) {
  if (k <= 0) raise(ErrorCode::ConfigInvalid, "propagate needs k >= 1");
  std::vector<double> ph(static_cast<size_t>(k));
  lattice.fill(m, k, ph.data());
  for (long long j = 0; j < k; ++j) {
    const double diag = params.energy - 2.0 * params.lambda *
                                            std::cos(kTwoPi * ph[static_cast<size_t>(j)]);
    LogScalar next = LogScalar::from_real(diag) * pair[0] - pair[1];
    pair[1] = pair[0];
    pair[0] = next;
  }
  return pair;
}

LyapunovResult lyapunov(const OperatorParams& params, long long k, int samples) {
  if (k < 1 || samples < 1) raise(ErrorCode::ConfigInvalid, "k and samples must be >= 1");
  LyapunovResult out;
  out.k = k;
  out.per_theta.resize(samples);
  const double alpha = params.freq.value();
  for (int i = 0; i < samples; ++i) {
    const double theta0 = (i + 0.5) / samples;
    ScaledMatrix2 acc = ScaledMatrix2::identity();
    double phase = theta0;
    for (long long j = 0; j < k; ++j) {
      acc = ScaledMatrix2::from(step_matrix(params, phase)) * acc;
      phase += alpha;
      if (phase >= 1.0) phase -= 1.0;
    }
    out.per_theta[i] = acc.log_norm() / static_cast<double>(k);
  }
  // Fixed-order pairwise sum for a deterministic, well-conditioned mean.
  std::vector<double> acc(out.per_theta);
  while (acc.size() > 1) {
    std::vector<double> next((acc.size() + 1) / 2);
    for (size_t i = 0; i + 1 < acc.size(); i += 2) next[i / 2] = acc[i] + acc[i + 1];
    if (acc.size() % 2) next.back() = acc.back();
    acc = std::move(next);
  }
  out.mean = acc[0] / samples;
  return out;
}

namespace {

// Transfer product and (optionally) P_k both evaluated in DynFloat.  The
// caller sets precision via PrecisionGuard.
struct DynTransfer {
  DynFloat a00, a01, a10, a11;
};

DynTransfer transfer_dyn(const OperatorParams& params, const PhaseLattice& lattice,
                         long long k, long long m) {
  DynTransfer acc{DynFloat(1), DynFloat(0), DynFloat(0), DynFloat(1)};
  const DynFloat two_pi = 2 * acos(DynFloat(-1));
  for (long long j = 0; j < k; ++j) {
    const DynFloat ph = lattice.phase_dyn(m + j);
    const DynFloat diag = DynFloat(params.energy) -
                          2 * DynFloat(params.lambda) * cos(two_pi * ph);
    // [[diag, -1],[1,0]] * acc
    DynFloat n00 = diag * acc.a00 - acc.a10;
    DynFloat n01 = diag * acc.a01 - acc.a11;
    acc.a10 = acc.a00;
    acc.a11 = acc.a01;
    acc.a00 = n00;
    acc.a01 = n01;
  }
  return acc;
}

double dyn_norm_log(const DynTransfer& m) {
  // Frobenius-based bound is within sqrt(2) of the spectral norm; use the
  // exact 2x2 formula on scaled doubles instead.
  const double l00 = log_abs(m.a00), l01 = log_abs(m.a01), l10 = log_abs(m.a10),
               l11 = log_abs(m.a11);
  const double s = std::max(std::max(l00, l01), std::max(l10, l11));
  if (!std::isfinite(s)) return s;
  auto e = [&](const DynFloat& x, double lx) {
    if (lx == -std::numeric_limits<double>::infinity()) return 0.0;
    return (x > 0 ? 1.0 : -1.0) * std::exp(lx - s);
  };
  Mat2 scaled{e(m.a00, l00), e(m.a01, l01), e(m.a10, l10), e(m.a11, l11)};
  return s + std::log(spectral_norm(scaled));
}

}  // namespace

ShiftDifferenceResult shift_difference(const OperatorParams& params, int n, long long k,
                                       long long j, double epsilon, ShiftMode mode) {
  auto [pn, qn] = params.freq.convergent(n);
  auto [pn1, qn1] = params.freq.convergent(n + 1);
  if (k <= 0 || BigInt(k) > 10 * qn) {
    raise(ErrorCode::ConfigInvalid, "k must be in [1, 10 q_n]");
  }
  if (j < 0) raise(ErrorCode::ConfigInvalid, "j must be >= 0");

  ShiftDifferenceResult out;
  out.k = k;
  out.j = j;
  out.n = n;
  const double L = params.log_lambda();
  out.bound = LogScalar::from_log(
      1, (L + epsilon) * static_cast<double>(k) + std::log(static_cast<double>(std::max<long long>(j, 1))) -
             log_big(qn1));
  if (j == 0) {
    out.measured = LogScalar::zero();
    out.pass = true;
    return out;
  }

  const long long shift = j * qn.convert_to<long long>();
  const double log_scale_est = (L + 0.5) * static_cast<double>(k) + 10.0;

  if (log_scale_est < 600.0) {
    PhaseLattice lattice(params.freq, params.theta, shift + k + 2, -64.0);
    double measured_log;
    double floor_log;
    if (mode == ShiftMode::TransferNorm) {
      auto t0 = transfer_lattice(params, lattice, k, 0);
      auto t1 = transfer_lattice(params, lattice, k, shift);
      auto d = sub(t0.matrix, t1.matrix);
      measured_log = d.log_norm();
      floor_log = std::max(t0.matrix.log_norm(), t1.matrix.log_norm()) +
                  std::log(2e-14 * static_cast<double>(k));
    } else {
      auto t0 = transfer_lattice(params, lattice, k, 0);
      auto t1 = transfer_lattice(params, lattice, k, shift);
      auto diff = log_add_flagged(t0.matrix.entry(0, 0), -t1.matrix.entry(0, 0));
      measured_log = diff.value.is_zero() ? -std::numeric_limits<double>::infinity()
                                          : diff.value.logmag;
      floor_log = std::max(t0.matrix.log_norm(), t1.matrix.log_norm()) +
                  std::log(2e-14 * static_cast<double>(k));
    }
    if (measured_log > floor_log) {
      out.measured = LogScalar::from_log(1, measured_log);
      out.pass = abs_leq(out.measured, out.bound);
      return out;
    }
    // fall through to high precision when the double difference is noise
  }

  // High-precision route.
  const unsigned digits =
      static_cast<unsigned>((L + 1.0) * static_cast<double>(k) / 2.302585) + 60;
  PrecisionGuard guard(digits);
  PhaseLattice lattice(params.freq, params.theta, shift + k + 2,
                       -2.302585 * (static_cast<double>(digits) + 10.0));
  out.high_precision = true;
  DynTransfer t0 = transfer_dyn(params, lattice, k, 0);
  DynTransfer t1 = transfer_dyn(params, lattice, k, shift);
  double measured_log;
  if (mode == ShiftMode::TransferNorm) {
    DynTransfer d{t0.a00 - t1.a00, t0.a01 - t1.a01, t0.a10 - t1.a10, t0.a11 - t1.a11};
    measured_log = dyn_norm_log(d);
  } else {
    measured_log = log_abs(t0.a00 - t1.a00);
  }
  const double floor_log = std::max(dyn_norm_log(t0), dyn_norm_log(t1)) -
                           2.302585 * static_cast<double>(digits - 20);
  if (measured_log <= floor_log && std::isfinite(measured_log)) {
    raise(ErrorCode::PrecisionExhausted,
          "shift difference below the certified floor at " + std::to_string(digits) +
              " digits");
  }
  out.measured = std::isfinite(measured_log) ? LogScalar::from_log(1, measured_log)
                                             : LogScalar::zero();
  out.pass = abs_leq(out.measured, out.bound);
  return out;
}

TelescopingResult telescoping_bound(std::span<const Mat2> a_seq, std::span<const Mat2> b_seq,
                                    double d_const, double d_rate) {
  const size_t n = a_seq.size();
  if (n == 0 || b_seq.size() != n) {
    raise(ErrorCode::ConfigInvalid, "sequences must be nonempty and equal length");
  }
  // Window hypothesis ||A^{k+j-1}...A^{k}|| <= D e^{d j} for all windows.
  for (size_t k = 0; k < n; ++k) {
    ScaledMatrix2 acc = ScaledMatrix2::identity();
    for (size_t j = 1; k + j <= n; ++j) {
      acc = ScaledMatrix2::from(a_seq[k + j - 1]) * acc;
      const double lhs = acc.log_norm();
      const double rhs = std::log(d_const) + d_rate * static_cast<double>(j);
      if (lhs > rhs + 1e-12) {
        raise(ErrorCode::HypothesisViolated,
              "window bound fails at k=" + std::to_string(k + 1) +
                  " j=" + std::to_string(j));
      }
    }
  }

  ScaledMatrix2 exact = ScaledMatrix2::identity();
  ScaledMatrix2 free = ScaledMatrix2::identity();
  double sum_log1p = 0.0;
  for (size_t j = 0; j < n; ++j) {
    exact = ScaledMatrix2::from(a_seq[j] + b_seq[j]) * exact;
    free = ScaledMatrix2::from(a_seq[j]) * free;
    sum_log1p += std::log1p(d_const * std::exp(-d_rate) * spectral_norm(b_seq[j]));
  }
  TelescopingResult out;
  auto diff = sub(exact, free);
  const double lhs_log = diff.log_norm();
  out.lhs = std::isfinite(lhs_log) ? LogScalar::from_log(1, lhs_log) : LogScalar::zero();
  if (sum_log1p <= 0.0) {
    out.rhs = LogScalar::zero();
  } else {
    out.rhs = LogScalar::from_log(
        1, std::log(d_const) + d_rate * static_cast<double>(n) + log_expm1(sum_log1p));
  }
  out.pass = abs_leq(out.lhs, out.rhs);
  return out;
}

}  // namespace amolab
