#include "amolab/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>

namespace amolab {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

TridiagonalOperator TridiagonalOperator::build(const OperatorParams& params, long long N) {
  TridiagonalOperator op;
  op.N = N;
  op.diag.resize(static_cast<size_t>(2 * N + 1));
  PhaseLattice lattice(params.freq, params.theta, N + 1);
  std::vector<double> ph(op.diag.size());
  lattice.fill(-N, 2 * N + 1, ph.data());
  for (size_t i = 0; i < op.diag.size(); ++i) {
    op.diag[i] = 2.0 * params.lambda * std::cos(kTwoPi * ph[i]);
  }
  return op;
}

TridiagonalOperator TridiagonalOperator::build(const OperatorParams& params, long long N,
                                               double theta_shift) {
  OperatorParams p = params;
  p.theta = Phase::real(theta_shift);
  return build(p, N);
}

namespace {

double pair_residual(const TridiagonalOperator& op, const std::vector<double>& v, double e) {
  const long long n = op.size();
  double s = 0.0;
  for (long long i = 0; i < n; ++i) {
    double r = (op.diag[static_cast<size_t>(i)] - e) * v[static_cast<size_t>(i)];
    if (i > 0) r += v[static_cast<size_t>(i - 1)];
    if (i + 1 < n) r += v[static_cast<size_t>(i + 1)];
    s += r * r;
  }
  return std::sqrt(s);
}

}  // namespace

std::vector<EigenPair> eigenpairs(const TridiagonalOperator& op,
                                  std::optional<std::pair<double, double>> window) {
  const lapack_int n = static_cast<lapack_int>(op.size());
  if (n < 1) raise(ErrorCode::ConfigInvalid, "operator size must be >= 1");
  std::vector<double> d(op.diag);
  std::vector<double> e(static_cast<size_t>(n > 1 ? n - 1 : 1), 1.0);
  std::vector<double> w(static_cast<size_t>(n));
  std::vector<double> z(static_cast<size_t>(n) * static_cast<size_t>(n));
  std::vector<lapack_int> isuppz(2 * static_cast<size_t>(n));
  lapack_int m = 0;
  const char range = window ? 'V' : 'A';
  const double vl = window ? window->first : 0.0;
  const double vu = window ? window->second : 0.0;
  lapack_int info =
      LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', range, n, d.data(), e.data(), vl, vu, 0, 0,
                     0.0, &m, w.data(), z.data(), n, isuppz.data());
  if (info != 0) raise(ErrorCode::Singular, "dstevr failed with info " + std::to_string(info));
  std::vector<EigenPair> out(static_cast<size_t>(m));
  for (lapack_int j = 0; j < m; ++j) {
    out[static_cast<size_t>(j)].energy = w[static_cast<size_t>(j)];
    auto& v = out[static_cast<size_t>(j)].vector;
    v.assign(z.begin() + static_cast<size_t>(j) * n, z.begin() + (static_cast<size_t>(j) + 1) * n);
    out[static_cast<size_t>(j)].residual = pair_residual(op, v, w[static_cast<size_t>(j)]);
  }
  return out;
}

std::vector<double> eigenvalues_only(const TridiagonalOperator& op) {
  const lapack_int n = static_cast<lapack_int>(op.size());
  std::vector<double> d(op.diag);
  std::vector<double> e(static_cast<size_t>(n > 1 ? n - 1 : 1), 1.0);
  lapack_int info = LAPACKE_dsterf(n, d.data(), e.data());
  if (info != 0) raise(ErrorCode::Singular, "dsterf failed with info " + std::to_string(info));
  return d;
}

double boundary_mass(const EigenPair& pair, long long boundary_sites) {
  const long long n = static_cast<long long>(pair.vector.size());
  const long long b = std::min(boundary_sites, n / 2);
  double s = 0.0;
  for (long long i = 0; i < b; ++i) {
    s += pair.vector[static_cast<size_t>(i)] * pair.vector[static_cast<size_t>(i)];
    s += pair.vector[static_cast<size_t>(n - 1 - i)] * pair.vector[static_cast<size_t>(n - 1 - i)];
  }
  return s;
}

long long argmax_site(const EigenPair& pair) {
  const long long n = static_cast<long long>(pair.vector.size());
  long long best = 0;
  double bv = -1.0;
  for (long long i = 0; i < n; ++i) {
    const double a = std::fabs(pair.vector[static_cast<size_t>(i)]);
    if (a > bv) {
      bv = a;
      best = i;
    }
  }
  return best - (n - 1) / 2;
}

namespace {

// Diagonal entries E - v(x) for x in [-M-1, M+1] at working precision.
struct DynDiag {
  std::vector<DynFloat> at;  // index x + M + 1
  long long M;
  const DynFloat& operator()(long long x) const {
    return at[static_cast<size_t>(x + M + 1)];
  }
};

DynDiag build_diag(const OperatorParams& params, const PhaseLattice& lattice, long long M,
                   const DynFloat& energy) {
  DynDiag d;
  d.M = M;
  d.at.resize(static_cast<size_t>(2 * M + 3));
  const DynFloat two_pi = 2 * acos(DynFloat(-1));
  const DynFloat two_lambda = 2 * DynFloat(params.lambda);
  for (long long x = -M - 1; x <= M + 1; ++x) {
    d.at[static_cast<size_t>(x + M + 1)] =
        energy - two_lambda * cos(two_pi * lattice.phase_dyn(x));
  }
  return d;
}

// P_{[-M,M]}(E) through the three-term recursion, values kept in DynFloat.
DynFloat char_poly(const DynDiag& diag, long long M) {
  DynFloat p_prev2(0), p_prev(1);
  for (long long x = -M; x <= M; ++x) {
    DynFloat p = diag(x) * p_prev - p_prev2;
    p_prev2 = p_prev;
    p_prev = p;
  }
  return p_prev;
}

// Solutions from (phi(0), phi(-1)) = (1, 0) and (0, 1) on [-M-1, M+1].
struct BasisPair {
  std::vector<DynFloat> u, w;  // index x + M + 1
  long long M;
  const DynFloat& uu(long long x) const { return u[static_cast<size_t>(x + M + 1)]; }
  const DynFloat& ww(long long x) const { return w[static_cast<size_t>(x + M + 1)]; }
};

BasisPair propagate_basis(const DynDiag& diag, long long M) {
  BasisPair b;
  b.M = M;
  const size_t len = static_cast<size_t>(2 * M + 3);
  b.u.resize(len);
  b.w.resize(len);
  auto run = [&](std::vector<DynFloat>& out, double f0, double fm1) {
    out[static_cast<size_t>(M + 1)] = DynFloat(f0);        // x = 0
    out[static_cast<size_t>(M)] = DynFloat(fm1);           // x = -1
    for (long long x = 0; x < M + 1; ++x) {                // forward to M+1
      out[static_cast<size_t>(x + 1 + M + 1)] =
          diag(x) * out[static_cast<size_t>(x + M + 1)] - out[static_cast<size_t>(x - 1 + M + 1)];
    }
    for (long long x = -1; x >= -M; --x) {                 // backward to -M-1
      out[static_cast<size_t>(x - 1 + M + 1)] =
          diag(x) * out[static_cast<size_t>(x + M + 1)] - out[static_cast<size_t>(x + 1 + M + 1)];
    }
  };
  run(b.u, 1.0, 0.0);
  run(b.w, 0.0, 1.0);
  return b;
}

// max over |x| <= M of |u + t w| / (1 + |x|), in log domain, generic scalar.
template <class F>
double sup_ratio(const std::vector<F>& u, const std::vector<F>& w, long long M, const F& t) {
  double best = -std::numeric_limits<double>::infinity();
  for (long long x = -M; x <= M; ++x) {
    const size_t i = static_cast<size_t>(x + M + 1);
    F val = u[i] + t * w[i];
    const double lg = log_abs(val) - std::log1p(static_cast<double>(std::llabs(x)));
    if (lg > best) best = lg;
  }
  return best;
}

}  // namespace

Eigenfunction generalized_eigenfunction(const OperatorParams& params, long long M,
                                        const GenEfOptions& opt, GenEfReport* report) {
  if (M < 2) raise(ErrorCode::ConfigInvalid, "range must satisfy M >= 2");
  const double growth = std::log(2.0 + std::fabs(params.energy) + 2.0 * std::fabs(params.lambda));
  unsigned digits = static_cast<unsigned>(2.0 * static_cast<double>(M) * growth / 2.302585) + 60;
  digits = std::max(digits, opt.min_digits);
  if (digits > opt.max_digits) {
    raise(ErrorCode::PrecisionExhausted,
          "range needs " + std::to_string(digits) + " digits, cap is " +
              std::to_string(opt.max_digits));
  }
  GenEfReport rep;
  rep.digits = digits;

  PrecisionGuard guard(digits);
  PhaseLattice lattice(params.freq, params.theta, M + 2,
                       -2.302585 * (static_cast<double>(digits) + 20.0));

  // Refine E to the nearby root of P_{[-M,M]} when a sign change brackets one.
  DynFloat energy(params.energy);
  {
    DynFloat lo = energy - DynFloat(opt.refine_radius);
    DynFloat hi = energy + DynFloat(opt.refine_radius);
    DynDiag dlo = build_diag(params, lattice, M, lo);
    DynDiag dhi = build_diag(params, lattice, M, hi);
    DynFloat plo = char_poly(dlo, M);
    DynFloat phi_val = char_poly(dhi, M);
    if (plo != 0 && phi_val != 0 && ((plo > 0) != (phi_val > 0))) {
      // Safeguarded secant (Illinois) on the bracket.
      DynFloat a = lo, b = hi, fa = plo, fb = phi_val;
      const DynFloat tol = pow(DynFloat(10), -static_cast<int>(digits) + 8) *
                           (abs(energy) + 1);
      for (int it = 0; it < 20000 && b - a > tol; ++it) {
        DynFloat c = b - fb * (b - a) / (fb - fa);
        if (!(c > a && c < b)) c = (a + b) / 2;
        DynDiag dc = build_diag(params, lattice, M, c);
        DynFloat fc = char_poly(dc, M);
        if (fc == 0) { a = b = c; break; }
        if ((fc > 0) == (fa > 0)) {
          a = c; fa = fc;
          fb /= 2;  // Illinois damping keeps the secant from stalling
        } else {
          b = c; fb = fc;
          fa /= 2;
        }
      }
      DynFloat refined = (a + b) / 2;
      rep.refined = true;
      rep.refined_shift = (refined - energy).convert_to<double>();
      energy = refined;
    }
  }

  DynDiag diag = build_diag(params, lattice, M, energy);
  BasisPair basis = propagate_basis(diag, M);

  // Scan + golden-section at reduced precision to bracket the minimizer of
  // the (quasiconvex) sup ratio, then evaluate candidates at full precision.
  std::vector<BigFloat> u100(basis.u.size()), w100(basis.w.size());
  for (size_t i = 0; i < basis.u.size(); ++i) {
    u100[i] = BigFloat(basis.u[i]);
    w100[i] = BigFloat(basis.w[i]);
  }
  const double t_span = std::fabs(params.energy) + 2.0 * std::fabs(params.lambda) + 3.0;
  double best_t = 0.0, best_g = std::numeric_limits<double>::infinity();
  for (int i = 0; i < opt.scan_points; ++i) {
    const double t = -t_span + 2.0 * t_span * i / (opt.scan_points - 1);
    const double g = sup_ratio(u100, w100, M, BigFloat(t));
    if (g < best_g) { best_g = g; best_t = t; }
  }
  {
    const double step = 2.0 * t_span / (opt.scan_points - 1);
    double a = best_t - step, b = best_t + step;
    const double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
    double f1 = sup_ratio(u100, w100, M, BigFloat(x1));
    double f2 = sup_ratio(u100, w100, M, BigFloat(x2));
    for (int it = 0; it < opt.golden_iterations; ++it) {
      if (f1 <= f2) {
        b = x2; x2 = x1; f2 = f1;
        x1 = b - invphi * (b - a);
        f1 = sup_ratio(u100, w100, M, BigFloat(x1));
      } else {
        a = x1; x1 = x2; f1 = f2;
        x2 = a + invphi * (b - a);
        f2 = sup_ratio(u100, w100, M, BigFloat(x2));
      }
    }
    best_t = (a + b) / 2;
  }

  DynFloat t_final(best_t);
  double g_final = sup_ratio(basis.u, basis.w, M, t_final);
  rep.method = "scan+golden";

  if (opt.polish && basis.ww(M + 1) != 0) {
    // Dirichlet boundary kill: with E at a box eigenvalue this is the vertex
    // of the V-shaped objective.
    DynFloat t_pol = -basis.uu(M + 1) / basis.ww(M + 1);
    const double g_pol = sup_ratio(basis.u, basis.w, M, t_pol);
    if (g_pol < g_final) {
      t_final = t_pol;
      g_final = g_pol;
      rep.method = "scan+golden+boundary-kill";
      rep.polished = true;
    }
  }

  rep.sup_ratio = g_final;
  if (!(g_final <= std::log(opt.temperance_cap))) {
    if (report) *report = rep;
    raise(ErrorCode::NoTemperateDirection,
          "minimized sup |phi(k)|/(1+|k|) is e^" + std::to_string(g_final));
  }

  Eigenfunction phi = Eigenfunction::zeros(-M, M);
  phi.energy = params.energy + rep.refined_shift;
  bool bound_ok = true;
  for (long long x = -M; x <= M; ++x) {
    const size_t i = static_cast<size_t>(x + M + 1);
    DynFloat v = basis.u[i] + t_final * basis.w[i];
    phi.slot(x) = to_log_scalar(v);
    if (!phi.slot(x).is_zero() &&
        phi.slot(x).logmag > std::log1p(static_cast<double>(std::llabs(x))) + 1e-9) {
      bound_ok = false;
    }
  }
  rep.temperate_bound = bound_ok;
  rep.phi_minus1 = t_final.convert_to<double>();
  phi.construction = "propagated(" + rep.method + ", digits=" + std::to_string(digits) + ")";
  if (report) *report = rep;
  return phi;
}

DecayRateResult decay_rate(const Eigenfunction& phi, const OperatorParams& params,
                           const DecayFitOptions& opt) {
  DecayRateResult out;
  const long long c = opt.center;
  if (!phi.contains(c)) raise(ErrorCode::ConfigInvalid, "center outside phi range");

  auto fit_side = [&](int dir, long long* count) -> double {
    const long long extent = dir > 0 ? phi.hi - c : c - phi.lo;
    const long long lo_off = static_cast<long long>(std::ceil(opt.skip_fraction * extent));
    const long long hi_off = static_cast<long long>(std::floor((1.0 - opt.skip_fraction) * extent));
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long long m = 0;
    for (long long off = std::max<long long>(lo_off, 2); off <= hi_off; ++off) {
      const long long k = c + dir * off;
      if (!phi.contains(k) || !phi.contains(k - 1)) continue;
      const double y = phi.pair_log(k);
      if (!std::isfinite(y)) continue;
      const double x = static_cast<double>(off);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
      ++m;
    }
    *count = m;
    if (m < 8) raise(ErrorCode::WindowTooSmall, "fewer than 8 usable fit points on one side");
    const double denom = m * sxx - sx * sx;
    return (m * sxy - sx * sy) / denom;
  };

  out.rate_plus = fit_side(+1, &out.points_plus);
  out.rate_minus = fit_side(-1, &out.points_minus);
  out.rate = std::min(out.rate_plus, out.rate_minus);

  int depth = opt.beta_depth;
  if (!params.freq.extendable()) depth = std::min(depth, params.freq.available_depth() - 1);
  const double beta_est = params.freq.beta_tail(depth);
  const double L = params.log_lambda();
  out.theorem_bound = -(L - 2.0 * beta_est);
  out.out_of_regime = L <= 2.0 * beta_est + 0.05;
  out.satisfied = out.rate <= out.theorem_bound + opt.slack;
  return out;
}

SpectrumSample spectrum_sample(const OperatorParams& params, int theta_grid, long long N) {
  if (theta_grid < 1) raise(ErrorCode::ConfigInvalid, "theta grid must have >= 1 point");
  SpectrumSample out;
  out.theta_grid = theta_grid;
  out.N = N;
  std::vector<double> all;
  std::vector<double> half[2];
  for (int i = 0; i < theta_grid; ++i) {
    const double theta = (i + 0.5) / theta_grid;
    auto ev = eigenvalues_only(TridiagonalOperator::build(params, N, theta));
    all.insert(all.end(), ev.begin(), ev.end());
    half[i % 2].insert(half[i % 2].end(), ev.begin(), ev.end());
  }
  auto dedup = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    std::vector<double> d;
    for (double x : v) {
      if (d.empty() || x - d.back() > 1e-6) d.push_back(x);
    }
    v = std::move(d);
  };
  dedup(all);
  out.energies = std::move(all);
  if (!half[0].empty() && !half[1].empty()) {
    dedup(half[0]);
    dedup(half[1]);
    auto one_sided = [](const std::vector<double>& a, const std::vector<double>& b) {
      double h = 0.0;
      for (double x : a) {
        auto it = std::lower_bound(b.begin(), b.end(), x);
        double d = std::numeric_limits<double>::infinity();
        if (it != b.end()) d = std::min(d, *it - x);
        if (it != b.begin()) d = std::min(d, x - *(it - 1));
        h = std::max(h, d);
      }
      return h;
    };
    out.hausdorff_half_grids = std::max(one_sided(half[0], half[1]), one_sided(half[1], half[0]));
  }
  return out;
}

}  // namespace amolab
