#include "amolab/lagrange.hpp"

#include <algorithm>
#include <cmath>

#include "amolab/errors.hpp"

namespace amolab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_distinct(std::span<const double> nodes) {
  std::vector<double> s(nodes.begin(), nodes.end());
  std::sort(s.begin(), s.end());
  for (size_t i = 1; i < s.size(); ++i) {
    if (s[i] == s[i - 1]) {
      raise(ErrorCode::DegenerateNodes, "coinciding interpolation nodes");
    }
  }
}

// Sum over j != m of ln|x - c_j| (the unnormalized objective).
double log_numer(std::span<const double> nodes, size_t m, double x) {
  double s = 0.0;
  for (size_t j = 0; j < nodes.size(); ++j) {
    if (j == m) continue;
    s += std::log(std::fabs(x - nodes[j]));
  }
  return s;
}

double denom_log(std::span<const double> nodes, size_t m) {
  double s = 0.0;
  for (size_t j = 0; j < nodes.size(); ++j) {
    if (j == m) continue;
    s += std::log(std::fabs(nodes[m] - nodes[j]));
  }
  return s;
}

// One Lag_m by exact critical points: the maximum of |N(x)| on [-1,1] sits at
// an endpoint or at a zero of N'(x), one per gap between consecutive roots.
double lag_critical(std::span<const double> nodes, size_t m) {
  std::vector<double> others;
  others.reserve(nodes.size() - 1);
  for (size_t j = 0; j < nodes.size(); ++j) {
    if (j != m) others.push_back(nodes[j]);
  }
  if (others.empty()) return 0.0;  // empty product
  std::sort(others.begin(), others.end());

  auto h = [&](double x) {  // N'(x)/N(x)
    double s = 0.0;
    for (double c : others) s += 1.0 / (x - c);
    return s;
  };

  double best = std::max(log_numer(nodes, m, -1.0), log_numer(nodes, m, 1.0));
  for (size_t i = 0; i + 1 < others.size(); ++i) {
    double a = others[i], b = others[i + 1];
    if (!(a < b)) continue;
    // h decreases from +inf to -inf on (a, b); bisect.
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      (h(mid) > 0.0 ? a : b) = mid;
    }
    const double x = 0.5 * (a + b);
    if (x >= -1.0 && x <= 1.0) best = std::max(best, log_numer(nodes, m, x));
  }
  return best - denom_log(nodes, m);
}

}  // namespace

double log_node_product(std::span<const double> cos_nodes, size_t m, double x) {
  return log_numer(cos_nodes, m, x) - denom_log(cos_nodes, m);
}

LagrangeTerms lagrange_terms(std::span<const double> cos_nodes) {
  check_distinct(cos_nodes);
  const size_t n = cos_nodes.size();
  LagrangeTerms out;
  out.lag.resize(n);
  if (n <= 64) {
    out.method = "critical-points";
    for (size_t m = 0; m < n; ++m) out.lag[m] = lag_critical(cos_nodes, m);
    return out;
  }

  out.method = "grid+refine";
  constexpr int kGrid = 100001;
  std::vector<double> xs(kGrid), f(kGrid);
  for (int i = 0; i < kGrid; ++i) {
    xs[i] = -1.0 + 2.0 * i / (kGrid - 1);
    double s = 0.0;
    for (double c : cos_nodes) s += std::log(std::fabs(xs[i] - c));
    f[i] = s;
  }
  const double invphi = 0.6180339887498949;
  for (size_t m = 0; m < n; ++m) {
    const double cm = cos_nodes[m];
    int best_i = 0;
    double best_v = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < kGrid; ++i) {
      double v;
      if (std::fabs(xs[i] - cm) < 1e-12) {
        v = log_numer(cos_nodes, m, xs[i]);
      } else {
        v = f[i] - std::log(std::fabs(xs[i] - cm));
      }
      if (v > best_v) {
        best_v = v;
        best_i = i;
      }
    }
    double a = xs[std::max(0, best_i - 1)], b = xs[std::min(kGrid - 1, best_i + 1)];
    double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
    double f1 = log_numer(cos_nodes, m, x1), f2 = log_numer(cos_nodes, m, x2);
    for (int it = 0; it < 40; ++it) {
      if (f1 >= f2) {
        b = x2; x2 = x1; f2 = f1;
        x1 = b - invphi * (b - a);
        f1 = log_numer(cos_nodes, m, x1);
      } else {
        a = x1; x1 = x2; f1 = f2;
        x2 = a + invphi * (b - a);
        f2 = log_numer(cos_nodes, m, x2);
      }
    }
    out.lag[m] = std::max(best_v, std::max(f1, f2)) - denom_log(cos_nodes, m);
  }
  return out;
}

LagrangeTerms lagrange_terms_from_phases(std::span<const double> thetas) {
  std::vector<double> c(thetas.size());
  for (size_t i = 0; i < thetas.size(); ++i) c[i] = std::cos(kTwoPi * thetas[i]);
  return lagrange_terms(c);
}

LogScalar p_k_at_phase(const OperatorParams& params, long long k, double base_phase) {
  const double alpha = params.freq.value();
  LogScalar p_prev2 = LogScalar::zero(), p_prev = LogScalar::one();
  double ph = base_phase;
  for (long long j = 0; j < k; ++j) {
    const double diag = params.energy - 2.0 * params.lambda * std::cos(kTwoPi * ph);
    LogScalar p = LogScalar::from_real(diag) * p_prev - p_prev2;
    p_prev2 = p_prev;
    p_prev = p;
    ph += alpha;
    if (ph >= 1.0) ph -= 1.0;
  }
  return p_prev;
}

UniformWitness uniform_witness(const OperatorParams& params, std::span<const double> thetas) {
  if (thetas.empty()) raise(ErrorCode::ConfigInvalid, "need at least one node");
  const long long k = static_cast<long long>(thetas.size()) - 1;
  auto lag = lagrange_terms_from_phases(thetas);
  const double L = params.log_lambda();
  const double alpha = params.freq.value();
  UniformWitness out;
  out.lag = lag.lag;
  double best_gap = -std::numeric_limits<double>::infinity();
  for (size_t m = 0; m < thetas.size(); ++m) {
    const double base = thetas[m] - 0.5 * static_cast<double>(k - 1) * alpha;
    LogScalar lhs = p_k_at_phase(params, k, base - std::floor(base)).abs();
    LogScalar rhs = LogScalar::from_log(
        1, static_cast<double>(k) * L - lag.lag[m] -
               std::log(static_cast<double>(k + 1)));
    const double gap = (lhs.is_zero() ? -std::numeric_limits<double>::infinity() : lhs.logmag) -
                       rhs.logmag;
    if (gap > best_gap) {
      best_gap = gap;
      out.m = m;
      out.lhs = lhs;
      out.rhs = rhs;
    }
    if (gap >= 0.0) out.pass = true;
  }
  return out;
}

}  // namespace amolab
