#pragma once

#include <string>
#include <vector>

#include "amolab/errors.hpp"
#include "amolab/log_scalar.hpp"

namespace amolab {

// Signed log-amplitudes of a lattice function on a contiguous site range.
struct Eigenfunction {
  long long lo = 0, hi = -1;
  std::vector<LogScalar> amp;
  double energy = 0.0;
  std::string construction;

  bool contains(long long k) const { return k >= lo && k <= hi; }

  const LogScalar& at(long long k) const {
    if (!contains(k)) {
      raise(ErrorCode::RangeExceeded,
            "site " + std::to_string(k) + " outside [" + std::to_string(lo) + ", " +
                std::to_string(hi) + "]");
    }
    return amp[static_cast<size_t>(k - lo)];
  }

  LogScalar& slot(long long k) { return amp[static_cast<size_t>(k - lo)]; }

  static Eigenfunction zeros(long long lo, long long hi) {
    Eigenfunction f;
    f.lo = lo;
    f.hi = hi;
    f.amp.assign(static_cast<size_t>(hi - lo + 1), LogScalar::zero());
    return f;
  }

  // (1/2) ln(phi^2(k) + phi^2(k-1)); -inf if both vanish.
  double pair_log(long long k) const {
    const LogScalar a = at(k).abs(), b = at(k - 1).abs();
    LogScalar s = (a * a) + (b * b);
    if (s.is_zero()) return -std::numeric_limits<double>::infinity();
    return 0.5 * s.logmag;
  }
};

}  // namespace amolab
