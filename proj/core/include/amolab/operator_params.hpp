#pragma once

#include <cmath>

#include "amolab/frequency.hpp"
#include "amolab/phase.hpp"

namespace amolab {

// Parameter bundle (lambda, alpha, theta, E) for one operator/cocycle instance.
struct OperatorParams {
  double lambda = 0.0;
  Frequency freq;
  Phase theta;
  double energy = 0.0;

  double log_lambda() const { return std::log(std::fabs(lambda)); }

  // ln|lambda| > 2 * beta at the working depth is the regime of interest;
  // callers treat a false return as a warning, not an error.
  bool in_regime(int depth, double margin = 0.0) const {
    if (lambda == 0.0) return false;
    return log_lambda() > 2.0 * freq.beta_tail(depth) + margin;
  }
};

}  // namespace amolab
