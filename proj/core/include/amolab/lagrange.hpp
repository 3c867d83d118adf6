#pragma once

#include <span>
#include <string>
#include <vector>

#include "amolab/log_scalar.hpp"
#include "amolab/operator_params.hpp"

namespace amolab {

struct LagrangeTerms {
  std::vector<double> lag;  // Lag_m per node
  std::string method;       // "critical-points" or "grid+refine"
};

// ln prod_{j != m} |x - c_j| / |c_m - c_j| for nodes c = cos 2 pi theta.
double log_node_product(std::span<const double> cos_nodes, size_t m, double x);

// Lag_m = ln max_{x in [-1,1]} prod_{j != m} |x - c_j|/|c_m - c_j| for every m.
// Exact critical-point maximization for <= 64 nodes, shared-grid search with
// local refinement above that.  DegenerateNodes on coinciding cos values.
LagrangeTerms lagrange_terms(std::span<const double> cos_nodes);
LagrangeTerms lagrange_terms_from_phases(std::span<const double> thetas);

struct UniformWitness {
  size_t m = 0;            // best witness index
  LogScalar lhs;           // |P_k(theta_m - (k-1)/2 alpha)|
  LogScalar rhs;           // e^{k L - Lag_m} / (k+1)
  bool pass = false;       // lhs >= rhs for some m
  std::vector<double> lag;
};

// Witness search for the interpolation lower bound: with k+1 = |thetas|,
// some node satisfies |P_k(theta_m - (k-1)/2 alpha)| >= e^{kL - Lag_m}/(k+1).
UniformWitness uniform_witness(const OperatorParams& params, std::span<const double> thetas);

// P_k at a raw base phase (recursion P_j = (E - v) P_{j-1} - P_{j-2} with
// phases stepped by alpha in binary64).
LogScalar p_k_at_phase(const OperatorParams& params, long long k, double base_phase);

}  // namespace amolab
