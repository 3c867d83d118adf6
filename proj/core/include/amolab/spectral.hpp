#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "amolab/eigenfunction.hpp"
#include "amolab/operator_params.hpp"
#include "amolab/phase_lattice.hpp"

namespace amolab {

// Dirichlet truncation on [-N, N]: diagonal 2 lambda cos 2 pi(theta + x alpha),
// off-diagonal ones.
struct TridiagonalOperator {
  long long N = 0;
  std::vector<double> diag;  // sites -N..N

  long long size() const { return 2 * N + 1; }
  static TridiagonalOperator build(const OperatorParams& params, long long N);
  static TridiagonalOperator build(const OperatorParams& params, long long N,
                                   double theta_shift);
};

struct EigenPair {
  double energy = 0.0;
  std::vector<double> vector;  // sites -N..N, unit norm
  double residual = 0.0;       // ||H v - E v|| / ||v||
};

// All eigenpairs, or those with energy inside the window.
std::vector<EigenPair> eigenpairs(const TridiagonalOperator& op,
                                  std::optional<std::pair<double, double>> window = {});
std::vector<double> eigenvalues_only(const TridiagonalOperator& op);

double boundary_mass(const EigenPair& pair, long long boundary_sites);
long long argmax_site(const EigenPair& pair);  // site index in [-N, N]

struct GenEfOptions {
  unsigned max_digits = 20000;
  unsigned min_digits = 40;
  double refine_radius = 1e-9;       // look for a sign change of P within this
  double temperance_cap = 1e8;       // NoTemperateDirection above this sup-ratio
  int scan_points = 33;
  int golden_iterations = 60;
  bool polish = true;                // close the scan with the boundary-kill ratio
};

struct GenEfReport {
  unsigned digits = 0;
  bool refined = false;
  double refined_shift = 0.0;        // refined E minus input E
  double sup_ratio = 0.0;            // min over the family of max |phi(k)|/(1+|k|)
  bool temperate_bound = false;      // |phi(k)| <= 1 + |k| on the whole range
  bool polished = false;
  double phi_minus1 = 0.0;
  std::string method;
};

// Generalized eigenfunction on [-M, M] with phi(0) = 1, built by propagating
// (phi(0), phi(-1)) at adaptive precision; phi(-1) minimizes
// max_k |phi(k)|/(1+|k|) over the one-parameter family (scan + golden-section,
// optionally closed by the Dirichlet boundary-kill ratio).  E is first
// refined to the nearby root of P_{[-M,M]} when one lies within refine_radius.
Eigenfunction generalized_eigenfunction(const OperatorParams& params, long long M,
                                        const GenEfOptions& opt = {},
                                        GenEfReport* report = nullptr);

struct DecayRateResult {
  double rate = 0.0;           // min of the per-side least-squares slopes
  double rate_plus = 0.0, rate_minus = 0.0;
  double theorem_bound = 0.0;  // -(ln|lambda| - 2 beta_est)
  bool satisfied = false;      // rate <= theorem_bound + slack
  bool out_of_regime = false;  // ln lambda <= 2 beta_est + margin
  long long points_plus = 0, points_minus = 0;
};

struct DecayFitOptions {
  double skip_fraction = 0.10;  // drop this fraction of sites at each end
  long long center = 0;         // fit against |k - center|
  double slack = 0.0;
  int beta_depth = 40;
};

DecayRateResult decay_rate(const Eigenfunction& phi, const OperatorParams& params,
                           const DecayFitOptions& opt = {});

struct SpectrumSample {
  std::vector<double> energies;      // sorted, deduplicated at 1e-6
  double hausdorff_half_grids = 0.0; // distance between the two half-grid spectra
  int theta_grid = 0;
  long long N = 0;
};

SpectrumSample spectrum_sample(const OperatorParams& params, int theta_grid, long long N);

}  // namespace amolab
