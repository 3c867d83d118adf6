#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "amolab/operator_params.hpp"
#include "amolab/phase_lattice.hpp"
#include "amolab/scaled_matrix.hpp"

namespace amolab {

// One-step Schroedinger cocycle matrix [[E - 2 lambda cos(2 pi phase), -1], [1, 0]].
Mat2 step_matrix(const OperatorParams& params, double phase);

struct TransferProduct {
  long long k = 0;
  double base_phase = 0.0;
  ScaledMatrix2 matrix;
};

// k-step transfer product at a raw base phase, stepping phase + j*alpha in
// binary64.  k > 0: A(theta+(k-1)a)...A(theta); k == 0: identity;
// k < 0: A_{-k}(theta) = A_k(theta - k alpha)^{-1}.
TransferProduct transfer(const OperatorParams& params, long long k, double base_phase,
                         long long budget = 10'000'000);

// Same product with exact lattice phases, based at lattice site m
// (base phase theta + m*alpha).
TransferProduct transfer_lattice(const OperatorParams& params, const PhaseLattice& lattice,
                                 long long k, long long m, long long budget = 10'000'000);

// (phi(m), phi(m-1)) -> (phi(k+m), phi(k+m-1)) in LogScalar arithmetic.
std::array<LogScalar, 2> propagate(const OperatorParams& params, const PhaseLattice& lattice,
                                   std::array<LogScalar, 2> pair, long long m, long long k);

struct LyapunovResult {
  double mean = 0.0;
  std::vector<double> per_theta;  // (1/k) ln ||A_k(theta_i)||
  long long k = 0;
};

// Finite-k Lyapunov estimate averaged over equidistributed phases
// theta_i = (i + 1/2)/samples.
LyapunovResult lyapunov(const OperatorParams& params, long long k, int samples);

enum class ShiftMode { TransferNorm, Determinant };

struct ShiftDifferenceResult {
  LogScalar measured;
  LogScalar bound;     // e^{(L+eps) k} * j / q_{n+1}
  bool pass = false;
  bool high_precision = false;
  long long k = 0, j = 0;
  int n = 0;
};

// Gordon shift audit: ||A_k(theta) - A_k(theta + j q_n alpha)|| (or the
// |P_k - P_k| entrywise version) against e^{(L+eps)k} j / q_{n+1}.
// Runs in the high-precision mode when (L+eps)*k leaves binary64 range or
// when the difference cannot be certified in doubles.
ShiftDifferenceResult shift_difference(const OperatorParams& params, int n, long long k,
                                       long long j, double epsilon,
                                       ShiftMode mode = ShiftMode::TransferNorm);

struct TelescopingResult {
  LogScalar lhs;   // ||(A^n+B^n)...(A^1+B^1) - A^n...A^1||
  LogScalar rhs;   // D e^{dn} (prod(1 + D e^{-d} ||B^j||) - 1)
  bool pass = false;
};

// Perturbed-product bound.  The window hypothesis ||A^{k+j-1}...A^k|| <= D e^{dj}
// is verified for every window first; HypothesisViolated if it fails.
TelescopingResult telescoping_bound(std::span<const Mat2> a_seq, std::span<const Mat2> b_seq,
                                    double d_const, double d_rate);

}  // namespace amolab
