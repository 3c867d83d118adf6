#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "amolab/big_float.hpp"
#include "amolab/errors.hpp"
#include "amolab/log_scalar.hpp"

namespace amolab {

// Exact continued-fraction representation of a frequency alpha in (0,1).
//
// Conventions: a_0 = 0, q_0 = 1, p_0 = 0, q_{-1} = 0, p_{-1} = 1, so
// q_1 = a_1, p_1 = 1 and the three-term recursions
//   q_n = a_n q_{n-1} + q_{n-2},  p_n = a_n p_{n-1} + p_{n-2}
// hold exactly for every generated n.
//
// Copies share the lazily grown convergent cache; extension is internally
// synchronized, so a Frequency is safe to share across threads.
class Frequency {
 public:
  struct RatInterval {
    BigRat lo, hi;  // lo <= hi
  };

  Frequency() = default;

  static Frequency from_quotients(std::vector<BigInt> quotients, std::string note = "");
  static Frequency from_quotients(const std::vector<long long>& quotients,
                                  std::string note = "");
  // Infinite source: the block repeats forever (a quadratic irrational).
  static Frequency periodic(std::vector<BigInt> block, std::string note = "");
  static Frequency golden();   // (sqrt 5 - 1)/2 = [0;1,1,1,...]
  static Frequency silver();   // sqrt 2 - 1    = [0;2,2,2,...]

  // Certified expansion of a real known to lie in [lo, hi] (0 < lo <= hi < 1).
  // Errors: PrecisionExhausted if some quotient cannot be certified,
  // NonGeneric if the input is rational within precision.
  static Frequency expand(const BigRat& lo, const BigRat& hi, int n_max);
  static Frequency expand(double x, double radius, int n_max);

  // Builds a Liouville-type test frequency whose finite-scale exponents
  // ln q_{n+1}/q_n sit within [target_beta - 0.05, target_beta + 0.05] for
  // all 2 <= n <= depth.  a_1 = 1; a_2 is the smallest start that makes the
  // window feasible; afterwards a_{n+1} = max(1, round((e^{beta q_n} - q_{n-1})/q_n)).
  // Errors: DepthOverflow if a denominator would exceed max_bits bits.
  static Frequency with_beta(double target_beta, int depth, long max_bits = 1 << 18);

  bool valid() const { return static_cast<bool>(state_); }

  // a_n for n >= 1.  Extends lazily; PrecisionExhausted if the source is
  // finite and exhausted.
  BigInt quotient(int n) const;
  // (p_n, q_n) for n >= 0.
  std::pair<BigInt, BigInt> convergent(int n) const;
  // Number of quotients available without extension errors (INT_MAX when periodic).
  int available_depth() const;
  bool extendable() const;
  const std::string& note() const;

  // Exact open bracket of alpha built from convergents n and n+1.
  RatInterval bracket(int n) const;
  // alpha as a binary64, from a deep bracket midpoint.
  double value() const;
  // Exact rational midpoint of a bracket whose half-width is at most
  // e^{ln_abs_err} (the bound is passed and returned in log domain so that
  // precisions far beyond binary64 range are expressible).  Extends the
  // expansion as needed; for a finite source the achieved bound is returned
  // even when it misses the request.
  std::pair<BigRat, double> midpoint_ln(double ln_abs_err) const;

  // Finite-scale resonance exponents.
  double beta_upto(int N) const;               // max_{1<=n<=N} ln q_{n+1}/q_n
  double beta_tail(int N) const;               // max over n in [ceil(N/2), N]
  double beta_j(int n, long long j) const;     // (ln q_{n+1} - ln(|j|+1))/q_n
  long long b_n(int n) const;                  // floor(1e-5 q_n); RangeExceeded if q_n too big

  // ||k alpha||_{R/Z} as a certified rational interval with relative width
  // <= rel_tol (refining the expansion as needed).
  RatInterval knorm(const BigInt& k, double rel_tol = 1e-9) const;
  // ln ||k alpha||, from the interval midpoint.
  double log_knorm(const BigInt& k, double rel_tol = 1e-9) const;

  struct DiophantineAudit {
    int n = 0;
    LogScalar lower, actual, upper;   // 1/(2 q_{n+1}), |q_n alpha - p_n|, 1/q_{n+1}
    bool pass = false;                // lower <= actual <= upper, certified
    std::string method;               // "interval" or "interval+structural"
    bool gdc1_checked = false;        // exhaustive min over 1 <= k < q_{n+1}
    bool gdc1_pass = false;
    BigInt gdc1_range;                // q_{n+1}
  };
  // The sandwich check always runs; the exhaustive minimum only when
  // q_{n+1} <= enumeration_cap (otherwise gdc1_checked stays false, which is
  // the EnumerationCapExceeded outcome for that part).
  DiophantineAudit diophantine_audit(int n, long long enumeration_cap = 100000) const;

  struct DeltaResult {
    double value = 0.0;            // max over 1 <= |k| <= K of -ln||2theta+k alpha||/|k|
    long long arg_k = 0;
    bool complete_resonance = false;  // some k had 2theta + k alpha in Z (skipped)
  };
  // Exact phase descriptor: 2*theta = m*alpha + l with integer m (l drops out).
  DeltaResult delta_estimate_exact(long long m, long long K) const;
  // Real phase: 2*theta known to lie in [two_theta - radius, two_theta + radius].
  DeltaResult delta_estimate_real(double two_theta, double radius, long long K) const;

  std::vector<std::string> quotient_strings(int n_max) const;

 private:
  struct State;
  std::shared_ptr<State> state_;

  explicit Frequency(std::shared_ptr<State> s) : state_(std::move(s)) {}
  void ensure(int n) const;            // quotients a_1..a_n + convergents to n
  bool try_ensure(int n) const;        // false instead of throwing
  int deepest() const;
  RatInterval working_bracket(int depth, int* used_depth = nullptr) const;
};

// max over n in [n_lo, n_hi] of ln q_{n+1} / q_n, safe for huge q_n.
double beta_window(const Frequency& f, int n_lo, int n_hi);

}  // namespace amolab
