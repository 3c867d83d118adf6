#include <doctest.h>

#include <cmath>
#include <random>

#include "amolab/big_float.hpp"
#include "amolab/log_scalar.hpp"
#include "amolab/scaled_matrix.hpp"
#include "oracles.hpp"

using namespace amolab;
using oracles::Oracle;

TEST_CASE("log scalar basics") {
  CHECK(LogScalar::zero().is_zero());
  CHECK(LogScalar::from_real(0.0).is_zero());

  // 3 + 4 = 7
  LogScalar s = LogScalar::from_real(3.0) + LogScalar::from_real(4.0);
  CHECK(s.sign == 1);
  CHECK(s.logmag == doctest::Approx(std::log(7.0)).epsilon(1e-15));

  // x - x = 0 exactly
  LogScalar big = LogScalar::from_log(1, 5000.0);
  CHECK((big + (-big)).is_zero());

  // round trip: relative error scales with the exponent magnitude
  for (double x : {1.5, -2.25e-5, 3e100, -7e-200}) {
    const double tol = 4e-16 * (2.0 + std::fabs(std::log(std::fabs(x))));
    CHECK(LogScalar::from_real(x).to_real() == doctest::Approx(x).epsilon(tol));
  }
}

TEST_CASE("log add pivot against 200-digit arithmetic") {
  // e^5000 + e^4990, far outside binary64 range
  LogScalar a = LogScalar::from_log(1, 5000.0);
  LogScalar b = LogScalar::from_log(1, 4990.0);
  LogScalar s = a + b;
  Oracle ref = exp(Oracle(5000)) + exp(Oracle(4990));
  CHECK(s.logmag == doctest::Approx(oracles::oracle_log_abs(ref)).epsilon(1e-15));
  CHECK(s.logmag == doctest::Approx(5000.0 + std::log1p(std::exp(-10.0))).epsilon(1e-15));
}

TEST_CASE("cancellation flag") {
  LogScalar a = LogScalar::from_log(1, 100.0);
  LogScalar b = LogScalar::from_log(-1, 100.0 + 1e-13);
  auto r = log_add_flagged(a, b);
  CHECK(r.cancellation);
  CHECK(!r.value.is_zero());

  auto clean = log_add_flagged(a, LogScalar::from_log(-1, 99.0));
  CHECK(!clean.cancellation);
}

TEST_CASE("scaled matrix identity and inverse") {
  ScaledMatrix2 m = ScaledMatrix2::from({3.0, 1.0, 2.0, 1.0});  // det 1
  ScaledMatrix2 id = ScaledMatrix2::identity() * m;
  CHECK(id.log_norm() == doctest::Approx(m.log_norm()).epsilon(1e-14));

  ScaledMatrix2 inv = ScaledMatrix2::from({1.0, -1.0, -2.0, 3.0});
  ScaledMatrix2 prod = m * inv;
  const Mat2 e = prod.entries;
  const double s = std::exp(prod.logscale);
  CHECK(e.a00 * s == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.a11 * s == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::fabs(e.a01 * s) < 1e-12);
  CHECK(std::fabs(e.a10 * s) < 1e-12);
}

TEST_CASE("diagonal power closed form") {
  // 10^4 copies of diag(2, 1/2): logscale ~ 1e4 ln 2, entries identity-like
  ScaledMatrix2 acc = ScaledMatrix2::identity();
  ScaledMatrix2 d = ScaledMatrix2::from({2.0, 0.0, 0.0, 0.5});
  for (int i = 0; i < 10000; ++i) acc = d * acc;
  CHECK(acc.log_norm() == doctest::Approx(1e4 * std::log(2.0)).epsilon(1e-12));
  CHECK(acc.entries.a01 == 0.0);
  CHECK(acc.entries.a10 == 0.0);
}

TEST_CASE("normalization invariant after products") {
  std::mt19937_64 rng(7);
  ScaledMatrix2 acc = ScaledMatrix2::identity();
  for (int i = 0; i < 500; ++i) {
    acc = ScaledMatrix2::from(oracles::random_sl2(rng, 2.0)) * acc;
    const double m = acc.entries.max_abs();
    CHECK(m >= 0.5);
    CHECK(m <= 2.0);
  }
}

TEST_CASE("sl2 products match direct binary64 products") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<int> len_d(2, 300);
    const int len = len_d(rng);
    Mat2 direct = Mat2::identity();
    ScaledMatrix2 scaled = ScaledMatrix2::identity();
    bool in_range = true;
    for (int i = 0; i < len; ++i) {
      Mat2 f = oracles::random_sl2(rng, 1.2);
      direct = f * direct;
      scaled = ScaledMatrix2::from(f) * scaled;
      if (direct.max_abs() > 1e280) {
        in_range = false;
        break;
      }
    }
    if (!in_range) continue;
    const double ref = spectral_norm(direct);
    if (ref == 0.0 || !std::isfinite(ref)) continue;
    CHECK(scaled.log_norm() == doctest::Approx(std::log(ref)).epsilon(1e-9));
  }
}

TEST_CASE("unimodular determinant recovery") {
  std::mt19937_64 rng(13);
  const int k = 400;
  ScaledMatrix2 acc = ScaledMatrix2::identity();
  for (int i = 0; i < k; ++i) {
    acc = ScaledMatrix2::from(oracles::random_sl2(rng, 1.5)) * acc;
  }
  LogScalar det = acc.log_det();
  CHECK(det.sign == 1);
  CHECK(std::fabs(det.logmag) <= 1e-8 * k);

  // The naive entry-based recovery agrees while cancellation permits.
  std::mt19937_64 rng2(14);
  ScaledMatrix2 small = ScaledMatrix2::identity();
  for (int i = 0; i < 12; ++i) {
    small = ScaledMatrix2::from(oracles::random_sl2(rng2, 1.1)) * small;
  }
  LogScalar naive = small.det_from_entries();
  CHECK(naive.sign == 1);
  CHECK(std::fabs(naive.logmag) <= 1e-6);
}

TEST_CASE("random operations against the 200-digit oracle") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> mag(-100000.0, 100000.0);
  std::uniform_int_distribution<int> sgn(0, 1);
  std::uniform_int_distribution<int> op(0, 2);
  for (int i = 0; i < 2000; ++i) {
    LogScalar a = LogScalar::from_log(sgn(rng) ? 1 : -1, mag(rng));
    LogScalar b = LogScalar::from_log(sgn(rng) ? 1 : -1, mag(rng));
    Oracle oa = Oracle(a.sign) * exp(Oracle(a.logmag));
    Oracle ob = Oracle(b.sign) * exp(Oracle(b.logmag));
    LogScalar r;
    Oracle orr;
    switch (op(rng)) {
      case 0: r = a + b; orr = oa + ob; break;
      case 1: r = a * b; orr = oa * ob; break;
      default: r = a / b; orr = oa / ob; break;
    }
    if (orr == 0) {
      CHECK(r.is_zero());
      continue;
    }
    CHECK(r.sign == (orr > 0 ? 1 : -1));
    const double ref = oracles::oracle_log_abs(orr);
    CHECK(std::fabs(r.logmag - ref) <= 1e-12 * std::max(1.0, std::fabs(ref)));
  }
}

TEST_CASE("log expm1 helper") {
  CHECK(log_expm1(50.0) == doctest::Approx(50.0 + std::log1p(-std::exp(-50.0))).epsilon(1e-15));
  CHECK(log_expm1(1e-8) == doctest::Approx(std::log(std::expm1(1e-8))).epsilon(1e-12));
}
