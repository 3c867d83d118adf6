#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "amolab/spectral.hpp"
#include "oracles.hpp"

using namespace amolab;

namespace {

OperatorParams make_params(double lambda, double energy, Phase theta = Phase::exact(0, 0)) {
  OperatorParams p;
  p.lambda = lambda;
  p.freq = Frequency::golden();
  p.theta = theta;
  p.energy = energy;
  return p;
}

}  // namespace

TEST_CASE("free operator eigenvalues match the closed form") {
  OperatorParams p = make_params(0.0, 0.0);
  const long long N = 12;
  auto op = TridiagonalOperator::build(p, N);
  auto ev = eigenvalues_only(op);
  std::sort(ev.begin(), ev.end());
  const long long n = 2 * N + 1;
  std::vector<double> ref;
  for (long long m = 1; m <= n; ++m) {
    ref.push_back(2.0 * std::cos(M_PI * static_cast<double>(m) / (n + 1)));
  }
  std::sort(ref.begin(), ref.end());
  for (size_t i = 0; i < ref.size(); ++i) {
    CHECK(ev[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  }
}

TEST_CASE("N=1 eigenvalues against the characteristic cubic") {
  OperatorParams p = make_params(1.0, 0.0);
  auto op = TridiagonalOperator::build(p, 1);
  auto pairs = eigenpairs(op);
  REQUIRE(pairs.size() == 3);
  // roots of det(E - H) for the 3x3: cubic evaluated at each returned E
  auto cubic = [&](double e) {
    const double d0 = e - op.diag[0], d1 = e - op.diag[1], d2 = e - op.diag[2];
    return d0 * d1 * d2 - d0 - d2;
  };
  for (const auto& pr : pairs) {
    CHECK(std::fabs(cubic(pr.energy)) < 1e-10);
    CHECK(pr.residual <= 1e-10 * (2.0 + 2.0 * std::fabs(p.lambda)));
  }
}

TEST_CASE("eigenvalue count and window queries") {
  OperatorParams p = make_params(2.0, 0.0);
  auto op = TridiagonalOperator::build(p, 25);
  auto all = eigenpairs(op);
  CHECK(all.size() == 51);
  auto some = eigenpairs(op, std::make_pair(-1.0, 1.0));
  CHECK(some.size() < all.size());
  for (const auto& pr : some) {
    CHECK(pr.energy > -1.0);
    CHECK(pr.energy <= 1.0);
  }
  // spectrum inside [-2 - 2 lambda, 2 + 2 lambda]
  for (const auto& pr : all) {
    CHECK(std::fabs(pr.energy) <= 2.0 + 2.0 * p.lambda + 1e-9);
  }
}

TEST_CASE("cauchy interlacing between consecutive truncations") {
  OperatorParams p = make_params(3.0, 0.0);
  for (long long N : {10LL, 30LL}) {
    auto small = eigenvalues_only(TridiagonalOperator::build(p, N));
    auto big = eigenvalues_only(TridiagonalOperator::build(p, N + 1));
    std::sort(small.begin(), small.end());
    std::sort(big.begin(), big.end());
    // deleting the two boundary sites: lambda_i(big) <= lambda_i(small) <= lambda_{i+2}(big)
    for (size_t i = 0; i < small.size(); ++i) {
      CHECK(big[i] <= small[i] + 1e-10);
      CHECK(small[i] <= big[i + 2] + 1e-10);
    }
  }
}

TEST_CASE("generalized eigenfunction matches the truncation eigenvector") {
  OperatorParams p = make_params(2.0, 0.0);
  const long long N = 60;
  auto op = TridiagonalOperator::build(p, N);
  auto pairs = eigenpairs(op);
  // pick a localized mid-spectrum state centered near the origin
  const EigenPair* pick = nullptr;
  for (const auto& pr : pairs) {
    if (std::fabs(pr.energy) > 2.0) continue;
    if (std::llabs(argmax_site(pr)) > 6) continue;
    if (boundary_mass(pr, 8) > 1e-10) continue;
    const double center_amp = pr.vector[static_cast<size_t>(N)];
    if (std::fabs(center_amp) < 0.05) continue;
    pick = &pr;
    break;
  }
  REQUIRE(pick != nullptr);
  OperatorParams pe = p;
  pe.energy = pick->energy;
  GenEfReport rep;
  Eigenfunction phi = generalized_eigenfunction(pe, N, {}, &rep);
  CHECK(rep.refined);
  CHECK(rep.sup_ratio < std::log(1e8));
  const double v0 = pick->vector[static_cast<size_t>(N)];
  double max_err = 0.0;
  for (long long k = -N / 2; k <= N / 2; ++k) {
    const double ref = pick->vector[static_cast<size_t>(k + N)] / v0;
    max_err = std::max(max_err, std::fabs(phi.at(k).to_real() - ref));
  }
  CHECK(max_err < 1e-6 * std::fabs(1.0 / v0));
  CHECK(phi.at(0).to_real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("free solutions stay temperate") {
  OperatorParams p = make_params(0.0, 0.77);  // E = 2 cos(kappa), bounded waves
  GenEfReport rep;
  Eigenfunction phi = generalized_eigenfunction(p, 40, {}, &rep);
  CHECK(rep.sup_ratio < std::log(10.0));
  for (long long k = -40; k <= 40; ++k) {
    CHECK(phi.at(k).abs().logmag < std::log(5.0));
  }
}

TEST_CASE("energies outside the spectrum have no temperate direction") {
  OperatorParams p = make_params(1.0, 6.0);  // |E| > 2 + 2 lambda
  try {
    (void)generalized_eigenfunction(p, 40);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoTemperateDirection);
  }
}

TEST_CASE("decay rate on synthetic exponentials") {
  OperatorParams p = make_params(4.0, 0.0);
  const long long M = 400;
  Eigenfunction phi = Eigenfunction::zeros(-M, M);
  const double c = 0.35;
  for (long long k = -M; k <= M; ++k) {
    phi.slot(k) = LogScalar::from_log(1, -c * static_cast<double>(std::llabs(k)));
  }
  auto r = decay_rate(phi, p);
  CHECK(r.rate == doctest::Approx(-c).epsilon(1e-6));
  CHECK(r.rate_plus == doctest::Approx(-c).epsilon(1e-6));
  CHECK(r.rate_minus == doctest::Approx(-c).epsilon(1e-6));
  CHECK(r.theorem_bound == doctest::Approx(-std::log(4.0)).epsilon(1e-3));
  CHECK(!r.satisfied);  // -0.35 > -ln 4

  // a steeper profile satisfies the bound
  for (long long k = -M; k <= M; ++k) {
    phi.slot(k) = LogScalar::from_log(1, -1.5 * static_cast<double>(std::llabs(k)));
  }
  auto r2 = decay_rate(phi, p);
  CHECK(r2.satisfied);
  CHECK(!r2.out_of_regime);
}

TEST_CASE("decay rate near-critical coupling is flagged out of regime") {
  // ln(1.05) sits under the regime margin even for beta ~ 0: a fit is still
  // returned but the satisfied flag is marked meaningless.
  OperatorParams p = make_params(1.05, 0.0);
  Eigenfunction phi = Eigenfunction::zeros(-100, 100);
  for (long long k = -100; k <= 100; ++k) {
    phi.slot(k) = LogScalar::from_log(1, -0.01 * static_cast<double>(std::llabs(k)));
  }
  auto r = decay_rate(phi, p);
  CHECK(r.out_of_regime);
  CHECK(std::isfinite(r.rate));
  // comfortably supercritical coupling is in regime
  OperatorParams p4 = make_params(4.0, 0.0);
  CHECK(!decay_rate(phi, p4).out_of_regime);
  // a Liouville frequency pushes even lambda = e^(0.5) out of regime
  OperatorParams pl = make_params(std::exp(0.5), 0.0);
  pl.freq = Frequency::with_beta(0.3, 4);
  auto rl = decay_rate(phi, pl, {.beta_depth = 4});
  CHECK(rl.out_of_regime);
}

TEST_CASE("window too small") {
  OperatorParams p = make_params(2.0, 0.0);
  Eigenfunction phi = Eigenfunction::zeros(-6, 6);
  for (long long k = -6; k <= 6; ++k) phi.slot(k) = LogScalar::one();
  CHECK_THROWS_AS((void)decay_rate(phi, p), Error);
}

TEST_CASE("spectrum sample") {
  OperatorParams p = make_params(0.0, 0.0);
  auto s0 = spectrum_sample(p, 4, 80);
  // free spectrum fills [-2, 2] densely
  CHECK(s0.energies.front() >= -2.0 - 1e-9);
  CHECK(s0.energies.back() <= 2.0 + 1e-9);
  CHECK(s0.energies.size() > 100);

  OperatorParams p3 = make_params(3.0, 0.0);
  auto s3 = spectrum_sample(p3, 4, 60);
  for (double e : s3.energies) CHECK(std::fabs(e) <= 8.0 + 1e-9);
  CHECK(s3.hausdorff_half_grids >= 0.0);
  CHECK(s3.hausdorff_half_grids < 1.0);
}

TEST_CASE("boundary mass and argmax helpers") {
  EigenPair pr;
  pr.vector = {1e-9, 1e-6, 0.1, 0.9, 0.2, 1e-7, 1e-9};
  CHECK(argmax_site(pr) == 0);
  CHECK(boundary_mass(pr, 1) == doctest::Approx(2e-18).epsilon(1e-6));
}
