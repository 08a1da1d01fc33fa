#include "tepai/analytics.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "tepai/hamiltonian.hpp"
#include "support/oracles.hpp"

using namespace tepai;

TEST(NuInfinity, BenchmarkValues) {
  // 14-qubit ring scale: |c|_1avg = 33.30, T = 1, Delta = pi/2^7.
  EXPECT_NEAR(nu_infinity(33.30, M_PI / 128.0), 2715.0, 0.01 * 2715.0);
  // 100-qubit ring scale: |c|_1avg = 241.3, Delta = pi/2^8.
  EXPECT_NEAR(nu_infinity(241.3, M_PI / 256.0), 39328.0, 1.0);
}

TEST(NuInfinity, ClosedFormMinimum) {
  const double ct = 7.3;
  const double at_min = nu_infinity(ct, optimal_delta());
  EXPECT_NEAR(at_min, 2.0 * std::sqrt(2.0) * ct, 1e-12);
  EXPECT_THROW(nu_infinity(1.0, 0.0), ValidationError);
  EXPECT_THROW(nu_infinity(1.0, M_PI), ValidationError);
  EXPECT_THROW(nu_infinity(-1.0, 0.1), ValidationError);
}

TEST(NuInfinity, GoldenSectionAgreesWithOptimalDelta) {
  const double ct = 12.75;
  double a = 1e-6, b = M_PI - 1e-6;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = nu_infinity(ct, x1), f2 = nu_infinity(ct, x2);
  for (int i = 0; i < 200 && (b - a) > 1e-12; ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = nu_infinity(ct, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = nu_infinity(ct, x2);
    }
  }
  const double argmin = 0.5 * (a + b);
  // The argmin of a quadratic minimum is only localizable to about
  // sqrt(machine epsilon) from function values; the value itself is tight.
  EXPECT_NEAR(argmin, optimal_delta(), 1e-7);
  EXPECT_NEAR(nu_infinity(ct, argmin), 2.0 * std::sqrt(2.0) * ct, 1e-9 * ct);
}

TEST(FiniteNu, DegenerateTemplates) {
  const Hamiltonian zero(1, {{PauliString::parse("Z0", 1), CoefficientSchedule::constant(0.0)}});
  const auto tmpl0 = make_template(zero, 1.0, 100);
  const auto stats0 = nu_expected_finite(tmpl0, M_PI / 64.0);
  EXPECT_DOUBLE_EQ(stats0.mean, 0.0);
  EXPECT_DOUBLE_EQ(stats0.variance, 0.0);

  // Every angle at the notch: E[nu] = N L with zero variance.
  const double delta = M_PI / 64.0;
  const long N = 64;
  const Hamiltonian notch(
      1, {{PauliString::parse("Z0", 1), CoefficientSchedule::constant(delta * N / 2.0)}});
  const auto tmpl1 = make_template(notch, 1.0, N);
  const auto stats1 = nu_expected_finite(tmpl1, delta);
  EXPECT_NEAR(stats1.mean, static_cast<double>(N), 1e-9);
  EXPECT_NEAR(stats1.variance, 0.0, 1e-9);
}

TEST(FiniteNu, ApproachesAsymptoteFromBelowInN) {
  const auto ring = build_spin_ring(14, 6);
  const double delta = M_PI / 128.0;
  const double ct = l1_norm_avg(ring, 1.0) * 1.0;
  const double limit = nu_infinity(ct, delta);
  double prev_gap = 1e300;
  for (long N : {100L, 1000L, 10000L}) {
    const auto tmpl = make_template(ring, 1.0, N);
    const auto stats = nu_expected_finite(tmpl, delta);
    const double gap = std::abs(stats.mean - limit);
    EXPECT_LT(gap, prev_gap);
    prev_gap = gap;
    EXPECT_LE(stats.variance, stats.mean + 1e-9);
  }
  // O(1/N): the N = 10^4 template sits well inside one percent.
  const auto tmpl = make_template(ring, 1.0, 10000);
  EXPECT_NEAR(nu_expected_finite(tmpl, delta).mean, limit, 0.01 * limit);
}

TEST(Overhead, AsymptoteValuesAndLimits) {
  // Delta -> 0 drives the overhead to 1.
  EXPECT_NEAR(overhead_asymptotic(10.0, 1e-9), 1.0, 1e-7);
  // 100-qubit ring scale.
  EXPECT_NEAR(overhead_asymptotic(241.3, M_PI / 256.0), 19.32, 0.01);
  // 14-qubit ring scale: the formula gives about 2.26 at |c|_1avg = 33.30.
  EXPECT_NEAR(overhead_asymptotic(33.30, M_PI / 128.0), 2.264, 0.005);
}

TEST(Overhead, MonotoneInDeltaAndT) {
  double prev = 0.0;
  for (double delta : {0.01, 0.02, 0.1, 0.5, 1.0, 2.0}) {
    const double v = overhead_asymptotic(5.0, delta);
    EXPECT_GT(v, prev);
    prev = v;
  }
  prev = 0.0;
  for (double ct : {1.0, 2.0, 4.0, 8.0}) {
    const double v = overhead_asymptotic(ct, 0.3);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(Overhead, ShotsBound) {
  EXPECT_EQ(shots_bound(1.0, 1.0), 1ULL);
  EXPECT_EQ(shots_bound(3.0, 0.1), 900ULL);
  EXPECT_EQ(shots_bound(2.5, 0.01), 62500ULL);
  EXPECT_THROW(shots_bound(1.0, 0.0), ValidationError);
}

TEST(QTradeoff, OverheadIdentityAndBounds) {
  Rng rng(2718);
  for (int trial = 0; trial < 100; ++trial) {
    const double ct = 0.1 + rng.uniform() * 99.9;
    const double q = rng.uniform() * std::sqrt(2.0) * ct;
    if (q <= 0.0) continue;
    const QTradeoff tr = q_tradeoff(ct, q);
    EXPECT_NEAR(overhead_asymptotic(ct, tr.delta), std::exp(q), 1e-12 * std::exp(q));
    EXPECT_NEAR(nu_infinity(ct, tr.delta), tr.nu_inf, 1e-9 * tr.nu_inf);
    EXPECT_LE(tr.nu_inf, 4.0 * ct * ct / q + 1e-9);
  }
  EXPECT_THROW(q_tradeoff(1.0, 1.5), ValidationError);  // above sqrt(2) ct
  EXPECT_THROW(q_tradeoff(1.0, 0.0), ValidationError);
}

TEST(QTradeoff, KnownPoints) {
  // Q at its maximum reaches the global minimum gate count.
  const double ct = 3.7;
  const QTradeoff max_q = q_tradeoff(ct, std::sqrt(2.0) * ct);
  EXPECT_NEAR(max_q.nu_inf, 2.0 * std::sqrt(2.0) * ct, 1e-12);
  EXPECT_NEAR(max_q.delta, optimal_delta(), 1e-12);
  // ct = 10, Q = 1: nu = 201 and overhead e.
  const QTradeoff unit = q_tradeoff(10.0, 1.0);
  EXPECT_NEAR(unit.nu_inf, 201.0, 1e-10);
  EXPECT_NEAR(unit.overhead, std::exp(1.0), 1e-12);
}

TEST(GateCountModel, GaussianShape) {
  const GateCountDistribution dist = gate_count_pdf(2715.0);
  EXPECT_GT(dist.pdf(2715.0), dist.pdf(2715.0 + 50.0));
  EXPECT_GT(dist.pdf(2715.0), dist.pdf(2715.0 - 50.0));
  EXPECT_NEAR(dist.cdf(2715.0), 0.5, 1e-12);
  // cdf matches the oracle normal cdf.
  EXPECT_NEAR(dist.cdf(2800.0), oracles::normal_cdf(2800.0, 2715.0, std::sqrt(2715.0)), 1e-12);
  EXPECT_THROW(gate_count_pdf(0.0), ValidationError);
}

TEST(FiniteNu, ResidualDecaysLikeOneOverN) {
  const auto ring = build_spin_ring(5, 12);
  const double T = 0.5;
  const double delta = M_PI / 128.0;
  const double limit = nu_infinity(l1_norm_avg(ring, T) * T, delta);
  std::vector<double> log_n, log_res;
  for (long N : {1000L, 2000L, 4000L, 8000L, 16000L}) {
    const auto tmpl = make_template(ring, T, N);
    log_n.push_back(std::log(static_cast<double>(N)));
    log_res.push_back(std::log(std::abs(nu_expected_finite(tmpl, delta).mean - limit)));
  }
  const double slope = oracles::fit_slope(log_n, log_res);
  EXPECT_NEAR(slope, -1.0, 0.2);
}

TEST(ConsistencyWithSampling, FiniteOverheadApproachesAsymptote) {
  const auto ring = build_spin_ring(5, 12);
  const double ct = l1_norm_avg(ring, 0.5) * 0.5;
  const double delta = M_PI / 64.0;
  const double limit = overhead_asymptotic(ct, delta);
  double prev_gap = 1e300;
  for (long N : {250L, 1000L, 4000L, 16000L}) {
    const auto tmpl = make_template(ring, 0.5, N);
    const double gap = std::abs(exact_overhead(tmpl, delta) - limit);
    EXPECT_LT(gap, prev_gap);
    prev_gap = gap;
  }
}
