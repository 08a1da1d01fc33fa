#pragma once

#include <cmath>
#include <cstdint>

#include "tepai/errors.hpp"
#include "tepai/pai.hpp"
#include "tepai/trotter.hpp"

namespace tepai {

// All asymptotic formulas take the scalar c_norm_avg_T = (averaged l1 norm of
// the coefficients) * (total time), so regimes far beyond simulable system
// sizes run through the same code path as desk-scale checks.

/// Asymptotic expected gate count: csc(Delta) (3 - cos(Delta)) * |c|_1avg T.
inline double nu_infinity(double c_norm_avg_T, double delta) {
  if (!(delta > 0.0) || !(delta < M_PI)) throw ValidationError("nu_infinity: need 0 < Delta < pi");
  if (!(c_norm_avg_T >= 0.0)) throw ValidationError("nu_infinity: need |c|_1avg T >= 0");
  return (3.0 - std::cos(delta)) / std::sin(delta) * c_norm_avg_T;
}

/// Delta minimizing nu_infinity, 2 arctan(1/sqrt(2)); the minimum value is
/// 2 sqrt(2) |c|_1avg T.
inline double optimal_delta() { return 2.0 * std::atan(1.0 / std::sqrt(2.0)); }

/// Asymptotic measurement overhead exp[2 |c|_1avg T tan(Delta/2)].
inline double overhead_asymptotic(double c_norm_avg_T, double delta) {
  if (!(delta > 0.0) || !(delta < M_PI)) {
    throw ValidationError("overhead_asymptotic: need 0 < Delta < pi");
  }
  return std::exp(2.0 * c_norm_avg_T * std::tan(0.5 * delta));
}

/// Shot bound ceil(g^2 / eps^2) for overhead factor g.
inline std::uint64_t shots_bound(double g, double epsilon) {
  if (!(epsilon > 0.0)) throw ValidationError("shots_bound: epsilon must be > 0");
  const double raw = g * g / (epsilon * epsilon);
  return static_cast<std::uint64_t>(std::ceil(raw - 1e-9));
}

/// Exact finite-N gate-count statistics of the sampled-circuit ensemble:
///   E[nu]  = sum_{j,k} (1 - p1(|theta_kj|)),
///   Var[nu] = sum_{j,k} p1 (1 - p1).
struct FiniteGateStats {
  double mean;
  double variance;
};

inline FiniteGateStats nu_expected_finite(const TrotterTemplate& tmpl, double delta) {
  double mean = 0.0, var = 0.0;
  const int L = tmpl.n_terms();
  for (long j = 0; j < tmpl.steps(); ++j) {
    for (int k = 0; k < L; ++k) {
      double theta = std::abs(tmpl.angle(k, j));
      if (theta > delta && theta <= delta * (1.0 + 1e-12)) theta = delta;
      const GammaWeights w = gamma_weights(theta, delta);
      // 1 - p1 assembled from the positive parts, no cancellation near theta=0.
      const double hit = w.p2 + w.p3;
      mean += hit;
      var += hit * w.p1;
    }
  }
  return {mean, var};
}

/// Depth/overhead trade-off at fixed Q:
///   Delta = 2 arctan(Q / (2 |c|_1avg T)), overhead = e^Q exactly, and
///   nu_inf = 2 (|c|_1avg T)^2 / Q + Q.
/// Q may not exceed sqrt(2) |c|_1avg T, where nu_inf attains its minimum.
struct QTradeoff {
  double delta;
  double nu_inf;
  double overhead;
};

inline QTradeoff q_tradeoff(double c_norm_avg_T, double Q) {
  if (!(c_norm_avg_T > 0.0)) throw ValidationError("q_tradeoff: need |c|_1avg T > 0");
  const double q_max = std::sqrt(2.0) * c_norm_avg_T;
  if (!(Q > 0.0) || Q > q_max * (1.0 + 1e-12)) {
    throw ValidationError("q_tradeoff: need 0 < Q <= sqrt(2) |c|_1avg T = " + std::to_string(q_max));
  }
  QTradeoff out;
  out.delta = 2.0 * std::atan(Q / (2.0 * c_norm_avg_T));
  out.nu_inf = 2.0 * c_norm_avg_T * c_norm_avg_T / Q + Q;
  out.overhead = std::exp(Q);
  return out;
}

/// Gaussian N(nu_inf, nu_inf) model of the asymptotic gate-count distribution.
struct GateCountDistribution {
  double nu_inf;

  double pdf(double nu) const {
    const double var = nu_inf;
    const double d = nu - nu_inf;
    return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * M_PI * var);
  }

  double cdf(double nu) const {
    return 0.5 * std::erfc(-(nu - nu_inf) / std::sqrt(2.0 * nu_inf));
  }
};

inline GateCountDistribution gate_count_pdf(double nu_inf) {
  if (!(nu_inf > 0.0)) throw ValidationError("gate_count_pdf: need nu_inf > 0");
  return GateCountDistribution{nu_inf};
}

}  // namespace tepai
