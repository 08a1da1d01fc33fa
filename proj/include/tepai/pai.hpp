#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "tepai/errors.hpp"
#include "tepai/hamiltonian.hpp"
#include "tepai/rng.hpp"
#include "tepai/trotter.hpp"

namespace tepai {

/// Quasiprobability weights of the three-variant decomposition of a Pauli
/// rotation superoperator at angle theta (0 <= theta <= Delta < pi):
///
///   R(theta) = gamma1 * A + gamma2 * B + gamma3 * C
///
/// with A the identity, B the rotation by Delta and C the rotation by pi:
///   gamma1 = csc(Delta/2) cos(theta/2) sin(Delta/2 - theta/2)
///   gamma2 = csc(Delta) sin(theta)
///   gamma3 = -sec(Delta/2) sin(theta/2) sin(Delta/2 - theta/2)
///   |gamma|_1 = sec(Delta/2) cos(Delta/2 - theta)
///
/// The variant probabilities are p_l = |gamma_l| / |gamma|_1. gamma3 <= 0 on
/// the whole angle range, so every pi draw flips the estimator sign.
struct GammaWeights {
  double gamma1, gamma2, gamma3;
  double l1;
  double p1, p2, p3;
};

inline GammaWeights gamma_weights(double theta, double delta) {
  if (!(delta > 0.0) || !(delta < M_PI)) {
    throw ValidationError("gamma_weights: need 0 < Delta < pi");
  }
  if (theta < 0.0 || theta > delta) {
    throw ValidationError("gamma_weights: need 0 <= theta <= Delta (theta=" +
                          std::to_string(theta) + ", Delta=" + std::to_string(delta) +
                          "); increase N or Delta");
  }
  const double half_d = 0.5 * delta;
  const double half_t = 0.5 * theta;
  const double gap = std::sin(half_d - half_t);
  GammaWeights w;
  w.gamma1 = std::cos(half_t) * gap / std::sin(half_d);
  w.gamma2 = std::sin(theta) / std::sin(delta);
  w.gamma3 = -std::sin(half_t) * gap / std::cos(half_d);
  w.l1 = std::cos(half_d - theta) / std::cos(half_d);
  w.p1 = w.gamma1 / w.l1;
  w.p2 = w.gamma2 / w.l1;
  w.p3 = -w.gamma3 / w.l1;
  return w;
}

/// |gamma(theta)|_1 alone; strictly positive for 0 <= theta <= Delta < pi.
inline double gamma_l1(double theta, double delta) {
  return std::cos(0.5 * delta - theta) / std::cos(0.5 * delta);
}

enum class GateVariant : std::uint8_t { kDelta, kPi };

/// One kept gate of a sampled circuit. Identity draws are dropped; the
/// generator Pauli string is terms()[term] of the circuit's Hamiltonian.
struct SampledGate {
  std::uint32_t term;
  std::uint32_t step;
  GateVariant variant;
  std::int8_t angle_sign;  // sign of theta_kj; meaningful for kDelta only
};

/// One draw of the randomized circuit ensemble: kept gates in application
/// order, the accumulated estimator sign and the draw-independent overhead
/// prefactor |g|_1 (1 for qDRIFT circuits, which average into a channel).
struct SampledCircuit {
  std::shared_ptr<const Hamiltonian> hamiltonian;
  double delta = 0.0;
  int sign = 1;
  double overhead = 1.0;
  std::uint64_t draw_seed = 0;
  std::vector<SampledGate> gates;

  std::size_t nu() const { return gates.size(); }
};

/// Samples circuits from a Trotter template under the three-variant
/// decomposition with a global angle Delta. Per-position variant draws are
/// keyed by (master_seed, circuit_index, j, k), so draws are bit-reproducible
/// and order independent. Variant probabilities are cached in a flat table
/// when the template is small enough, otherwise recomputed on the fly.
class PaiSampler {
 public:
  PaiSampler(TrotterTemplate tmpl, double delta)
      : template_(std::move(tmpl)), delta_(delta) {
    if (!(delta_ > 0.0) || !(delta_ < M_PI)) {
      throw ValidationError("PaiSampler: need 0 < Delta < pi");
    }
    const long long positions = template_.positions();
    use_table_ = positions <= kTableLimit;
    if (use_table_) {
      cum1_.reserve(static_cast<std::size_t>(positions));
      cum2_.reserve(static_cast<std::size_t>(positions));
      signs_.reserve(static_cast<std::size_t>(positions));
    }
    const int L = template_.n_terms();
    double log_overhead = 0.0;
    for (long j = 0; j < template_.steps(); ++j) {
      for (int k = 0; k < L; ++k) {
        const double theta = checked_abs_angle(k, j);
        const GammaWeights w = gamma_weights(theta, delta_);
        log_overhead += std::log(w.l1);
        if (use_table_) {
          cum1_.push_back(w.p1);
          cum2_.push_back(w.p1 + w.p2);
          signs_.push_back(template_.angle(k, j) < 0 ? -1 : 1);
        }
      }
    }
    log_overhead_ = log_overhead;
  }

  const TrotterTemplate& circuit_template() const { return template_; }
  double delta() const { return delta_; }

  /// |g|_1 of the template: identical for every draw.
  double overhead() const { return std::exp(log_overhead_); }

  SampledCircuit sample(std::uint64_t master_seed, std::uint64_t circuit_index = 0) const {
    SampledCircuit circuit;
    circuit.hamiltonian = template_.hamiltonian_ptr();
    circuit.delta = delta_;
    circuit.overhead = overhead();
    circuit.draw_seed = mix_seed(splitmix64(master_seed), circuit_index);
    const int L = template_.n_terms();
    const long N = template_.steps();
    for (long j = 0; j < N; ++j) {
      for (int k = 0; k < L; ++k) {
        double c1, c2;
        std::int8_t sgn;
        if (use_table_) {
          const std::size_t idx = static_cast<std::size_t>(j) * L + k;
          c1 = cum1_[idx];
          c2 = cum2_[idx];
          sgn = signs_[idx];
        } else {
          const double theta = checked_abs_angle(k, j);
          const GammaWeights w = gamma_weights(theta, delta_);
          c1 = w.p1;
          c2 = w.p1 + w.p2;
          sgn = template_.angle(k, j) < 0 ? -1 : 1;
        }
        const double u = u64_to_unit(position_seed(master_seed, circuit_index,
                                                   static_cast<std::uint64_t>(j),
                                                   static_cast<std::uint64_t>(k)));
        if (u < c1) continue;
        if (u < c2) {
          circuit.gates.push_back({static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(j),
                                   GateVariant::kDelta, sgn});
        } else {
          circuit.gates.push_back({static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(j),
                                   GateVariant::kPi, 1});
          circuit.sign = -circuit.sign;
        }
      }
    }
    return circuit;
  }

 private:
  static constexpr long long kTableLimit = 1LL << 21;

  double checked_abs_angle(int k, long j) const {
    double theta = std::abs(template_.angle(k, j));
    if (theta > delta_) {
      if (theta <= delta_ * (1.0 + 1e-12)) return delta_;
      throw ValidationError("PaiSampler: |theta_kj|=" + std::to_string(theta) + " exceeds Delta=" +
                            std::to_string(delta_) + "; increase N or Delta");
    }
    return theta;
  }

  TrotterTemplate template_;
  double delta_;
  double log_overhead_ = 0.0;
  bool use_table_ = false;
  std::vector<double> cum1_, cum2_;
  std::vector<std::int8_t> signs_;
};

inline SampledCircuit sample_circuit(const TrotterTemplate& tmpl, double delta,
                                     std::uint64_t master_seed, std::uint64_t circuit_index = 0) {
  return PaiSampler(tmpl, delta).sample(master_seed, circuit_index);
}

/// Finite-N measurement overhead |g|_1 = prod_{j,k} |gamma(|theta_kj|)|_1,
/// accumulated as a sum of logarithms.
inline double exact_overhead(const TrotterTemplate& tmpl, double delta) {
  if (!(delta > 0.0) || !(delta < M_PI)) {
    throw ValidationError("exact_overhead: need 0 < Delta < pi");
  }
  double log_sum = 0.0;
  const int L = tmpl.n_terms();
  for (long j = 0; j < tmpl.steps(); ++j) {
    for (int k = 0; k < L; ++k) {
      double theta = std::abs(tmpl.angle(k, j));
      if (theta > delta) {
        if (theta > delta * (1.0 + 1e-12)) {
          throw ValidationError("exact_overhead: |theta_kj| exceeds Delta; increase N or Delta");
        }
        theta = delta;
      }
      log_sum += std::log(gamma_l1(theta, delta));
    }
  }
  return std::exp(log_sum);
}

/// qDRIFT baseline draw for a constant-coefficient Hamiltonian: N gates, the
/// j-th sampled from p_j = |c_j| / |c|_1, each a rotation by
/// 2 sign(c_j) tau with tau = T |c|_1 / N. The average over draws is a
/// channel, so there is no sign or overhead bookkeeping.
inline SampledCircuit sample_qdrift(std::shared_ptr<const Hamiltonian> h, double T, long N,
                                    std::uint64_t master_seed, std::uint64_t circuit_index = 0) {
  if (!h) throw ValidationError("sample_qdrift: null Hamiltonian");
  if (!h->time_independent()) {
    throw ValidationError("sample_qdrift: only constant-coefficient Hamiltonians are supported");
  }
  if (N < 1) throw ValidationError("sample_qdrift: need N >= 1");
  const auto& terms = h->terms();
  std::vector<double> cum(terms.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    acc += std::abs(terms[k].coeff.constant_value());
    cum[k] = acc;
  }
  if (!(acc > 0.0)) throw ValidationError("sample_qdrift: |c|_1 must be > 0");
  const double tau = T * acc / static_cast<double>(N);

  SampledCircuit circuit;
  circuit.hamiltonian = std::move(h);
  circuit.delta = 2.0 * tau;
  circuit.overhead = 1.0;
  circuit.draw_seed = mix_seed(splitmix64(master_seed), circuit_index);
  circuit.gates.reserve(static_cast<std::size_t>(N));
  for (long i = 0; i < N; ++i) {
    const double u =
        acc * u64_to_unit(position_seed(master_seed, circuit_index, static_cast<std::uint64_t>(i), 0));
    const auto it = std::upper_bound(cum.begin(), cum.end(), u);
    const auto k = static_cast<std::uint32_t>(
        std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()), cum.size() - 1));
    const double ck = circuit.hamiltonian->terms()[k].coeff.constant_value();
    circuit.gates.push_back({k, static_cast<std::uint32_t>(i), GateVariant::kDelta,
                             static_cast<std::int8_t>(ck < 0 ? -1 : 1)});
  }
  return circuit;
}

}  // namespace tepai
