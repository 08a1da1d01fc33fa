#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>

#include "tepai/errors.hpp"
#include "tepai/hamiltonian.hpp"

namespace tepai {

/// Angle schedule of a first-order product formula over N steps:
///   theta_kj = 2 c_k(t_j) T / N  with  t_j = j T / N,  j = 1..N,
/// evaluated lazily per position so large N never materializes N*L angles.
/// Application order is step-major: j ascending (outer), k ascending (inner).
class TrotterTemplate {
 public:
  TrotterTemplate(std::shared_ptr<const Hamiltonian> hamiltonian, double total_time, long steps)
      : hamiltonian_(std::move(hamiltonian)), total_time_(total_time), steps_(steps) {
    if (!hamiltonian_) throw ValidationError("TrotterTemplate: null Hamiltonian");
    if (steps_ < 1) throw ValidationError("TrotterTemplate: need N >= 1");
    if (!(total_time_ >= 0)) throw ValidationError("TrotterTemplate: need T >= 0");
  }

  const Hamiltonian& hamiltonian() const { return *hamiltonian_; }
  std::shared_ptr<const Hamiltonian> hamiltonian_ptr() const { return hamiltonian_; }
  double total_time() const { return total_time_; }
  long steps() const { return steps_; }
  int n_terms() const { return hamiltonian_->n_terms(); }
  long long positions() const { return static_cast<long long>(steps_) * n_terms(); }

  /// Time point of step j (0-based): right endpoint of the j-th slice.
  double time_at(long j) const {
    return total_time_ * static_cast<double>(j + 1) / static_cast<double>(steps_);
  }

  /// theta_kj for term k at 0-based step j.
  double angle(int k, long j) const {
    const auto& term = hamiltonian_->terms()[static_cast<std::size_t>(k)];
    return 2.0 * term.coeff(time_at(j)) * total_time_ / static_cast<double>(steps_);
  }

  /// Upper bound on max_{k,j} |theta_kj|.
  double max_abs_angle() const {
    double cmax = 0.0;
    for (const auto& term : hamiltonian_->terms()) {
      cmax = std::max(cmax, term.coeff.max_abs(0.0, total_time_));
    }
    return 2.0 * cmax * total_time_ / static_cast<double>(steps_);
  }

 private:
  std::shared_ptr<const Hamiltonian> hamiltonian_;
  double total_time_;
  long steps_;
};

inline TrotterTemplate make_template(std::shared_ptr<const Hamiltonian> h, double T, long N) {
  return TrotterTemplate(std::move(h), T, N);
}

inline TrotterTemplate make_template(const Hamiltonian& h, double T, long N) {
  return TrotterTemplate(std::make_shared<Hamiltonian>(h), T, N);
}

/// First-order Trotter error bound for constant coefficients:
///   epsilon_T <= T^2 / (2N) * commutator_norm_sq,
/// together with the cheaper universal fallback using |c|_1^2 - |c|_2^2.
struct TrotterErrorBound {
  double epsilon_T;
  double epsilon_simple;
  double commutator_norm_sq;
  long steps;
};

inline TrotterErrorBound trotter_error_bound(const Hamiltonian& h, double T, long N,
                                             const CommutatorOptions& opts = {}) {
  if (!h.time_independent()) {
    throw ValidationError(
        "trotter_error_bound: only constant-coefficient Hamiltonians are supported");
  }
  if (N < 1) throw ValidationError("trotter_error_bound: need N >= 1");
  const double comm = commutator_norm_sq(h, 0.0, opts);
  const double l1 = h.l1_norm_constant();
  const double l2sq = h.l2_norm_sq_constant();
  const double pref = T * T / (2.0 * static_cast<double>(N));
  return {pref * comm, pref * (l1 * l1 - l2sq), comm, N};
}

/// Smallest N with N >= kappa T^2 B / (2 epsilon) for an explicit bound B on
/// the Trotter error norm.
inline long long choose_N_with_bound(double norm_bound, double T, double epsilon, double kappa) {
  if (!(epsilon > 0)) throw ValidationError("choose_N: epsilon must be > 0");
  if (!(kappa >= 1)) throw ValidationError("choose_N: kappa must be >= 1");
  const double raw = kappa * T * T * norm_bound / (2.0 * epsilon);
  return std::max<long long>(1, static_cast<long long>(std::ceil(raw - 1e-12)));
}

/// N selection from the l1-norm bound. Constant coefficients use |c|_1; time
/// dependence substitutes the time-averaged l1 norm (heuristic, the bound is
/// stated for the time-independent case).
inline long long choose_N(const Hamiltonian& h, double T, double epsilon, double kappa) {
  const double l1 = h.time_independent() ? h.l1_norm_constant() : l1_norm_avg(h, T);
  return choose_N_with_bound(l1 * l1, T, epsilon, kappa);
}

/// Classical pre-processing cost: total classical samples N * L * N_s.
inline unsigned long long classical_cost(long long N, long long L, long long N_s) {
  return static_cast<unsigned long long>(N) * static_cast<unsigned long long>(L) *
         static_cast<unsigned long long>(N_s);
}

inline unsigned long long classical_cost(const Hamiltonian& h, double T, double epsilon,
                                         double kappa, double overhead) {
  const long long N = choose_N(h, T, epsilon, kappa);
  const auto N_s =
      static_cast<long long>(std::ceil(overhead * overhead / (epsilon * epsilon) - 1e-12));
  return classical_cost(N, h.n_terms(), std::max<long long>(1, N_s));
}

}  // namespace tepai
