#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "tepai/errors.hpp"
#include "tepai/hamiltonian.hpp"
#include "tepai/pai.hpp"
#include "tepai/rng.hpp"
#include "tepai/statevector.hpp"
#include "tepai/trotter.hpp"

namespace tepai {

enum class EstimatorMode { kSampledShot, kPerCircuitExpectation };

inline const char* mode_name(EstimatorMode m) {
  return m == EstimatorMode::kSampledShot ? "sampled_shot" : "per_circuit_expectation";
}

struct ShotRecord {
  std::uint64_t shot = 0;
  std::uint64_t draw_seed = 0;
  int sign = 1;
  std::uint32_t nu = 0;
  double outcome = 0.0;   // raw +-1 sample or per-circuit expectation
  double weighted = 0.0;  // overhead * sign * outcome
};

struct EstimatorResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t shots = 0;
  EstimatorMode mode = EstimatorMode::kPerCircuitExpectation;
  double overhead = 1.0;
  double nu_mean = 0.0;
  double nu_variance = 0.0;
  std::vector<ShotRecord> records;  // populated when RunOptions::keep_records
};

struct RunOptions {
  int workers = 0;  // 0 = hardware concurrency
  bool keep_records = false;
};

namespace detail {

// Static block partition; results must be written to per-index slots so the
// outcome is identical for any worker count.
inline void parallel_for(std::uint64_t total, int workers,
                         const std::function<void(std::uint64_t)>& body) {
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = 1;
  }
  const auto n_threads = static_cast<std::uint64_t>(workers);
  if (workers == 1 || total < 2 * n_threads) {
    for (std::uint64_t i = 0; i < total; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::uint64_t chunk = (total + n_threads - 1) / n_threads;
  for (std::uint64_t w = 0; w < n_threads; ++w) {
    const std::uint64_t lo = w * chunk;
    const std::uint64_t hi = std::min(total, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::uint64_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

// Mean and standard error from per-shot weighted values, accumulated in shot
// order regardless of how the shots were distributed across workers.
inline void reduce_weighted(const std::vector<double>& w, EstimatorResult& out) {
  const std::size_t n = w.size();
  out.shots = n;
  if (n == 0) return;
  double sum = 0.0;
  for (double v : w) sum += v;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double v : w) ss += (v - mean) * (v - mean);
  out.mean = mean;
  out.std_error = n > 1 ? std::sqrt(ss / (static_cast<double>(n) - 1.0) / static_cast<double>(n))
                        : 0.0;
}

struct CompiledHamiltonian {
  std::vector<CompiledPauli> terms;
  explicit CompiledHamiltonian(const Hamiltonian& h) {
    terms.reserve(h.terms().size());
    for (const auto& t : h.terms()) terms.push_back(compile_pauli(t.op));
  }
};

}  // namespace detail

inline constexpr std::uint64_t kShotAuxTag = 0x5a17'0b5e'77e1'100dULL;

/// Run one sampled circuit on a copy of the initial state. Delta variants are
/// rotations by sign * delta; pi variants apply the bare generator (the
/// superoperator of R(pi) up to global phase). Depolarizing noise, when
/// enabled, follows every gate on the gate's support.
inline void apply_sampled_circuit(StateVector& state, const SampledCircuit& circuit,
                                  const detail::CompiledHamiltonian& compiled,
                                  const NoiseModel& noise, Rng& rng) {
  for (const auto& gate : circuit.gates) {
    const CompiledPauli& p = compiled.terms[gate.term];
    if (gate.variant == GateVariant::kDelta) {
      state.apply_rotation(p, gate.angle_sign * circuit.delta);
    } else {
      state.apply_pauli(p);
    }
    apply_noise_trajectory(state, p, noise, rng);
  }
}

/// TE-PAI estimator: for each shot, draw a circuit, simulate it, extract
/// either one +-1 eigenvalue sample or the exact expectation, and weight by
/// overhead * sign. Bit-reproducible for fixed master_seed, any worker count.
inline EstimatorResult run_estimator(const TrotterTemplate& tmpl, double delta,
                                     const PauliString& observable, const StateVector& initial,
                                     std::uint64_t n_shots, EstimatorMode mode,
                                     const NoiseModel& noise, std::uint64_t master_seed,
                                     const RunOptions& options = {}) {
  if (observable.n_qubits() != tmpl.hamiltonian().n_qubits()) {
    throw ValidationError("run_estimator: observable does not match the Hamiltonian size");
  }
  if (initial.n_qubits() != tmpl.hamiltonian().n_qubits()) {
    throw ValidationError("run_estimator: initial state does not match the Hamiltonian size");
  }
  const PaiSampler sampler(tmpl, delta);
  const detail::CompiledHamiltonian compiled(tmpl.hamiltonian());
  const CompiledPauli obs = compile_pauli(observable);
  const double overhead = sampler.overhead();

  std::vector<double> weighted(n_shots);
  std::vector<ShotRecord> records(n_shots);
  detail::parallel_for(n_shots, options.workers, [&](std::uint64_t i) {
    const SampledCircuit circuit = sampler.sample(master_seed, i);
    StateVector state = initial;
    Rng aux(mix_seed(mix_seed(splitmix64(master_seed), i), kShotAuxTag));
    apply_sampled_circuit(state, circuit, compiled, noise, aux);
    const double outcome = mode == EstimatorMode::kSampledShot
                               ? static_cast<double>(state.sample_eigenvalue(obs, aux))
                               : state.expectation(obs);
    const double value = overhead * circuit.sign * outcome;
    weighted[i] = value;
    records[i] = {i, circuit.draw_seed, circuit.sign, static_cast<std::uint32_t>(circuit.nu()),
                  outcome, value};
  });

  EstimatorResult result;
  result.mode = mode;
  result.overhead = overhead;
  detail::reduce_weighted(weighted, result);
  if (n_shots > 0) {
    double nu_sum = 0.0;
    for (const auto& r : records) nu_sum += r.nu;
    result.nu_mean = nu_sum / static_cast<double>(n_shots);
    double nu_ss = 0.0;
    for (const auto& r : records) nu_ss += (r.nu - result.nu_mean) * (r.nu - result.nu_mean);
    result.nu_variance = n_shots > 1 ? nu_ss / (static_cast<double>(n_shots) - 1.0) : 0.0;
  }
  if (options.keep_records) result.records = std::move(records);
  return result;
}

/// Channel-averaged qDRIFT estimator over independent trajectory draws.
inline EstimatorResult run_qdrift_estimator(const Hamiltonian& h, double T, long N,
                                            const PauliString& observable,
                                            const StateVector& initial, std::uint64_t n_shots,
                                            EstimatorMode mode, const NoiseModel& noise,
                                            std::uint64_t master_seed,
                                            const RunOptions& options = {}) {
  const auto shared = std::make_shared<Hamiltonian>(h);
  const detail::CompiledHamiltonian compiled(h);
  const CompiledPauli obs = compile_pauli(observable);

  std::vector<double> weighted(n_shots);
  std::vector<ShotRecord> records(n_shots);
  detail::parallel_for(n_shots, options.workers, [&](std::uint64_t i) {
    const SampledCircuit circuit = sample_qdrift(shared, T, N, master_seed, i);
    StateVector state = initial;
    Rng aux(mix_seed(mix_seed(splitmix64(master_seed), i), kShotAuxTag));
    apply_sampled_circuit(state, circuit, compiled, noise, aux);
    const double outcome = mode == EstimatorMode::kSampledShot
                               ? static_cast<double>(state.sample_eigenvalue(obs, aux))
                               : state.expectation(obs);
    weighted[i] = outcome;
    records[i] = {i, circuit.draw_seed, 1, static_cast<std::uint32_t>(circuit.nu()), outcome,
                  outcome};
  });

  EstimatorResult result;
  result.mode = mode;
  result.overhead = 1.0;
  detail::reduce_weighted(weighted, result);
  result.nu_mean = n_shots > 0 ? static_cast<double>(N) : 0.0;
  result.nu_variance = 0.0;
  if (options.keep_records) result.records = std::move(records);
  return result;
}

/// Deterministic single pass over the full continuous-angle template
/// (noiseless), or a Monte Carlo trajectory average when noise is enabled.
inline EstimatorResult run_trotter_reference(const TrotterTemplate& tmpl,
                                             const PauliString& observable,
                                             const StateVector& initial, const NoiseModel& noise,
                                             std::uint64_t n_trajectories = 1,
                                             std::uint64_t master_seed = 0,
                                             const RunOptions& options = {}) {
  const detail::CompiledHamiltonian compiled(tmpl.hamiltonian());
  const CompiledPauli obs = compile_pauli(observable);
  const int L = tmpl.n_terms();

  const auto run_one = [&](StateVector& state, Rng* rng) {
    for (long j = 0; j < tmpl.steps(); ++j) {
      for (int k = 0; k < L; ++k) {
        state.apply_rotation(compiled.terms[k], tmpl.angle(k, j));
        if (rng != nullptr) apply_noise_trajectory(state, compiled.terms[k], noise, *rng);
      }
    }
  };

  EstimatorResult result;
  result.mode = EstimatorMode::kPerCircuitExpectation;
  if (!noise.enabled) {
    StateVector state = initial;
    run_one(state, nullptr);
    result.mean = state.expectation(obs);
    result.std_error = 0.0;
    result.shots = 1;
    return result;
  }
  std::vector<double> values(n_trajectories);
  detail::parallel_for(n_trajectories, options.workers, [&](std::uint64_t i) {
    StateVector state = initial;
    Rng rng(mix_seed(mix_seed(splitmix64(master_seed), i), kShotAuxTag));
    run_one(state, &rng);
    values[i] = state.expectation(obs);
  });
  detail::reduce_weighted(values, result);
  return result;
}

/// Exact time evolution for small systems. Time-independent Hamiltonians are
/// exponentiated once through an eigendecomposition; time-dependent ones use
/// an ordered product of midpoint-sampled exact slices with the step count
/// doubled until the state stops changing (2-norm difference < tol).
inline StateVector exact_evolution(const Hamiltonian& h, double T, const StateVector& initial,
                                   long initial_steps = 256, double tol = 1e-8,
                                   int dense_limit = kDenseQubitLimit) {
  if (h.n_qubits() > dense_limit) {
    throw ResourceLimitError("exact_evolution: " + std::to_string(h.n_qubits()) +
                             " qubits exceeds dense limit " + std::to_string(dense_limit));
  }
  if (initial.n_qubits() != h.n_qubits()) {
    throw ValidationError("exact_evolution: initial state does not match the Hamiltonian size");
  }
  const Eigen::Index dim = Eigen::Index{1} << h.n_qubits();
  const auto to_eigen = [dim](const StateVector& s) {
    Eigen::VectorXcd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = s.amplitudes()[static_cast<std::size_t>(i)];
    return v;
  };
  const auto from_eigen = [&h](const Eigen::VectorXcd& v) {
    StateVector s(h.n_qubits());
    for (Eigen::Index i = 0; i < v.size(); ++i) s.amplitude(static_cast<std::size_t>(i)) = v(i);
    return s;
  };

  if (T == 0.0) return initial;

  if (h.time_independent()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h.to_dense(0.0, dense_limit));
    const Eigen::VectorXcd phases =
        (std::complex<double>(0.0, -T) * eig.eigenvalues().cast<std::complex<double>>()).array().exp();
    const Eigen::VectorXcd v = to_eigen(initial);
    return from_eigen(eig.eigenvectors() *
                      (phases.array() * (eig.eigenvectors().adjoint() * v).array()).matrix());
  }

  // Dense Pauli matrices reused across slices.
  std::vector<Eigen::MatrixXcd> dense;
  dense.reserve(h.terms().size());
  for (const auto& term : h.terms()) dense.push_back(to_dense(term.op, dense_limit));

  const auto evolve = [&](long steps) {
    Eigen::VectorXcd v = to_eigen(initial);
    const double dt = T / static_cast<double>(steps);
    Eigen::MatrixXcd ht(dim, dim);
    for (long m = 0; m < steps; ++m) {
      const double t_mid = (static_cast<double>(m) + 0.5) * dt;
      ht.setZero();
      for (std::size_t k = 0; k < dense.size(); ++k) {
        ht += h.terms()[k].coeff(t_mid) * dense[k];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(ht);
      const Eigen::VectorXcd phases =
          (std::complex<double>(0.0, -dt) * eig.eigenvalues().cast<std::complex<double>>())
              .array()
              .exp();
      v = eig.eigenvectors() * (phases.array() * (eig.eigenvectors().adjoint() * v).array()).matrix();
    }
    return v;
  };

  long steps = std::max<long>(initial_steps, 2);
  Eigen::VectorXcd prev = evolve(steps);
  for (int round = 0; round < 14; ++round) {
    steps *= 2;
    Eigen::VectorXcd next = evolve(steps);
    if ((next - prev).norm() < tol) return from_eigen(next);
    prev = std::move(next);
  }
  throw NumericalError("exact_evolution: ordered-product integration did not converge");
}

/// <O> after exact evolution; convenience wrapper.
inline double exact_expectation(const Hamiltonian& h, double T, const StateVector& initial,
                                const PauliString& observable, long initial_steps = 256,
                                double tol = 1e-8) {
  return exact_evolution(h, T, initial, initial_steps, tol).expectation(observable);
}

}  // namespace tepai
