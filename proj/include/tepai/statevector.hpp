#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tepai/errors.hpp"
#include "tepai/pauli.hpp"
#include "tepai/rng.hpp"

namespace tepai {

inline constexpr int kStatevectorQubitLimit = 24;

/// Bit masks and phase data of a Pauli string, precomputed for fast
/// application to statevectors. P|i> = phase(i) |i ^ flip> with
/// phase(i) = i^{#Y} * (-1)^{popcount(i & phase_flip)}.
struct CompiledPauli {
  std::uint64_t flip = 0;        // X and Y bits
  std::uint64_t phase_flip = 0;  // Y and Z bits
  std::uint64_t support = 0;     // all non-identity bits
  std::complex<double> base = {1.0, 0.0};  // i^{#Y}
  std::vector<std::pair<std::uint32_t, Axis>> factors;

  bool diagonal() const { return flip == 0; }
  int weight() const { return static_cast<int>(factors.size()); }
};

inline CompiledPauli compile_pauli(const PauliString& p) {
  if (p.n_qubits() > 63) {
    throw ResourceLimitError("compile_pauli: more than 63 qubits");
  }
  CompiledPauli c;
  c.factors = p.factors();
  int y_count = 0;
  for (const auto& [qubit, axis] : p.factors()) {
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    c.support |= bit;
    switch (axis) {
      case Axis::X: c.flip |= bit; break;
      case Axis::Y: c.flip |= bit; c.phase_flip |= bit; ++y_count; break;
      case Axis::Z: c.phase_flip |= bit; break;
    }
  }
  c.base = detail::quarter_phase(y_count);
  return c;
}

/// Dense n-qubit pure state. Amplitude index convention: qubit q is bit q.
class StateVector {
 public:
  explicit StateVector(int n_qubits, int qubit_limit = kStatevectorQubitLimit)
      : n_qubits_(n_qubits) {
    if (n_qubits < 1) throw ValidationError("StateVector: need n >= 1");
    if (n_qubits > qubit_limit) {
      throw ResourceLimitError("StateVector: " + std::to_string(n_qubits) +
                               " qubits exceeds the statevector limit " +
                               std::to_string(qubit_limit));
    }
    amps_.assign(std::size_t{1} << n_qubits, {0.0, 0.0});
  }

  static StateVector zero_state(int n_qubits) {
    StateVector s(n_qubits);
    s.amps_[0] = {1.0, 0.0};
    return s;
  }

  /// Computational basis state from a bitstring; character i is qubit i.
  static StateVector from_bitstring(std::string_view bits) {
    StateVector s(static_cast<int>(bits.size()));
    std::uint64_t index = 0;
    for (std::size_t q = 0; q < bits.size(); ++q) {
      if (bits[q] == '1') {
        index |= std::uint64_t{1} << q;
      } else if (bits[q] != '0') {
        throw ValidationError("from_bitstring: invalid character '" + std::string(1, bits[q]) +
                              "'");
      }
    }
    s.amps_[index] = {1.0, 0.0};
    return s;
  }

  static StateVector plus_all(int n_qubits) {
    StateVector s(n_qubits);
    const double a = std::pow(2.0, -0.5 * n_qubits);
    for (auto& amp : s.amps_) amp = {a, 0.0};
    return s;
  }

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<std::complex<double>>& amplitudes() const { return amps_; }
  std::complex<double>& amplitude(std::size_t i) { return amps_[i]; }

  double norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
  }

  /// Pauli rotation R(theta) = exp(-i theta P / 2) applied in place, touching
  /// only the amplitude pairs coupled by P.
  void apply_rotation(const CompiledPauli& p, double theta) {
    check_fits(p);
    const double c = std::cos(0.5 * theta);
    const std::complex<double> mis{0.0, -std::sin(0.5 * theta)};
    if (p.diagonal()) {
      const std::complex<double> ep = c + mis;   // exp(-i theta/2)
      const std::complex<double> em = c - mis;   // exp(+i theta/2)
      for (std::size_t i = 0; i < amps_.size(); ++i) {
        amps_[i] *= (std::popcount(i & p.phase_flip) & 1) ? em : ep;
      }
      return;
    }
    const std::uint64_t hi = std::uint64_t{1} << (63 - std::countl_zero(p.flip));
    const std::complex<double> mis_base = mis * p.base;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (i & hi) continue;
      const std::size_t ii = i ^ p.flip;
      const std::complex<double> ai = amps_[i], aii = amps_[ii];
      const bool minus_i = std::popcount(i & p.phase_flip) & 1;
      const bool minus_ii = std::popcount(ii & p.phase_flip) & 1;
      // phase(x) multiplies P|x>; the pair rule is psi' = c psi - i s P psi.
      amps_[i] = c * ai + (minus_ii ? -mis_base : mis_base) * aii;
      amps_[ii] = c * aii + (minus_i ? -mis_base : mis_base) * ai;
    }
  }

  void apply_rotation(const PauliString& p, double theta) {
    apply_rotation(compile_pauli(p), theta);
  }

  /// Apply the bare Pauli string (exact phases included).
  void apply_pauli(const CompiledPauli& p) {
    check_fits(p);
    if (p.diagonal()) {
      for (std::size_t i = 0; i < amps_.size(); ++i) {
        if (std::popcount(i & p.phase_flip) & 1) amps_[i] = -amps_[i];
      }
      return;
    }
    const std::uint64_t hi = std::uint64_t{1} << (63 - std::countl_zero(p.flip));
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (i & hi) continue;
      const std::size_t ii = i ^ p.flip;
      const std::complex<double> ai = amps_[i], aii = amps_[ii];
      const bool minus_i = std::popcount(i & p.phase_flip) & 1;
      const bool minus_ii = std::popcount(ii & p.phase_flip) & 1;
      amps_[i] = (minus_ii ? -p.base : p.base) * aii;
      amps_[ii] = (minus_i ? -p.base : p.base) * ai;
    }
  }

  void apply_pauli(const PauliString& p) { apply_pauli(compile_pauli(p)); }

  /// <psi| P |psi>, guaranteed real for Hermitian P.
  double expectation(const CompiledPauli& p) const {
    check_fits(p);
    double acc = 0.0;
    if (p.diagonal()) {
      for (std::size_t i = 0; i < amps_.size(); ++i) {
        const double w = std::norm(amps_[i]);
        acc += (std::popcount(i & p.phase_flip) & 1) ? -w : w;
      }
      return acc;
    }
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      const std::size_t ii = i ^ p.flip;
      const std::complex<double> term =
          std::conj(amps_[ii]) * p.base * amps_[i];
      acc += (std::popcount(i & p.phase_flip) & 1) ? -term.real() : term.real();
    }
    return acc;
  }

  double expectation(const PauliString& p) const { return expectation(compile_pauli(p)); }

  /// Single eigenvalue sample of a Pauli observable: rotate its support into
  /// the Z basis, draw one basis state, and return the support-bit parity.
  /// Mutates the state; callers discard it afterwards.
  int sample_eigenvalue(const CompiledPauli& p, Rng& rng) {
    check_fits(p);
    for (const auto& [qubit, axis] : p.factors) {
      if (axis == Axis::X) {
        apply_hadamard(qubit);
      } else if (axis == Axis::Y) {
        apply_hsdg(qubit);
      }
    }
    const std::size_t idx = sample_basis_index(rng);
    return (std::popcount(idx & p.support) & 1) ? -1 : 1;
  }

  /// Draw one computational basis index from |amplitudes|^2.
  std::size_t sample_basis_index(Rng& rng) const {
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < amps_.size(); ++i) {
      acc += std::norm(amps_[i]);
      if (u < acc) return i;
    }
    return amps_.size() - 1;
  }

  void apply_hadamard(std::uint32_t qubit) {
    static const double r = std::sqrt(0.5);
    apply_single_qubit(qubit, {r, 0.0}, {r, 0.0}, {r, 0.0}, {-r, 0.0});
  }

  /// H * S_dagger; maps the Y eigenbasis onto the Z eigenbasis.
  void apply_hsdg(std::uint32_t qubit) {
    static const double r = std::sqrt(0.5);
    apply_single_qubit(qubit, {r, 0.0}, {0.0, -r}, {r, 0.0}, {0.0, r});
  }

  /// Generic single-qubit gate [[m00, m01], [m10, m11]].
  void apply_single_qubit(std::uint32_t qubit, std::complex<double> m00,
                          std::complex<double> m01, std::complex<double> m10,
                          std::complex<double> m11) {
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (i & bit) continue;
      const std::size_t ii = i | bit;
      const std::complex<double> a0 = amps_[i], a1 = amps_[ii];
      amps_[i] = m00 * a0 + m01 * a1;
      amps_[ii] = m10 * a0 + m11 * a1;
    }
  }

 private:
  void check_fits(const CompiledPauli& p) const {
    if (p.support >> n_qubits_) {
      throw ValidationError("StateVector: Pauli string does not fit the register");
    }
  }

  int n_qubits_;
  std::vector<std::complex<double>> amps_;
};

/// Depolarizing noise following each gate, acting on the gate's support.
struct NoiseModel {
  double p1 = 0.0;  // single-qubit depolarizing probability
  double p2 = 0.0;  // probability for supports of two or more qubits
  bool enabled = false;
};

/// One Monte Carlo depolarizing event: with the support-size dependent
/// probability, apply one of the 4^w - 1 non-identity Paulis on the support,
/// chosen uniformly.
inline void apply_noise_trajectory(StateVector& state, const CompiledPauli& gate_support,
                                   const NoiseModel& noise, Rng& rng) {
  if (!noise.enabled || gate_support.factors.empty()) return;
  const int w = gate_support.weight();
  const double p = (w == 1) ? noise.p1 : noise.p2;
  if (p <= 0.0 || rng.uniform() >= p) return;
  const std::uint64_t options = (std::uint64_t{1} << (2 * w)) - 1;  // 4^w - 1
  std::uint64_t code = 1 + rng.below(options);
  std::vector<PauliString::Factor> factors;
  factors.reserve(static_cast<std::size_t>(w));
  for (const auto& [qubit, axis] : gate_support.factors) {
    (void)axis;
    const auto a = static_cast<std::uint8_t>(code & 3);
    code >>= 2;
    if (a != 0) factors.emplace_back(qubit, static_cast<Axis>(a));
  }
  state.apply_pauli(PauliString(state.n_qubits(), std::move(factors)));
}

}  // namespace tepai
