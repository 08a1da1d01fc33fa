#pragma once

#include <algorithm>
#include <bit>
#include <complex>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tepai/errors.hpp"

namespace tepai {

/// Qubits above this count are refused a dense 2^n x 2^n realization.
inline constexpr int kDenseQubitLimit = 12;

enum class Axis : std::uint8_t { X = 1, Y = 2, Z = 3 };

inline char axis_char(Axis a) {
  switch (a) {
    case Axis::X: return 'X';
    case Axis::Y: return 'Y';
    case Axis::Z: return 'Z';
  }
  throw ValidationError("invalid Pauli axis");
}

/// Sparse multi-qubit Pauli operator: a map from qubit index to axis, with
/// absent indices acting as identity. Immutable after construction; the factor
/// list is kept sorted by qubit index. The canonical text form is axis+index
/// pairs in ascending index order, e.g. "X0 Y3 Z7"; the identity is "I".
class PauliString {
 public:
  using Factor = std::pair<std::uint32_t, Axis>;

  PauliString(int n_qubits, std::vector<Factor> factors)
      : n_qubits_(n_qubits), factors_(std::move(factors)) {
    if (n_qubits_ < 1) throw ValidationError("PauliString: n_qubits must be >= 1");
    std::sort(factors_.begin(), factors_.end(),
              [](const Factor& a, const Factor& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (factors_[i].first >= static_cast<std::uint32_t>(n_qubits_)) {
        throw ValidationError("PauliString: qubit index " + std::to_string(factors_[i].first) +
                              " out of range for " + std::to_string(n_qubits_) + " qubits");
      }
      if (i > 0 && factors_[i].first == factors_[i - 1].first) {
        throw ValidationError("PauliString: duplicate qubit index " +
                              std::to_string(factors_[i].first));
      }
    }
  }

  static PauliString identity(int n_qubits) { return PauliString(n_qubits, {}); }

  static PauliString single(int n_qubits, int qubit, Axis axis) {
    return PauliString(n_qubits, {{static_cast<std::uint32_t>(qubit), axis}});
  }

  static PauliString two(int n_qubits, int q0, Axis a0, int q1, Axis a1) {
    return PauliString(n_qubits, {{static_cast<std::uint32_t>(q0), a0},
                                  {static_cast<std::uint32_t>(q1), a1}});
  }

  /// Parse the canonical text form, e.g. "X0 Y3" or "I".
  static PauliString parse(std::string_view text, int n_qubits) {
    std::vector<Factor> factors;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
      if (tok == "I") continue;
      Axis axis;
      switch (tok[0]) {
        case 'X': axis = Axis::X; break;
        case 'Y': axis = Axis::Y; break;
        case 'Z': axis = Axis::Z; break;
        default:
          throw ValidationError("PauliString: bad factor '" + tok + "'");
      }
      std::size_t pos = 0;
      int qubit = -1;
      try {
        qubit = std::stoi(tok.substr(1), &pos);
      } catch (const std::exception&) {
        throw ValidationError("PauliString: bad factor '" + tok + "'");
      }
      if (pos + 1 != tok.size() || qubit < 0) {
        throw ValidationError("PauliString: bad factor '" + tok + "'");
      }
      factors.emplace_back(static_cast<std::uint32_t>(qubit), axis);
    }
    return PauliString(n_qubits, std::move(factors));
  }

  int n_qubits() const { return n_qubits_; }
  int weight() const { return static_cast<int>(factors_.size()); }
  bool is_identity() const { return factors_.empty(); }
  const std::vector<Factor>& factors() const { return factors_; }

  /// Axis at a qubit, or 0 when the factor is identity.
  std::uint8_t axis_at(std::uint32_t qubit) const {
    auto it = std::lower_bound(factors_.begin(), factors_.end(), qubit,
                               [](const Factor& f, std::uint32_t q) { return f.first < q; });
    if (it != factors_.end() && it->first == qubit) return static_cast<std::uint8_t>(it->second);
    return 0;
  }

  std::string str() const {
    if (factors_.empty()) return "I";
    std::string out;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) out += ' ';
      out += axis_char(factors_[i].second);
      out += std::to_string(factors_[i].first);
    }
    return out;
  }

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.n_qubits_ == b.n_qubits_ && a.factors_ == b.factors_;
  }

 private:
  int n_qubits_;
  std::vector<Factor> factors_;
};

/// A PauliString together with a phase in {+1, -1, +i, -i}; Pauli strings are
/// closed under multiplication only up to such phases.
struct PhasedPauli {
  PauliString string;
  std::complex<double> phase;
};

namespace detail {
// i^q for q in {0,1,2,3}.
inline std::complex<double> quarter_phase(int q) {
  switch (q & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// Single-qubit product a*b = i^q * c for non-identity, distinct a != b.
// Cyclic order X->Y->Z->X gives +i, the reverse gives -i.
inline std::pair<int, Axis> axis_product(Axis a, Axis b) {
  const int ia = static_cast<int>(a), ib = static_cast<int>(b);
  const Axis c = static_cast<Axis>(6 - ia - ib);
  const bool cyclic = (ib == ia % 3 + 1);
  return {cyclic ? 1 : 3, c};
}
}  // namespace detail

/// Group product with tracked phase: a * b = phase * string.
inline PhasedPauli multiply(const PauliString& a, const PauliString& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw ValidationError("multiply: PauliString dimension mismatch (" +
                          std::to_string(a.n_qubits()) + " vs " + std::to_string(b.n_qubits()) + ")");
  }
  std::vector<PauliString::Factor> out;
  out.reserve(a.factors().size() + b.factors().size());
  int q = 0;
  auto ia = a.factors().begin(), ea = a.factors().end();
  auto ib = b.factors().begin(), eb = b.factors().end();
  while (ia != ea || ib != eb) {
    if (ib == eb || (ia != ea && ia->first < ib->first)) {
      out.push_back(*ia++);
    } else if (ia == ea || ib->first < ia->first) {
      out.push_back(*ib++);
    } else {
      if (ia->second != ib->second) {
        auto [dq, axis] = detail::axis_product(ia->second, ib->second);
        q += dq;
        out.emplace_back(ia->first, axis);
      }
      ++ia;
      ++ib;
    }
  }
  return {PauliString(a.n_qubits(), std::move(out)), detail::quarter_phase(q)};
}

/// True iff the strings commute: the number of positions where both act
/// non-trivially with different axes is even.
inline bool commutes(const PauliString& a, const PauliString& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw ValidationError("commutes: PauliString dimension mismatch");
  }
  int clashes = 0;
  auto ia = a.factors().begin(), ea = a.factors().end();
  auto ib = b.factors().begin(), eb = b.factors().end();
  while (ia != ea && ib != eb) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      if (ia->second != ib->second) ++clashes;
      ++ia;
      ++ib;
    }
  }
  return (clashes & 1) == 0;
}

/// Dense 2^n x 2^n matrix of the string. Basis convention: qubit q is bit q of
/// the index (little-endian), so the matrix equals factor(n-1) (x) ... (x)
/// factor(0) as a Kronecker product.
inline Eigen::MatrixXcd to_dense(const PauliString& p, int dense_limit = kDenseQubitLimit) {
  const int n = p.n_qubits();
  if (n > dense_limit) {
    throw ResourceLimitError("to_dense: " + std::to_string(n) + " qubits exceeds dense limit " +
                             std::to_string(dense_limit));
  }
  std::uint64_t flip = 0, yz = 0;
  int y_count = 0;
  for (const auto& [qubit, axis] : p.factors()) {
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    if (axis == Axis::X) flip |= bit;
    if (axis == Axis::Y) { flip |= bit; yz |= bit; ++y_count; }
    if (axis == Axis::Z) yz |= bit;
  }
  const std::uint64_t dim = std::uint64_t{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
  const std::complex<double> base = detail::quarter_phase(y_count);
  for (std::uint64_t col = 0; col < dim; ++col) {
    const bool minus = std::popcount(col & yz) & 1;
    m(static_cast<Eigen::Index>(col ^ flip), static_cast<Eigen::Index>(col)) =
        minus ? -base : base;
  }
  return m;
}

}  // namespace tepai
