#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "tepai/errors.hpp"
#include "tepai/pauli.hpp"
#include "tepai/rng.hpp"

namespace tepai {

/// Time dependence of one Hamiltonian coefficient c_k(t). Three kinds:
/// constant value, harmonic A*cos(w*t), and tabulated samples with linear
/// interpolation on a strictly increasing time grid.
class CoefficientSchedule {
 public:
  enum class Kind { kConstant, kHarmonic, kTabulated };

  static CoefficientSchedule constant(double value) {
    return CoefficientSchedule(ConstantData{value});
  }

  static CoefficientSchedule harmonic(double amplitude, double angular_frequency) {
    if (!(angular_frequency > 0)) {
      throw ValidationError("harmonic schedule: angular_frequency must be > 0");
    }
    return CoefficientSchedule(HarmonicData{amplitude, angular_frequency});
  }

  static CoefficientSchedule tabulated(std::vector<double> times, std::vector<double> values) {
    if (times.size() != values.size() || times.size() < 2) {
      throw ValidationError("tabulated schedule: need >= 2 matching grid points");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
      if (!(times[i] > times[i - 1])) {
        throw ValidationError("tabulated schedule: time grid must be strictly increasing");
      }
    }
    return CoefficientSchedule(TabulatedData{std::move(times), std::move(values)});
  }

  Kind kind() const {
    if (std::holds_alternative<ConstantData>(data_)) return Kind::kConstant;
    if (std::holds_alternative<HarmonicData>(data_)) return Kind::kHarmonic;
    return Kind::kTabulated;
  }

  bool is_constant() const { return kind() == Kind::kConstant; }

  double constant_value() const { return std::get<ConstantData>(data_).value; }

  double operator()(double t) const {
    if (const auto* c = std::get_if<ConstantData>(&data_)) return c->value;
    if (const auto* h = std::get_if<HarmonicData>(&data_)) {
      return h->amplitude * std::cos(h->angular_frequency * t);
    }
    const auto& tab = std::get<TabulatedData>(data_);
    if (t < tab.times.front() - 1e-12 || t > tab.times.back() + 1e-12) {
      throw ValidationError("tabulated schedule: t=" + std::to_string(t) +
                            " outside the tabulated domain");
    }
    t = std::clamp(t, tab.times.front(), tab.times.back());
    const auto it = std::upper_bound(tab.times.begin(), tab.times.end(), t);
    const std::size_t hi = std::min<std::size_t>(
        std::max<std::size_t>(1, static_cast<std::size_t>(it - tab.times.begin())),
        tab.times.size() - 1);
    const double t0 = tab.times[hi - 1], t1 = tab.times[hi];
    const double w = (t - t0) / (t1 - t0);
    return tab.values[hi - 1] * (1.0 - w) + tab.values[hi] * w;
  }

  /// Supremum of |c(t)| over [t0, t1]; requires the interval to be inside the
  /// schedule's domain.
  double max_abs(double t0, double t1) const {
    if (const auto* c = std::get_if<ConstantData>(&data_)) return std::abs(c->value);
    if (const auto* h = std::get_if<HarmonicData>(&data_)) {
      // |cos| attains 1 on any interval at least half a period long.
      const double period = 2.0 * M_PI / h->angular_frequency;
      if (t1 - t0 >= period / 2.0) return std::abs(h->amplitude);
      double best = std::max(std::abs((*this)(t0)), std::abs((*this)(t1)));
      const double first_peak = std::ceil(t0 / (period / 2.0)) * (period / 2.0);
      if (first_peak <= t1) best = std::abs(h->amplitude);
      return best;
    }
    const auto& tab = std::get<TabulatedData>(data_);
    double best = 0.0;
    for (std::size_t i = 0; i < tab.times.size(); ++i) {
      if (tab.times[i] >= t0 - 1e-12 && tab.times[i] <= t1 + 1e-12) {
        best = std::max(best, std::abs(tab.values[i]));
      }
    }
    best = std::max(best, std::abs((*this)(t0)));
    best = std::max(best, std::abs((*this)(t1)));
    return best;
  }

  /// Collect points in (0, T) where |c(t)| is not smooth: zero crossings and,
  /// for tabulated schedules, the interior grid points.
  void append_kinks(double T, std::vector<double>& out) const {
    if (std::holds_alternative<ConstantData>(data_)) return;
    if (const auto* h = std::get_if<HarmonicData>(&data_)) {
      if (h->amplitude == 0.0) return;
      const double step = M_PI / h->angular_frequency;
      for (double t = 0.5 * step; t < T; t += step) out.push_back(t);
      return;
    }
    const auto& tab = std::get<TabulatedData>(data_);
    for (std::size_t i = 1; i + 1 < tab.times.size(); ++i) {
      if (tab.times[i] > 0 && tab.times[i] < T) out.push_back(tab.times[i]);
    }
    for (std::size_t i = 1; i < tab.times.size(); ++i) {
      const double v0 = tab.values[i - 1], v1 = tab.values[i];
      if (v0 * v1 < 0) {
        const double t = tab.times[i - 1] + (tab.times[i] - tab.times[i - 1]) * v0 / (v0 - v1);
        if (t > 0 && t < T) out.push_back(t);
      }
    }
  }

 private:
  struct ConstantData { double value; };
  struct HarmonicData { double amplitude; double angular_frequency; };
  struct TabulatedData { std::vector<double> times; std::vector<double> values; };

  explicit CoefficientSchedule(std::variant<ConstantData, HarmonicData, TabulatedData> data)
      : data_(std::move(data)) {}

  std::variant<ConstantData, HarmonicData, TabulatedData> data_;
};

struct HamiltonianTerm {
  PauliString op;
  CoefficientSchedule coeff;
};

/// H(t) = sum_k c_k(t) h_k with h_k sparse Pauli strings. Immutable after
/// construction; at least one term, no duplicate strings, all strings sized to
/// n_qubits.
class Hamiltonian {
 public:
  Hamiltonian(int n_qubits, std::vector<HamiltonianTerm> terms, std::string label = "")
      : n_qubits_(n_qubits), terms_(std::move(terms)), label_(std::move(label)) {
    if (terms_.empty()) throw ValidationError("Hamiltonian: needs at least one term");
    std::set<std::string> seen;
    for (const auto& term : terms_) {
      if (term.op.n_qubits() != n_qubits_) {
        throw ValidationError("Hamiltonian: term '" + term.op.str() + "' sized for " +
                              std::to_string(term.op.n_qubits()) + " qubits, expected " +
                              std::to_string(n_qubits_));
      }
      if (!seen.insert(term.op.str()).second) {
        throw ValidationError("Hamiltonian: duplicate term '" + term.op.str() + "'");
      }
    }
  }

  int n_qubits() const { return n_qubits_; }
  int n_terms() const { return static_cast<int>(terms_.size()); }
  const std::vector<HamiltonianTerm>& terms() const { return terms_; }
  const std::string& label() const { return label_; }

  bool time_independent() const {
    for (const auto& t : terms_) {
      if (!t.coeff.is_constant()) return false;
    }
    return true;
  }

  /// sum_k |c_k| for constant-coefficient Hamiltonians.
  double l1_norm_constant() const {
    double s = 0.0;
    for (const auto& t : terms_) s += std::abs(t.coeff.constant_value());
    return s;
  }

  double l2_norm_sq_constant() const {
    double s = 0.0;
    for (const auto& t : terms_) {
      const double c = t.coeff.constant_value();
      s += c * c;
    }
    return s;
  }

  /// Dense matrix of H(t); limited to small systems.
  Eigen::MatrixXcd to_dense(double t = 0.0, int dense_limit = kDenseQubitLimit) const {
    if (n_qubits_ > dense_limit) {
      throw ResourceLimitError("Hamiltonian::to_dense: " + std::to_string(n_qubits_) +
                               " qubits exceeds dense limit " + std::to_string(dense_limit));
    }
    const Eigen::Index dim = Eigen::Index{1} << n_qubits_;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& term : terms_) {
      m += term.coeff(t) * tepai::to_dense(term.op, dense_limit);
    }
    return m;
  }

 private:
  int n_qubits_;
  std::vector<HamiltonianTerm> terms_;
  std::string label_;
};

namespace detail {

// Adaptive Simpson on one smooth piece, with absolute tolerance budget.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb,
                        double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0) {
    throw NumericalError("adaptive quadrature failed to converge");
  }
  if (std::abs(delta) <= 15.0 * eps) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

template <typename F>
double integrate_piecewise(const F& f, const std::vector<double>& knots, double rel_tol) {
  // First pass: rough scale for the absolute tolerance budget.
  double scale = 0.0;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    const double a = knots[i - 1], b = knots[i];
    scale += (b - a) * 0.5 * (std::abs(f(a)) + std::abs(f(b)));
  }
  const double total_len = knots.back() - knots.front();
  const double eps_total = std::max(scale, 1e-300) * rel_tol;
  double sum = 0.0;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    const double a = knots[i - 1], b = knots[i];
    if (!(b > a)) continue;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    sum += adaptive_simpson(f, a, b, fa, fm, fb, whole,
                            eps_total * ((b - a) / total_len), 48);
  }
  return sum;
}

}  // namespace detail

/// Average l1-norm (1/T) * integral_0^T sum_k |c_k(t)| dt. Constant-coefficient
/// Hamiltonians reduce exactly to sum |c_k|; otherwise adaptive Simpson with
/// the integration split at every |c_k| kink (relative tolerance 1e-9).
inline double l1_norm_avg(const Hamiltonian& h, double T, double rel_tol = 1e-9) {
  if (!(T > 0)) throw ValidationError("l1_norm_avg: T must be > 0");
  if (h.time_independent()) return h.l1_norm_constant();

  std::vector<double> knots{0.0, T};
  for (const auto& term : h.terms()) term.coeff.append_kinks(T, knots);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end(),
                          [T](double a, double b) { return std::abs(a - b) < 1e-15 * T; }),
              knots.end());

  const auto integrand = [&h](double t) {
    double s = 0.0;
    for (const auto& term : h.terms()) s += std::abs(term.coeff(t));
    return s;
  };
  return detail::integrate_piecewise(integrand, knots, rel_tol) / T;
}

struct CommutatorOptions {
  /// Spectral norms of dense commutators are used up to this many qubits; the
  /// dense path costs one Hermitian eigensolve of size 2^n per term.
  int dense_limit = 8;
  long long max_pairs = 50'000'000;
};

/// Pauli-pair upper bound 2 * sum_{i<j} |c_i(t)| |c_j(t)| [h_i, h_j] != 0.
inline double commutator_pair_bound(const Hamiltonian& h, double t) {
  const auto& terms = h.terms();
  const std::size_t L = terms.size();
  std::vector<double> c(L);
  for (std::size_t i = 0; i < L; ++i) c[i] = std::abs(terms[i].coeff(t));
  double sum = 0.0;
  for (std::size_t i = 0; i < L; ++i) {
    if (c[i] == 0.0) continue;
    for (std::size_t j = i + 1; j < L; ++j) {
      if (c[j] == 0.0 || commutes(terms[i].op, terms[j].op)) continue;
      sum += c[i] * c[j];
    }
  }
  return 2.0 * sum;
}

/// Trotter error norm at time t:
///   sum_{g1} || [ sum_{g2>g1} c_{g2} h_{g2}, c_{g1} h_{g1} ] ||.
/// Uses spectral norms of the dense realization when the system is small
/// enough, otherwise the Pauli-pair upper bound.
inline double commutator_norm_sq(const Hamiltonian& h, double t,
                                 const CommutatorOptions& opts = {}) {
  const auto& terms = h.terms();
  const std::size_t L = terms.size();
  if (h.n_qubits() > opts.dense_limit) {
    if (static_cast<long long>(L) * static_cast<long long>(L) > opts.max_pairs) {
      throw ResourceLimitError("commutator_norm_sq: too many term pairs");
    }
    return commutator_pair_bound(h, t);
  }
  const Eigen::Index dim = Eigen::Index{1} << h.n_qubits();
  Eigen::MatrixXcd suffix = Eigen::MatrixXcd::Zero(dim, dim);
  std::vector<Eigen::MatrixXcd> dense(L);
  for (std::size_t k = 0; k < L; ++k) {
    dense[k] = terms[k].coeff(t) * to_dense(terms[k].op, opts.dense_limit);
    if (k > 0) suffix += dense[k];
  }
  double total = 0.0;
  for (std::size_t g1 = 0; g1 + 1 < L; ++g1) {
    const Eigen::MatrixXcd comm = suffix * dense[g1] - dense[g1] * suffix;
    // [A, B] of Hermitian A, B is anti-Hermitian: i*comm is Hermitian and the
    // spectral norm is its largest absolute eigenvalue.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(
        std::complex<double>(0.0, 1.0) * comm, Eigen::EigenvaluesOnly);
    const auto& vals = eig.eigenvalues();
    total += std::max(std::abs(vals.minCoeff()), std::abs(vals.maxCoeff()));
    suffix -= dense[g1 + 1];
  }
  return total;
}

/// Heisenberg ring with random on-site fields:
///   H = sum_k w_k Z_k + J(t) (X_k X_{k+1} + Y_k Y_{k+1} + Z_k Z_{k+1}),
/// J(t) = cos(99 pi t), w_k drawn uniformly from [-1, 1] with the given seed.
/// L = 4n terms; bit-reproducible for a fixed seed.
inline Hamiltonian build_spin_ring(int n, std::uint64_t seed) {
  if (n < 3) throw ValidationError("build_spin_ring: need n >= 3");
  Rng rng(splitmix64(seed));
  std::vector<HamiltonianTerm> terms;
  terms.reserve(4 * static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double omega = 2.0 * rng.uniform() - 1.0;
    terms.push_back({PauliString::single(n, k, Axis::Z), CoefficientSchedule::constant(omega)});
  }
  const double omega_j = 99.0 * M_PI;
  for (int k = 0; k < n; ++k) {
    const int kp = (k + 1) % n;
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
      terms.push_back({PauliString::two(n, k, a, kp, a),
                       CoefficientSchedule::harmonic(1.0, omega_j)});
    }
  }
  return Hamiltonian(n, std::move(terms),
                     "spin_ring(n=" + std::to_string(n) + ",seed=" + std::to_string(seed) + ")");
}

/// Load a constant-coefficient Hamiltonian from a term file: one term per
/// line, "<coeff> <pauli factors>", '#' starts a comment. The qubit count is
/// inferred from the largest index used.
inline Hamiltonian load_term_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("term file: cannot open '" + path.string() + "'");
  struct RawTerm { double coeff; std::string pauli; int line; };
  std::vector<RawTerm> raw;
  int max_index = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string coeff_tok;
    if (!(ls >> coeff_tok)) continue;
    double coeff = 0.0;
    try {
      std::size_t pos = 0;
      coeff = std::stod(coeff_tok, &pos);
      if (pos != coeff_tok.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ValidationError("term file: line " + std::to_string(line_no) +
                            ": bad coefficient '" + coeff_tok + "'");
    }
    std::string pauli_text, tok;
    while (ls >> tok) {
      if (!pauli_text.empty()) pauli_text += ' ';
      pauli_text += tok;
      if (tok != "I") {
        try {
          max_index = std::max(max_index, std::stoi(tok.substr(1)));
        } catch (const std::exception&) {
          throw ValidationError("term file: line " + std::to_string(line_no) +
                                ": bad factor '" + tok + "'");
        }
      }
    }
    if (pauli_text.empty()) {
      throw ValidationError("term file: line " + std::to_string(line_no) + ": missing Pauli string");
    }
    raw.push_back({coeff, pauli_text, line_no});
  }
  if (raw.empty()) throw ValidationError("term file: '" + path.string() + "' contains no terms");
  const int n = std::max(max_index + 1, 1);
  std::vector<HamiltonianTerm> terms;
  std::set<std::string> seen;
  terms.reserve(raw.size());
  for (const auto& r : raw) {
    PauliString op = [&] {
      try {
        return PauliString::parse(r.pauli, n);
      } catch (const ValidationError& e) {
        throw ValidationError("term file: line " + std::to_string(r.line) + ": " + e.what());
      }
    }();
    if (!seen.insert(op.str()).second) {
      throw ValidationError("term file: line " + std::to_string(r.line) + ": duplicate term '" +
                            op.str() + "'");
    }
    terms.push_back({std::move(op), CoefficientSchedule::constant(r.coeff)});
  }
  return Hamiltonian(n, std::move(terms), path.filename().string());
}

}  // namespace tepai
