// Test-side reference constructions, independent of the library paths they
// check: dense Pauli matrices assembled from explicit 2x2 literals and
// Kronecker products, closed-form rotation matrices, superoperators, plain
// trapezoid quadrature, and the statistics helpers used by the test suites.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

using Eigen::MatrixXcd;
using std::complex;

inline MatrixXcd pauli_2x2(char axis) {
  MatrixXcd m(2, 2);
  switch (axis) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, complex<double>(0, -1), complex<double>(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli_2x2: bad axis");
  }
  return m;
}

inline MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Dense matrix of the Pauli word given as one axis character per qubit,
/// axes[q] acting on qubit q; qubit 0 is the least significant index bit, so
/// the result is axes[n-1] (x) ... (x) axes[0].
inline MatrixXcd pauli_word(const std::string& axes) {
  MatrixXcd m = pauli_2x2(axes.at(0));
  for (std::size_t q = 1; q < axes.size(); ++q) {
    m = kron(pauli_2x2(axes[q]), m);
  }
  return m;
}

/// exp(-i theta P / 2) for an involutory P, via the closed form
/// cos(theta/2) I - i sin(theta/2) P.
inline MatrixXcd rotation(const MatrixXcd& p, double theta) {
  const Eigen::Index dim = p.rows();
  return std::cos(0.5 * theta) * MatrixXcd::Identity(dim, dim) -
         complex<double>(0, 1) * std::sin(0.5 * theta) * p;
}

/// Column-stacking superoperator of conjugation by U: vec(U rho U+) =
/// (conj(U) (x) U) vec(rho).
inline MatrixXcd superop(const MatrixXcd& u) { return kron(u.conjugate(), u); }

/// Plain composite trapezoid rule.
inline double trapezoid(const std::function<double(double)>& f, double a, double b, long n) {
  double sum = 0.5 * (f(a) + f(b));
  const double h = (b - a) / static_cast<double>(n);
  for (long i = 1; i < n; ++i) sum += f(a + h * static_cast<double>(i));
  return sum * h;
}

// Regularized incomplete gamma Q(a, x) (upper), series/continued-fraction
// split at x = a + 1.
inline double gamma_q(double a, double x) {
  if (x < 0 || a <= 0) throw std::invalid_argument("gamma_q: bad arguments");
  if (x == 0) return 1.0;
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a, del = 1.0 / a, sum = del;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return 1.0 - sum * std::exp(-x + a * std::log(x) - gln);
  }
  double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - gln) * h;
}

/// Survival function of the chi-square distribution with k degrees of freedom.
inline double chi2_sf(double x, int k) { return gamma_q(0.5 * k, 0.5 * x); }

inline double normal_cdf(double x, double mu, double sigma) {
  return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0)));
}

/// Chi-square goodness-of-fit p-value for samples against a continuous model
/// CDF, using equal-width bins between the sample extremes and merging bins
/// with expected count below 5 into their left neighbor.
inline double chi2_gof_pvalue(const std::vector<double>& samples,
                              const std::function<double(double)>& cdf, int n_bins) {
  double lo = samples.front(), hi = samples.front();
  for (double s : samples) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  hi += 1e-9 * (hi - lo + 1.0);
  const double width = (hi - lo) / n_bins;
  std::vector<double> observed(n_bins, 0.0), expected(n_bins, 0.0);
  for (double s : samples) {
    int b = static_cast<int>((s - lo) / width);
    b = std::min(std::max(b, 0), n_bins - 1);
    observed[b] += 1.0;
  }
  const double n = static_cast<double>(samples.size());
  for (int b = 0; b < n_bins; ++b) {
    const double e0 = cdf(lo + width * b), e1 = cdf(lo + width * (b + 1));
    expected[b] = n * (e1 - e0);
  }
  // Merge small-expectation bins left to right.
  std::vector<double> obs_m, exp_m;
  double o_acc = 0.0, e_acc = 0.0;
  for (int b = 0; b < n_bins; ++b) {
    o_acc += observed[b];
    e_acc += expected[b];
    if (e_acc >= 5.0) {
      obs_m.push_back(o_acc);
      exp_m.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (e_acc > 0 && !exp_m.empty()) {
    obs_m.back() += o_acc;
    exp_m.back() += e_acc;
  }
  double chi2 = 0.0;
  for (std::size_t b = 0; b < obs_m.size(); ++b) {
    const double d = obs_m[b] - exp_m[b];
    chi2 += d * d / exp_m[b];
  }
  const int dof = static_cast<int>(obs_m.size()) - 1;
  if (dof < 1) return 1.0;
  return chi2_sf(chi2, dof);
}

/// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracles
