#include "tepai/hamiltonian.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "tepai/rng.hpp"
#include "support/oracles.hpp"

using namespace tepai;

namespace {

Hamiltonian two_term_constant() {
  return Hamiltonian(1, {{PauliString::parse("Z0", 1), CoefficientSchedule::constant(1.0)},
                         {PauliString::parse("X0", 1), CoefficientSchedule::constant(-2.0)}});
}

std::filesystem::path write_temp(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << body;
  return path;
}

}  // namespace

TEST(Schedule, ConstantAndHarmonic) {
  const auto c = CoefficientSchedule::constant(-2.5);
  EXPECT_EQ(c(0.0), -2.5);
  EXPECT_EQ(c(17.3), -2.5);
  const auto h = CoefficientSchedule::harmonic(2.0, M_PI);
  EXPECT_NEAR(h(0.0), 2.0, 1e-15);
  EXPECT_NEAR(h(1.0), -2.0, 1e-15);
  EXPECT_NEAR(h(0.5), 0.0, 1e-15);
}

TEST(Schedule, TabulatedInterpolatesLinearly) {
  const auto t = CoefficientSchedule::tabulated({0.0, 1.0, 3.0}, {0.0, 2.0, -2.0});
  EXPECT_NEAR(t(0.5), 1.0, 1e-15);
  EXPECT_NEAR(t(2.0), 0.0, 1e-15);
  EXPECT_NEAR(t(3.0), -2.0, 1e-15);
  EXPECT_THROW(t(3.5), ValidationError);
  EXPECT_THROW(CoefficientSchedule::tabulated({0.0, 0.0}, {1.0, 2.0}), ValidationError);
  EXPECT_THROW(CoefficientSchedule::tabulated({0.0}, {1.0}), ValidationError);
}

TEST(Hamiltonian, RejectsBadConstructions) {
  EXPECT_THROW(Hamiltonian(2, {}), ValidationError);
  EXPECT_THROW(
      Hamiltonian(2, {{PauliString::parse("X0", 1), CoefficientSchedule::constant(1.0)}}),
      ValidationError);
  EXPECT_THROW(
      Hamiltonian(2, {{PauliString::parse("X0", 2), CoefficientSchedule::constant(1.0)},
                      {PauliString::parse("X0", 2), CoefficientSchedule::constant(2.0)}}),
      ValidationError);
}

TEST(L1NormAvg, ConstantCoefficientsReduceToL1) {
  const Hamiltonian h = two_term_constant();
  EXPECT_DOUBLE_EQ(l1_norm_avg(h, 1.0), 3.0);
  EXPECT_DOUBLE_EQ(l1_norm_avg(h, 0.37), 3.0);
  EXPECT_DOUBLE_EQ(l1_norm_avg(h, 12.0), 3.0);
}

TEST(L1NormAvg, HarmonicAgainstTrapezoidOracle) {
  // Single term cos(99 pi t) over [0, 1]: 99 full half-periods, average 2/pi.
  const Hamiltonian h(1, {{PauliString::parse("Z0", 1),
                           CoefficientSchedule::harmonic(1.0, 99.0 * M_PI)}});
  const double value = l1_norm_avg(h, 1.0);
  EXPECT_NEAR(value, 2.0 / M_PI, 1e-9);
  const double oracle =
      oracles::trapezoid([](double t) { return std::abs(std::cos(99.0 * M_PI * t)); }, 0.0, 1.0,
                         10'000'000);
  EXPECT_NEAR(value, oracle, 1e-8);
}

TEST(L1NormAvg, PartialPeriodAgainstTrapezoidOracle) {
  // T that is not a multiple of the half-period exercises the kink splitting.
  const Hamiltonian h(1, {{PauliString::parse("X0", 1),
                           CoefficientSchedule::harmonic(1.7, 99.0 * M_PI)},
                          {PauliString::parse("Z0", 1), CoefficientSchedule::constant(0.4)}});
  const double T = 0.3777;
  const double value = l1_norm_avg(h, T);
  const double oracle = oracles::trapezoid(
      [](double t) { return 1.7 * std::abs(std::cos(99.0 * M_PI * t)) + 0.4; }, 0.0, T,
      10'000'000) / T;
  EXPECT_NEAR(value, oracle, 1e-7 * value);
}

TEST(L1NormAvg, InvariantUnderReorderingAndScaling) {
  const auto ring = build_spin_ring(5, 7);
  std::vector<HamiltonianTerm> reversed(ring.terms().rbegin(), ring.terms().rend());
  const Hamiltonian flipped(5, std::move(reversed));
  EXPECT_NEAR(l1_norm_avg(ring, 1.0), l1_norm_avg(flipped, 1.0), 1e-12);

  std::vector<HamiltonianTerm> scaled_terms;
  for (const auto& t : ring.terms()) {
    if (t.coeff.is_constant()) {
      scaled_terms.push_back({t.op, CoefficientSchedule::constant(3.0 * t.coeff.constant_value())});
    } else {
      scaled_terms.push_back({t.op, CoefficientSchedule::harmonic(3.0, 99.0 * M_PI)});
    }
  }
  const Hamiltonian scaled(5, std::move(scaled_terms));
  EXPECT_NEAR(l1_norm_avg(scaled, 1.0), 3.0 * l1_norm_avg(ring, 1.0), 1e-8);
}

TEST(SpinRing, TermCountAndClosure) {
  EXPECT_EQ(build_spin_ring(14, 1).n_terms(), 56);
  EXPECT_EQ(build_spin_ring(100, 1).n_terms(), 400);
  const auto ring = build_spin_ring(5, 1);
  EXPECT_EQ(ring.n_terms(), 20);
  bool found_closure = false;
  for (const auto& term : ring.terms()) {
    if (term.op.str() == "X0 X4") found_closure = true;
  }
  EXPECT_TRUE(found_closure) << "ring closure must couple qubit 4 back to qubit 0";
}

TEST(SpinRing, BitReproducibleAndSeedSensitive) {
  const auto a = build_spin_ring(8, 42), b = build_spin_ring(8, 42), c = build_spin_ring(8, 43);
  for (int k = 0; k < 8; ++k) {
    EXPECT_EQ(a.terms()[k].coeff.constant_value(), b.terms()[k].coeff.constant_value());
  }
  bool any_differs = false;
  for (int k = 0; k < 8; ++k) {
    if (a.terms()[k].coeff.constant_value() != c.terms()[k].coeff.constant_value()) {
      any_differs = true;
    }
  }
  EXPECT_TRUE(any_differs);
  const auto& label = a.label();
  EXPECT_NE(label.find("seed=42"), std::string::npos);
}

TEST(SpinRing, AveragedNormMatchesClosedForm) {
  // Per ring: sum_k |w_k| from the drawn fields plus 3n coupling terms whose
  // |cos| averages 2/pi over integer times.
  const int n = 14;
  const auto ring = build_spin_ring(n, 2024);
  double omega_abs = 0.0;
  for (int k = 0; k < n; ++k) omega_abs += std::abs(ring.terms()[k].coeff.constant_value());
  const double expected = omega_abs + 3.0 * n * (2.0 / M_PI);
  const double value = l1_norm_avg(ring, 1.0);
  EXPECT_NEAR(value, expected, 1e-8 * expected);
  // Scale of the 14-qubit benchmark numbers.
  EXPECT_GT(value, 26.0);
  EXPECT_LT(value, 41.0);
}

TEST(CommutatorNorm, AllCommutingIsZero) {
  const Hamiltonian h(2, {{PauliString::parse("Z0", 2), CoefficientSchedule::constant(1.0)},
                          {PauliString::parse("Z1", 2), CoefficientSchedule::constant(-0.5)},
                          {PauliString::parse("Z0 Z1", 2), CoefficientSchedule::constant(2.0)}});
  EXPECT_DOUBLE_EQ(commutator_norm_sq(h, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(commutator_pair_bound(h, 0.0), 0.0);
}

TEST(CommutatorNorm, TwoTermDenseExample) {
  // || [Z0, X0] || = || 2i Y0 || = 2.
  const Hamiltonian h(1, {{PauliString::parse("X0", 1), CoefficientSchedule::constant(1.0)},
                          {PauliString::parse("Z0", 1), CoefficientSchedule::constant(1.0)}});
  EXPECT_NEAR(commutator_norm_sq(h, 0.0), 2.0, 1e-12);
}

TEST(CommutatorNorm, DenseBoundedByPairBound) {
  Rng rng(5150);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<HamiltonianTerm> terms;
    for (int k = 0; k < 6; ++k) {
      std::vector<PauliString::Factor> factors;
      for (int q = 0; q < 3; ++q) {
        const auto a = rng.below(4);
        if (a != 0) factors.emplace_back(q, static_cast<Axis>(a));
      }
      PauliString op(3, std::move(factors));
      bool dup = false;
      for (const auto& t : terms) {
        if (t.op == op) dup = true;
      }
      if (dup || op.is_identity()) continue;
      terms.push_back({std::move(op), CoefficientSchedule::constant(2.0 * rng.uniform() - 1.0)});
    }
    if (terms.size() < 2) continue;
    const Hamiltonian h(3, std::move(terms));
    const double dense = commutator_norm_sq(h, 0.0);
    const double bound = commutator_pair_bound(h, 0.0);
    EXPECT_LE(dense, bound + 1e-9);
  }
}

TEST(CommutatorNorm, SpinRingPairBoundAtMostTwentyN) {
  // At t = 0 the couplings sit at |J| = 1, the worst case of the 20n budget.
  for (int n : {14, 100}) {
    const auto ring = build_spin_ring(n, 99);
    const double bound = commutator_norm_sq(ring, 0.0, {/*dense_limit=*/0, 50'000'000});
    EXPECT_LE(bound, 20.0 * n + 1e-9);
    EXPECT_GT(bound, 12.0 * n - 1e-9);  // coupling-coupling part alone contributes 12n
  }
}

TEST(TermFile, ParsesSimpleFile) {
  const auto path = write_temp("tepai_terms_ok.txt",
                               "# two-term test Hamiltonian\n"
                               "0.5 Z0\n"
                               "-0.25 X0 X1\n");
  const Hamiltonian h = load_term_file(path);
  EXPECT_EQ(h.n_terms(), 2);
  EXPECT_EQ(h.n_qubits(), 2);
  EXPECT_DOUBLE_EQ(h.terms()[0].coeff.constant_value(), 0.5);
  EXPECT_EQ(h.terms()[1].op.str(), "X0 X1");
  EXPECT_TRUE(h.time_independent());
}

TEST(TermFile, ErrorsCarryLineNumbers) {
  const auto bad_coeff = write_temp("tepai_terms_badcoeff.txt", "0.5 Z0\nnope X0\n");
  try {
    load_term_file(bad_coeff);
    FAIL() << "expected a parse error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }

  const auto dup = write_temp("tepai_terms_dup.txt", "0.5 Z0\n0.25 Z0\n");
  try {
    load_term_file(dup);
    FAIL() << "expected a duplicate-term error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("duplicate"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(TermFile, EmptyFileIsAnError) {
  const auto path = write_temp("tepai_terms_empty.txt", "# nothing here\n\n");
  EXPECT_THROW(load_term_file(path), ValidationError);
  EXPECT_THROW(load_term_file("/nonexistent/terms.txt"), ValidationError);
}

TEST(TermFile, BundledSampleLoads) {
  const auto path = std::filesystem::path(TEPAI_SOURCE_DIR) / "data" / "sample_12q.txt";
  const Hamiltonian h = load_term_file(path);
  EXPECT_EQ(h.n_qubits(), 12);
  EXPECT_GE(h.n_terms(), 30);
  EXPECT_TRUE(h.time_independent());
}
