#include <gtest/gtest.h>

#include <numbers>

#include "support/oracles.hpp"

using namespace ascvqe;

namespace {

constexpr double kPi = std::numbers::pi;

FermionExcitation ex(std::vector<int> occ, std::vector<int> vir) { return {std::move(occ), std::move(vir)}; }

PauliSum term(std::size_t n, std::uint64_t x, std::uint64_t z, cplx c) {
  PauliSum s(n);
  s.add({x, z}, c);
  return s;
}

double max_diff(const StateVector& a, const StateVector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

AnsatzState random_ansatz(std::mt19937_64& rng, const std::vector<FermionExcitation>& pool, std::size_t n_so,
                          std::size_t n_elec, int n_factors) {
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  AnsatzState a = empty_ansatz(n_so, n_elec);
  for (int k = 0; k < n_factors; ++k) a.factors.push_back({pool[pick(rng)], angle(rng), Role::principal});
  return a;
}

}  // namespace

TEST(HfReference, BitConvention) {
  const StateVector s = hf_reference(4, 2);
  EXPECT_EQ(s[3], cplx(1.0));
  EXPECT_NEAR(s.norm(), 1.0, 1e-15);
  EXPECT_EQ(hf_reference(4, 0)[0], cplx(1.0));
  EXPECT_THROW(hf_reference(2, 3), DimensionError);
}

TEST(HfReference, NumberExpectationEqualsElectronCount) {
  for (std::size_t n_elec = 0; n_elec <= 6; ++n_elec)
    EXPECT_NEAR(expectation(hf_reference(6, n_elec), number_operator(6)), static_cast<double>(n_elec), 1e-14);
}

TEST(ApplyPauliSum, IdentityLeavesStateUnchanged) {
  std::mt19937_64 rng(1);
  const StateVector s = oracle::random_state(rng, 3);
  PauliSum id(3);
  id.add({0, 0}, 1.0);
  EXPECT_LT(max_diff(apply_pauli_sum(s, id), s), 1e-15);
}

TEST(ApplyPauliSum, XOnQubitZeroFlipsLowestBit) {
  const StateVector out = apply_pauli_sum(StateVector::basis(2, 0), term(2, 1, 0, 1.0));
  EXPECT_EQ(out[1], cplx(1.0));
  EXPECT_EQ(out[0], cplx(0.0));
}

TEST(ApplyPauliSum, MatchesDenseOracleOnRandomInputs) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const PauliSum a = oracle::random_sum(rng, 4, 12);
    const StateVector s = oracle::random_state(rng, 4);
    const oracle::Vec expect = dense_matrix(a) * oracle::to_eigen(s);
    EXPECT_LT(oracle::max_abs(oracle::to_eigen(apply_pauli_sum(s, a)) - expect), 1e-12);
  }
}

TEST(ApplyPauliSum, DimensionMismatch) {
  EXPECT_THROW(apply_pauli_sum(StateVector(3), PauliSum(4)), DimensionError);
}

TEST(Exponential, ZeroAngleIsIdentity) {
  std::mt19937_64 rng(3);
  const StateVector s = hf_reference(4, 2);
  const PauliSum k = jordan_wigner_generator(ex({0, 1}, {2, 3}), 4);
  EXPECT_LT(max_diff(apply_excitation_exponential(s, k, 0.0), s), 1e-15);
}

TEST(Exponential, FullTurnIsPeriodic) {
  std::mt19937_64 rng(4);
  const StateVector s = oracle::random_state(rng, 4);
  const PauliSum k = jordan_wigner_generator(ex({0, 1}, {2, 3}), 4);
  EXPECT_LT(max_diff(apply_excitation_exponential(s, k, 2 * kPi), s), 1e-10);
}

TEST(Exponential, H2DoubleMatchesDenseExpm) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(-2 * kPi, 2 * kPi);
  const FermionExcitation x = ex({0, 1}, {2, 3});
  const PauliSum k = jordan_wigner_generator(x, 4);
  const oracle::Mat kappa = oracle::dense_kappa(x, 4);
  for (int trial = 0; trial < 10; ++trial) {
    const double theta = angle(rng);
    const StateVector s = oracle::random_state(rng, 4);
    const oracle::Vec expect = oracle::expm(theta * kappa) * oracle::to_eigen(s);
    const StateVector got = apply_excitation_exponential(s, k, theta);
    EXPECT_LT(oracle::max_abs(oracle::to_eigen(got) - expect), 1e-10);
    EXPECT_NEAR(got.norm(), 1.0, 1e-10);
  }
}

TEST(Exponential, EveryRankMatchesDenseExpmOnSixQubits) {
  std::mt19937_64 rng(6);
  const auto pool = excitation_pool(6, 3, {1, 2, 3});
  ASSERT_FALSE(pool.empty());
  for (const auto& x : pool) {
    const StateVector s = oracle::random_state(rng, 6);
    const double theta = 0.37 + 0.1 * x.rank();
    const oracle::Vec expect = oracle::expm(theta * oracle::dense_kappa(x, 6)) * oracle::to_eigen(s);
    const StateVector got = apply_excitation_exponential(s, jordan_wigner_generator(x, 6), theta);
    EXPECT_LT(oracle::max_abs(oracle::to_eigen(got) - expect), 1e-10) << x.label();
  }
}

TEST(Exponential, RejectsGeneratorViolatingCubicIdentity) {
  const PauliSum bad = term(1, 0, 1, cplx(0.0, 2.0));
  EXPECT_THROW(apply_excitation_exponential(StateVector::basis(1, 0), bad, 0.3), UnsupportedGeneratorError);
}

TEST(CompiledGenerator, PoolGeneratorsArePaired) {
  oracle::Fixture f("h4_1.75.fcidump");
  for (const auto& x : excitation_pool(8, 4, {1, 2, 3, 4})) EXPECT_TRUE(f.problem().generator(x).paired()) << x.label();
}

TEST(CompiledGenerator, RotationMatchesPauliRoute) {
  oracle::Fixture f("h4_1.75.fcidump");
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  // Random state restricted to the sector so both routes see the same vector.
  StateVector psi(8);
  std::normal_distribution<double> g;
  for (auto b : f.problem().sector().states) psi[b] = {g(rng), g(rng)};
  const double n = psi.norm();
  for (auto& a : psi.amplitudes) a /= n;

  for (const auto& x : excitation_pool(8, 4, {1, 2, 3, 4})) {
    const double theta = angle(rng);
    const ExcitationGenerator& gen = f.problem().generator(x);
    StateVector fast = psi;
    gen.rotate(fast, theta);
    const PauliSum k = jordan_wigner_generator(x, 8);
    EXPECT_LT(max_diff(fast, apply_excitation_exponential(psi, k, theta)), 1e-12) << x.label();
    EXPECT_LT(max_diff(gen.apply(psi), apply_pauli_sum(psi, k)), 1e-12) << x.label();
    const StateVector lhs = apply_pauli_sum(psi, f.h());
    EXPECT_NEAR(gen.real_overlap(lhs, psi), inner(lhs, apply_pauli_sum(psi, k)).real(), 1e-12) << x.label();
  }
}

TEST(PrepareState, EmptyAndZeroAnsatzGiveReference) {
  AnsatzState a = empty_ansatz(6, 2);
  const StateVector ref = hf_reference(6, 2);
  EXPECT_LT(max_diff(prepare_state(a), ref), 1e-15);
  for (const auto& x : excitation_pool(6, 2, {1, 2})) a.factors.push_back({x, 0.0, Role::principal});
  EXPECT_LT(max_diff(prepare_state(a), ref), 1e-15);
}

TEST(PrepareState, SingleFactorMatchesDenseConstruction) {
  const FermionExcitation x = ex({1}, {3});
  AnsatzState a = empty_ansatz(4, 2);
  a.factors.push_back({x, 0.81, Role::principal});
  const oracle::Vec expect = oracle::expm(0.81 * oracle::dense_kappa(x, 4)) * oracle::to_eigen(hf_reference(4, 2));
  EXPECT_LT(oracle::max_abs(oracle::to_eigen(prepare_state(a)) - expect), 1e-10);
}

TEST(PrepareState, FactorOrderIsApplicationOrder) {
  const FermionExcitation x = ex({1}, {2}), y = ex({0, 1}, {2, 3});
  AnsatzState a = empty_ansatz(4, 2);
  a.factors = {{x, 0.4, Role::principal}, {y, -0.9, Role::principal}};
  const oracle::Mat u = oracle::expm(-0.9 * oracle::dense_kappa(y, 4)) * oracle::expm(0.4 * oracle::dense_kappa(x, 4));
  EXPECT_LT(oracle::max_abs(oracle::to_eigen(prepare_state(a)) - u * oracle::to_eigen(hf_reference(4, 2))), 1e-10);
}

TEST(PrepareState, CompiledRouteAgrees) {
  oracle::Fixture f("lih_1.33.fcidump");
  std::mt19937_64 rng(8);
  const auto pool = excitation_pool(static_cast<int>(f.n_so()), static_cast<int>(f.n_elec()), {1, 2});
  for (int trial = 0; trial < 5; ++trial) {
    const AnsatzState a = random_ansatz(rng, pool, f.n_so(), f.n_elec(), 12);
    EXPECT_LT(max_diff(prepare_state(a, f.problem()), prepare_state(a)), 1e-12);
  }
}

TEST(Expectation, ScaledIdentity) {
  std::mt19937_64 rng(9);
  PauliSum c(3);
  c.add({0, 0}, -2.75);
  EXPECT_NEAR(expectation(oracle::random_state(rng, 3), c), -2.75, 1e-14);
}

TEST(Expectation, ZOnZeroIsOne) {
  EXPECT_DOUBLE_EQ(expectation(StateVector::basis(1, 0), term(1, 0, 1, 1.0)), 1.0);
  EXPECT_DOUBLE_EQ(expectation(StateVector::basis(1, 1), term(1, 0, 1, 1.0)), -1.0);
}

TEST(Expectation, HartreeFockEnergyFromIntegrals) {
  for (const char* name : {"h2_0.74.fcidump", "h4_1.50.fcidump", "lih_1.33.fcidump"}) {
    oracle::Fixture f(name);
    const MolecularIntegrals& m = f.sys.integrals;
    const int nocc = m.n_electrons / 2;
    double e = m.e_core;
    for (int i = 0; i < nocc; ++i) {
      e += 2.0 * m.h(i, i);
      for (int j = 0; j < nocc; ++j) e += 2.0 * m.g(i, i, j, j) - m.g(i, j, j, i);
    }
    EXPECT_NEAR(expectation(hf_reference(f.n_so(), f.n_elec()), f.h()), e, 1e-10) << name;
  }
}

TEST(Expectation, NonHermitianObservableRejected) {
  const StateVector plus = [] {
    StateVector s(1);
    s[0] = s[1] = 1.0 / std::sqrt(2.0);
    return s;
  }();
  EXPECT_THROW(expectation(plus, term(1, 1, 0, cplx(0.0, 1.0))), NonHermitianObservableError);
}

TEST(CnotEstimate, TemplateArithmetic) {
  EXPECT_EQ(cnot_estimate(empty_ansatz(8, 4)), 0u);
  AnsatzState a = empty_ansatz(2, 1);
  a.factors.push_back({ex({0}, {1}), 0.1, Role::principal});  // X0Y1 and Y0X1
  EXPECT_EQ(cnot_estimate(a), 4u);
  AnsatzState b = empty_ansatz(8, 4);
  b.factors.push_back({ex({2, 3}, {4, 5}), 0.1, Role::principal});
  EXPECT_EQ(jordan_wigner_generator(b.factors[0].excitation, 8).size(), 8u);
  EXPECT_EQ(cnot_estimate(b), 48u);
}

TEST(CnotEstimate, IndependentOfParameters) {
  AnsatzState a = empty_ansatz(8, 4);
  a.factors.push_back({ex({2, 3}, {4, 5}), 0.1, Role::principal});
  const std::size_t c = cnot_estimate(a);
  a.factors[0].theta = 0.0;
  EXPECT_EQ(cnot_estimate(a), c);
}

TEST(SimulatorProperties, UnitarityNumberAndSpinConservation) {
  std::mt19937_64 rng(10);
  for (const char* name : {"h4_1.75.fcidump", "lih_1.33.fcidump"}) {
    oracle::Fixture f(name);
    const auto pool = excitation_pool(static_cast<int>(f.n_so()), static_cast<int>(f.n_elec()), {1, 2, 3, 4});
    const PauliSum n_op = number_operator(f.n_so());
    const PauliSum sz = sz_operator(f.n_so());
    const double sz0 = expectation(hf_reference(f.n_so(), f.n_elec()), sz);
    for (int trial = 0; trial < 10; ++trial) {
      const StateVector s = prepare_state(random_ansatz(rng, pool, f.n_so(), f.n_elec(), 8), f.problem());
      EXPECT_NEAR(s.norm(), 1.0, 1e-10);
      EXPECT_NEAR(expectation(s, n_op), static_cast<double>(f.n_elec()), 1e-10);
      EXPECT_NEAR(expectation(s, sz), sz0, 1e-10);
    }
  }
}

TEST(SimulatorProperties, FactorInverse) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (const auto& x : excitation_pool(6, 2, {1, 2})) {
    const StateVector s = oracle::random_state(rng, 6);
    const PauliSum k = jordan_wigner_generator(x, 6);
    const double t = angle(rng);
    EXPECT_LT(max_diff(apply_excitation_exponential(apply_excitation_exponential(s, k, t), k, -t), s), 1e-10);
  }
}

TEST(Amplitudes, BinaryDumpIsLittleEndianPairs) {
  std::mt19937_64 rng(12);
  const StateVector s = oracle::random_state(rng, 2);
  const std::string path = testing::TempDir() + "/amps.bin";
  write_amplitudes(s, path);
  std::ifstream in(path, std::ios::binary);
  for (std::size_t i = 0; i < s.dim(); ++i) {
    double re = 0, im = 0;
    in.read(reinterpret_cast<char*>(&re), 8);
    in.read(reinterpret_cast<char*>(&im), 8);
    EXPECT_EQ(re, s[i].real());
    EXPECT_EQ(im, s[i].imag());
  }
}
