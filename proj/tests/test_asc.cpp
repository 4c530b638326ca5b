#include <gtest/gtest.h>

#include <numbers>

#include "support/oracles.hpp"

using namespace ascvqe;

namespace {

FermionExcitation ex(std::vector<int> occ, std::vector<int> vir) { return {std::move(occ), std::move(vir)}; }

std::vector<FermionExcitation> pool_of(const oracle::Fixture& f, std::set<int> ranks) {
  return excitation_pool(static_cast<int>(f.n_so()), static_cast<int>(f.n_elec()), ranks);
}

// Short ADAPT run so the principal state is not an eigenstate.
AdaptResult short_adapt(const oracle::Fixture& f, double epsilon = 2e-2) {
  SelectionConfig cfg;
  cfg.epsilon = epsilon;
  return adapt_vqe(f.problem(), pool_of(f, {1, 2}), cfg);
}

}  // namespace

TEST(Mapping, EmptyPoolGivesNoRows) {
  oracle::Fixture f("h2_0.74.fcidump");
  EXPECT_TRUE(map_auxiliary_parameters(hf_reference(4, 2), {}, f.problem()).empty());
  const auto rep = asc_energy(-1.0, {});
  EXPECT_EQ(rep.e_asc, -1.0);
  EXPECT_EQ(rep.commutator_evals, 0u);
}

TEST(Mapping, EigenstateIsFixedPoint) {
  for (const char* name : {"h2_0.74.fcidump", "h4_1.75.fcidump", "lih_1.33.fcidump"}) {
    oracle::Fixture f(name);
    const auto gs = ground_energy(f.h(), static_cast<int>(f.n_elec()), 0);
    const auto rows = map_auxiliary_parameters(gs.state, pool_of(f, {1, 2, 3, 4}), f.problem());
    for (const auto& r : rows) EXPECT_LT(std::abs(r.theta), 1e-6) << name << " " << r.excitation.label();
    const auto rep = asc_energy(gs.state, rows, f.problem());
    EXPECT_LT(std::abs(rep.e_asc - gs.energy), 1e-6) << name;
  }
}

TEST(Mapping, H2NewtonStepMatchesDenseScan) {
  oracle::Fixture f("h2_0.74.fcidump");
  const FermionExcitation x = ex({0, 1}, {2, 3});
  const oracle::Mat h = oracle::dense_hamiltonian(f.sys.spin, f.sys.integrals.e_core);
  const oracle::Mat k = oracle::dense_kappa(x, 4);
  const oracle::Vec ref = oracle::to_eigen(hf_reference(4, 2));
  auto e = [&](double t) {
    const oracle::Vec v = oracle::expm(t * k) * ref;
    return v.dot(h * v).real();
  };
  // E(t) is a trigonometric polynomial of degree 2; fit it exactly and differentiate at 0.
  Eigen::MatrixXd a(24, 5);
  Eigen::VectorXd b(24);
  for (int i = 0; i < 24; ++i) {
    const double t = 2 * std::numbers::pi * i / 24.0;
    a.row(i) << 1.0, std::cos(t), std::sin(t), std::cos(2 * t), std::sin(2 * t);
    b[i] = e(t);
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
  ASSERT_LT((a * c - b).cwiseAbs().maxCoeff(), 1e-12);
  const double d1 = c[2] + 2 * c[4];
  const double d2 = -c[1] - 4 * c[3];
  const std::vector<FermionExcitation> one{x};
  const auto rows = map_auxiliary_parameters(hf_reference(4, 2), one, f.problem());
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(rows[0].numerator, d1, 1e-10);
  EXPECT_NEAR(rows[0].denominator, d2, 1e-10);
  EXPECT_NEAR(rows[0].theta, -d1 / d2, 1e-10);
}

TEST(Mapping, CompiledMatchesSymbolic) {
  oracle::Fixture f("h4_1.75.fcidump");
  const auto run = short_adapt(f);
  const StateVector phi = prepare_state(run.ansatz, f.problem());
  const auto aux = build_auxiliary_pool(pool_of(f, {1, 2, 3, 4}), run.ansatz);
  const auto fast = map_auxiliary_parameters(phi, aux, f.problem(), nullptr, 4);
  const auto sym = map_auxiliary_parameters(phi, aux, f.h());
  ASSERT_EQ(fast.size(), sym.size());
  for (std::size_t i = 0; i < fast.size(); ++i) {
    EXPECT_EQ(fast[i].excitation, sym[i].excitation);
    EXPECT_NEAR(fast[i].numerator, sym[i].numerator, 1e-10);
    EXPECT_NEAR(fast[i].denominator, sym[i].denominator, 1e-10);
    EXPECT_EQ(fast[i].degenerate, sym[i].degenerate);
  }
}

TEST(Mapping, DegenerateRowsFlaggedWithZeroTheta) {
  oracle::Fixture f("h4_1.75.fcidump");
  // Both orbitals empty in the reference: the generator annihilates it.
  const std::vector<FermionExcitation> broken{ex({4}, {6})};
  const auto rows = map_auxiliary_parameters(hf_reference(8, 4), broken, f.h());
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(rows[0].degenerate);
  EXPECT_EQ(rows[0].theta, 0.0);
}

TEST(AscEnergy, ZeroThetaGivesPrincipalEnergy) {
  std::vector<AuxiliaryRow> rows(3);
  rows[0].numerator = 0.2;
  rows[0].denominator = 1.5;
  rows[1].numerator = -0.1;
  rows[1].denominator = 0.7;
  const auto rep = asc_energy(-7.5, rows);
  EXPECT_EQ(rep.e_asc, -7.5);
}

TEST(AscEnergy, ClosedFormAndStationarity) {
  for (const char* name : {"h4_1.75.fcidump", "lih_4.00.fcidump", "beh2_2.00.fcidump"}) {
    oracle::Fixture f(name);
    const auto run = short_adapt(f, name[0] == 'b' ? 5e-2 : 2e-2);
    const StateVector phi = prepare_state(run.ansatz, f.problem());
    const auto aux = build_auxiliary_pool(pool_of(f, {1, 2, 3, 4}), run.ansatz);
    const auto rep = asc_energy(phi, map_auxiliary_parameters(phi, aux, f.problem()), f.problem());
    double closed = 0.0;
    for (const auto& r : rep.rows) {
      if (r.degenerate) continue;
      closed -= 0.5 * r.numerator * r.numerator / r.denominator;
      EXPECT_NEAR(r.numerator + r.theta * r.denominator, 0.0, 1e-12);
      EXPECT_NEAR(r.contribution, r.theta * r.numerator + 0.5 * r.theta * r.theta * r.denominator, 1e-15);
      if (r.denominator > 0.0) EXPECT_LE(r.contribution, 0.0);
    }
    EXPECT_NEAR(rep.e_asc - rep.e_p, closed, 1e-10) << name;
    EXPECT_NEAR(rep.e_p, run.energy, 1e-10) << name;
    EXPECT_EQ(rep.commutator_evals, 2 * aux.size());
    EXPECT_EQ(rep.fresh_evals, 2 * aux.size());
  }
}

TEST(AscEnergy, SafeguardDropsEnergyRaisingRows) {
  std::vector<AuxiliaryRow> rows(2);
  rows[0] = {ex({0}, {2}), 0.2, 2.0, -0.1, 0.0, false, false, false};
  rows[1] = {ex({1}, {3}), 0.2, -2.0, 0.1, 0.0, false, false, false};
  const auto faithful = asc_energy(-1.0, rows);
  const auto guarded = asc_energy(-1.0, rows, true);
  EXPECT_NEAR(faithful.e_asc, -1.0 - 0.01 + 0.01, 1e-15);
  EXPECT_NEAR(guarded.e_asc, -1.01, 1e-15);
  EXPECT_FALSE(guarded.rows[0].dropped);
  EXPECT_TRUE(guarded.rows[1].dropped);
  EXPECT_GT(guarded.rows[1].contribution, 0.0);
}

TEST(AscEnergy, ReusedNumeratorsEqualFreshOnes) {
  oracle::Fixture f("h4_1.75.fcidump");
  const auto sd = pool_of(f, {1, 2});
  const auto run = short_adapt(f);
  std::map<FermionExcitation, double> cached;
  for (std::size_t i = 0; i < sd.size(); ++i) cached.emplace(sd[i], run.trace.final_gradients[i]);
  const StateVector phi = prepare_state(run.ansatz, f.problem());
  const auto aux = build_auxiliary_pool(pool_of(f, {1, 2, 3, 4}), run.ansatz);
  const auto reused = map_auxiliary_parameters(phi, aux, f.problem(), &cached);
  const auto fresh = map_auxiliary_parameters(phi, aux, f.problem());
  std::size_t n_reused = 0, n_sd = 0;
  for (std::size_t i = 0; i < aux.size(); ++i) {
    EXPECT_NEAR(reused[i].numerator, fresh[i].numerator, 1e-12);
    EXPECT_EQ(reused[i].reused, aux[i].rank() <= 2);
    n_reused += reused[i].reused;
    n_sd += aux[i].rank() <= 2;
  }
  EXPECT_EQ(n_reused, n_sd);
  const auto rep = asc_energy(phi, reused, f.problem());
  EXPECT_EQ(rep.reused, n_sd);
  EXPECT_EQ(rep.fresh_evals, 2 * aux.size() - n_sd);
  EXPECT_LE(rep.fresh_evals, 2 * rep.n_aux());
}

TEST(Overhead, Counts) {
  EXPECT_EQ(overhead_report(asc_energy(0.0, {}), 0).fresh, 0u);
  const auto ten = asc_energy(0.0, std::vector<AuxiliaryRow>(10));
  const auto c = overhead_report(ten, 0);
  EXPECT_EQ(c.bound, 20u);
  EXPECT_EQ(c.fresh, 20u);
  EXPECT_EQ(overhead_report(ten, 4).fresh, 16u);
  EXPECT_EQ(overhead_report(ten, 40).fresh, 10u);
}

TEST(AuxiliaryPool, SetDifference) {
  oracle::Fixture f("h4_1.75.fcidump");
  const auto full = pool_of(f, {1, 2, 3, 4});
  EXPECT_EQ(build_auxiliary_pool(full, empty_ansatz(8, 4)), full);

  AnsatzState everything = empty_ansatz(8, 4);
  for (const auto& x : full) everything.factors.push_back({x, 0.1, Role::principal});
  EXPECT_TRUE(build_auxiliary_pool(full, everything).empty());
  EXPECT_EQ(build_auxiliary_pool(full, everything, true), full);

  AnsatzState some = empty_ansatz(8, 4);
  for (std::size_t i : {0u, 3u, 3u, 20u}) some.factors.push_back({full[i], 0.1, Role::principal});
  const auto aux = build_auxiliary_pool(full, some);
  EXPECT_EQ(aux.size(), full.size() - 3);
  for (const auto& x : aux) EXPECT_NE(x, full[3]);
}

TEST(AuxiliaryPool, EveryPrincipalGradientBelowThresholdAtTermination) {
  oracle::Fixture f("h4_1.75.fcidump");
  SelectionConfig cfg;
  cfg.epsilon = 1e-3;
  const auto run = adapt_vqe(f.problem(), pool_of(f, {1, 2}), cfg);
  const StateVector phi = prepare_state(run.ansatz, f.problem());
  std::vector<FermionExcitation> principal;
  for (const auto& fac : run.ansatz.factors) principal.push_back(fac.excitation);
  for (const auto& r : map_auxiliary_parameters(phi, principal, f.problem())) EXPECT_LT(std::abs(r.numerator), 1e-3);
}

TEST(CrossTerms, MatchDenseDoubleCommutators) {
  oracle::Fixture f("h4_1.75.fcidump");
  const auto run = short_adapt(f, 5e-2);
  const StateVector phi = prepare_state(run.ansatz, f.problem());
  auto aux = build_auxiliary_pool(pool_of(f, {1, 2}), run.ansatz);
  aux.resize(12);
  const auto rows = map_auxiliary_parameters(phi, aux, f.problem());

  const oracle::Mat h = dense_matrix(f.h());
  const oracle::Vec v = oracle::to_eigen(phi);
  std::vector<oracle::Mat> g;
  for (const auto& x : aux) g.push_back(oracle::dense_kappa(x, 8));
  double expect = 0.0;
  for (std::size_t j = 0; j < aux.size(); ++j)
    for (std::size_t k = 0; k < aux.size(); ++k) {
      if (j == k) continue;
      const oracle::Vec gkv = g[k] * v, gjv = g[j] * v;
      const oracle::Vec c2v = h * (g[j] * gkv) - g[j] * (h * gkv) - g[k] * (h * gjv) + g[k] * (g[j] * (h * v));
      expect += 0.5 * rows[j].theta * rows[k].theta * v.dot(c2v).real();
    }
  EXPECT_NEAR(asc_cross_terms(phi, rows, f.problem()), expect, 1e-10);
}

TEST(CircuitInvariance, AscLeavesCnotCountUnchanged) {
  for (RunMethod m : {RunMethod::adapt, RunMethod::mp2s}) {
    RunConfig cfg;
    cfg.fcidump = oracle::fixture("h4_1.75.fcidump");
    cfg.method = m;
    cfg.epsilon = 1e-2;
    cfg.asc = false;
    const auto off = run_pipeline(cfg);
    cfg.asc = true;
    const auto on = run_pipeline(cfg);
    EXPECT_EQ(on.cnot, off.cnot);
    EXPECT_EQ(cnot_estimate(on.ansatz), cnot_estimate(off.ansatz));
    EXPECT_EQ(on.ansatz.parameters(), off.ansatz.parameters());
    EXPECT_FALSE(off.e_asc.has_value());
    ASSERT_TRUE(on.e_asc.has_value());
    EXPECT_EQ(on.e_final, off.e_final);
  }
}
