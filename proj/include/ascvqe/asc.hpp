#pragma once

// Auxiliary-subspace correction: one-step reconstruction of frozen auxiliary
// parameters from the optimized principal state, and the second-order energy
// correction built from them.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "ascvqe/commutators.hpp"
#include "ascvqe/parallel.hpp"
#include "ascvqe/subspace.hpp"

namespace ascvqe {

struct AuxiliaryRow {
  FermionExcitation excitation;
  double numerator = 0.0;    // <[H,G_A]>
  double denominator = 0.0;  // <[[H,G_A],G_A]>
  double theta = 0.0;
  double contribution = 0.0;  // theta*num + theta^2*den/2
  bool degenerate = false;    // |den| < 1e-10, theta forced to 0
  bool reused = false;        // numerator taken from cached selection gradients
  bool dropped = false;       // excluded by the energy-raising safeguard
};

struct AuxiliaryReport {
  std::vector<AuxiliaryRow> rows;
  double e_p = 0.0;
  double e_asc = 0.0;
  std::size_t commutator_evals = 0;  // 2 N_A
  std::size_t reused = 0;
  std::size_t fresh_evals = 0;

  std::size_t n_aux() const noexcept { return rows.size(); }
};

struct OverheadCounts {
  std::size_t n_aux = 0;
  std::size_t bound = 0;  // 2 N_A
  std::size_t reused = 0;
  std::size_t fresh = 0;
};

/// Rows carrying num, den and the mapped theta = -num/den for every auxiliary
/// operator. `cached` supplies already-measured numerators on the same state.
inline std::vector<AuxiliaryRow> map_auxiliary_parameters(const StateVector& phi_p,
                                                          std::span<const FermionExcitation> aux_pool,
                                                          const Problem& problem,
                                                          const std::map<FermionExcitation, double>* cached = nullptr,
                                                          std::size_t threads = 1) {
  std::vector<AuxiliaryRow> rows(aux_pool.size());
  if (aux_pool.empty()) return rows;
  const StateVector h_phi = problem.h_op().apply(phi_p);
  parallel_for(aux_pool.size(), threads, [&](std::size_t i) {
    AuxiliaryRow& r = rows[i];
    r.excitation = aux_pool[i];
    const CommutatorPair c = commutator_pair(phi_p, h_phi, problem.generator(aux_pool[i]), problem.h_op());
    r.numerator = c.numerator;
    r.denominator = c.denominator;
    if (cached) {
      if (auto it = cached->find(aux_pool[i]); it != cached->end()) {
        r.numerator = it->second;
        r.reused = true;
      }
    }
    r.degenerate = std::abs(r.denominator) < kDenominatorFloor;
    r.theta = r.degenerate ? 0.0 : -r.numerator / r.denominator;
  });
  return rows;
}

/// Symbolic-commutator variant for cross-checks.
inline std::vector<AuxiliaryRow> map_auxiliary_parameters(const StateVector& phi_p,
                                                          std::span<const FermionExcitation> aux_pool,
                                                          const PauliSum& h) {
  std::vector<AuxiliaryRow> rows;
  for (const auto& x : aux_pool) {
    AuxiliaryRow r;
    r.excitation = x;
    const CommutatorPair c = commutator_pair(phi_p, h, jordan_wigner_generator(x, h.n_qubits()));
    r.numerator = c.numerator;
    r.denominator = c.denominator;
    r.degenerate = std::abs(r.denominator) < kDenominatorFloor;
    r.theta = r.degenerate ? 0.0 : -r.numerator / r.denominator;
    rows.push_back(std::move(r));
  }
  return rows;
}

/// E_ASC = E_P + sum_i (theta_i num_i + theta_i^2 den_i / 2). With `drop_raising`
/// any row whose contribution is positive is left out of the sum.
inline AuxiliaryReport asc_energy(double e_p, std::vector<AuxiliaryRow> rows, bool drop_raising = false) {
  AuxiliaryReport rep;
  rep.e_p = e_p;
  rep.e_asc = e_p;
  for (auto& r : rows) {
    r.contribution = r.theta * r.numerator + 0.5 * r.theta * r.theta * r.denominator;
    r.dropped = drop_raising && r.contribution > 0.0;
    if (!r.dropped) rep.e_asc += r.contribution;
    if (r.reused) ++rep.reused;
  }
  rep.rows = std::move(rows);
  rep.commutator_evals = 2 * rep.rows.size();
  rep.fresh_evals = rep.commutator_evals - rep.reused;
  return rep;
}

inline AuxiliaryReport asc_energy(const StateVector& phi_p, std::vector<AuxiliaryRow> rows, const Problem& problem,
                                  bool drop_raising = false) {
  return asc_energy(problem.energy(phi_p), std::move(rows), drop_raising);
}

inline OverheadCounts overhead_report(const AuxiliaryReport& report, std::size_t reused_singles) {
  OverheadCounts c;
  c.n_aux = report.n_aux();
  c.bound = 2 * c.n_aux;
  c.reused = std::min(reused_singles, c.n_aux);
  c.fresh = c.bound - c.reused;
  return c;
}

/// Full SDTQ pool minus the excitations already in the principal ansatz, unless
/// `include_principal` restores them.
inline std::vector<FermionExcitation> build_auxiliary_pool(std::span<const FermionExcitation> full_pool,
                                                           const AnsatzState& principal,
                                                           bool include_principal = false) {
  std::set<FermionExcitation> used;
  if (!include_principal)
    for (const auto& f : principal.factors) used.insert(f.excitation);
  std::set<FermionExcitation> seen;
  std::vector<FermionExcitation> out;
  for (const auto& x : full_pool)
    if (!used.contains(x) && seen.insert(x).second) out.push_back(x);
  return out;
}

/// Second-order cross terms omitted by the correction:
/// (1/2) sum_{j != k} theta_j theta_k <[[H,G_j],G_k]>, symmetrized. Uses
/// <[[H,A],A]> for A = sum theta_k G_k and subtracts the diagonal.
inline double asc_cross_terms(const StateVector& phi_p, const std::vector<AuxiliaryRow>& rows,
                              const Problem& problem) {
  const std::size_t n = phi_p.n_qubits;
  StateVector a_phi(n), a2_phi(n), tmp(n);
  for (const auto& r : rows) {
    if (r.theta == 0.0) continue;
    problem.generator(r.excitation).apply(phi_p, tmp);
    axpy(r.theta, tmp, a_phi);
  }
  for (const auto& r : rows) {
    if (r.theta == 0.0) continue;
    problem.generator(r.excitation).apply(a_phi, tmp);
    axpy(r.theta, tmp, a2_phi);
  }
  const StateVector h_phi = problem.h_op().apply(phi_p);
  const double full = 2.0 * inner(h_phi, a2_phi).real() + 2.0 * problem.h_op().matrix_element(a_phi, a_phi).real();
  double diag = 0.0;
  for (const auto& r : rows) diag += r.theta * r.theta * r.denominator;
  return 0.5 * (full - diag);
}

}  // namespace ascvqe
