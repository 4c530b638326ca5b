#pragma once

// <[H,G]> and <[[H,G],G]> for anti-Hermitian G on a state.
//
// Statevector route, using G^+ = -G:
//   <[H,G]>     = 2 Re <H psi | G psi>
//   <[[H,G],G]> = 2 Re <H psi | G^2 psi> + 2 <G psi | H | G psi>
// The symbolic route builds the commutator PauliSums and is kept for cross-checks.

#include "ascvqe/ansatz.hpp"

namespace ascvqe {

struct CommutatorPair {
  double numerator = 0.0;    // <[H,G]>
  double denominator = 0.0;  // <[[H,G],G]>
};

/// `h_psi` must equal H psi.
inline double single_commutator(const StateVector& psi, const StateVector& h_psi, const ExcitationGenerator& g) {
  return 2.0 * g.real_overlap(h_psi, psi);
}

inline CommutatorPair commutator_pair(const StateVector& psi, const StateVector& h_psi, const ExcitationGenerator& g,
                                      const SparseOperator& h) {
  const StateVector g_psi = g.apply(psi);
  const StateVector gg_psi = g.apply(g_psi);
  CommutatorPair out;
  out.numerator = 2.0 * inner(h_psi, g_psi).real();
  out.denominator = 2.0 * inner(h_psi, gg_psi).real() + 2.0 * h.matrix_element(g_psi, g_psi).real();
  return out;
}

inline CommutatorPair commutator_pair(const StateVector& psi, const PauliSum& h, const PauliSum& g) {
  return {expectation(psi, commutator(h, g)), expectation(psi, double_commutator(h, g))};
}

}  // namespace ascvqe
