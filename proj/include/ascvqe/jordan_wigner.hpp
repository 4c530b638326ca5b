#pragma once

// Jordan-Wigner images of fermionic operators. Occupation bit set <=> |1>, and
//   a+_p = (X_p - iY_p)/2 * Z_{p-1} ... Z_0.

#include <vector>

#include "ascvqe/excitation.hpp"
#include "ascvqe/integrals.hpp"
#include "ascvqe/pauli.hpp"

namespace ascvqe {

inline PauliSum creation_operator(int p, std::size_t n_qubits) {
  const std::uint64_t bit = std::uint64_t{1} << p;
  const std::uint64_t below = bit - 1;
  PauliSum s(n_qubits);
  s.add({bit, below}, 0.5);
  s.add({bit, below | bit}, cplx{0.0, -0.5});
  return s;
}

inline PauliSum annihilation_operator(int p, std::size_t n_qubits) { return creation_operator(p, n_qubits).adjoint(); }

/// sum_p n_p
inline PauliSum number_operator(std::size_t n_qubits) {
  PauliSum s(n_qubits);
  for (std::size_t p = 0; p < n_qubits; ++p) {
    s.add({}, 0.5);
    s.add(PauliString::single(p, 'Z'), -0.5);
  }
  return s.simplify();
}

/// S_z = (N_alpha - N_beta) / 2 under the interleaved ordering.
inline PauliSum sz_operator(std::size_t n_qubits) {
  PauliSum s(n_qubits);
  for (std::size_t p = 0; p < n_qubits; ++p) s.add(PauliString::single(p, 'Z'), (p % 2 == 0) ? -0.25 : 0.25);
  return s.simplify();
}

/// tau for the excitation (not anti-Hermitised).
inline PauliSum excitation_operator(const FermionExcitation& x, std::size_t n_so) {
  PauliSum tau = PauliSum::identity(n_so);
  for (int a : x.virtuals) tau = multiply(tau, creation_operator(a, n_so));
  for (auto it = x.occupied.rbegin(); it != x.occupied.rend(); ++it) tau = multiply(tau, annihilation_operator(*it, n_so));
  return tau;
}

/// kappa = tau - tau+, anti-Hermitian.
inline PauliSum jordan_wigner_generator(const FermionExcitation& x, std::size_t n_so) {
  for (int p : x.occupied)
    if (p < 0 || static_cast<std::size_t>(p) >= n_so) throw DimensionError("excitation index outside register");
  for (int p : x.virtuals)
    if (p < 0 || static_cast<std::size_t>(p) >= n_so) throw DimensionError("excitation index outside register");
  const PauliSum tau = excitation_operator(x, n_so);
  return tau - tau.adjoint();
}

namespace detail {

inline void accumulate_product(PauliSum& out, const PauliSum& a, const PauliSum& b, double scale) {
  for (const auto& [pa, ca] : a)
    for (const auto& [pb, cb] : b) {
      const auto [phase, p] = multiply(pa, pb);
      out.add(p, scale * phase * ca * cb);
    }
}

}  // namespace detail

/// H = e_core + sum_pq h_pq a+_p a_q + sum_{p<q, r<s} <pq||rs> a+_p a+_q a_s a_r
inline PauliSum build_hamiltonian(const SpinOrbitalIntegrals& s, double e_core) {
  const int n = s.n_so;
  const auto nq = static_cast<std::size_t>(n);
  std::vector<PauliSum> cr, an;
  for (int p = 0; p < n; ++p) {
    cr.push_back(creation_operator(p, nq));
    an.push_back(annihilation_operator(p, nq));
  }
  PauliSum h(nq);
  h.add({}, e_core);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if (const double v = s.h(p, q); v != 0.0) detail::accumulate_product(h, cr[static_cast<std::size_t>(p)], an[static_cast<std::size_t>(q)], v);

  // Pair products a+_p a+_q (p<q) and a_s a_r (r<s), shared across the quadruple loop.
  std::vector<PauliSum> cc(static_cast<std::size_t>(n * n)), aa(static_cast<std::size_t>(n * n));
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      cc[static_cast<std::size_t>(p * n + q)] = multiply(cr[static_cast<std::size_t>(p)], cr[static_cast<std::size_t>(q)]);
      aa[static_cast<std::size_t>(p * n + q)] = multiply(an[static_cast<std::size_t>(q)], an[static_cast<std::size_t>(p)]);
    }
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int t = r + 1; t < n; ++t) {
          const double v = s.anti(p, q, r, t);
          if (v == 0.0) continue;
          detail::accumulate_product(h, cc[static_cast<std::size_t>(p * n + q)], aa[static_cast<std::size_t>(r * n + t)], v);
        }
  h.simplify();
  // Imaginary parts cancel between Hermitian-conjugate pairs; clear the rounding residue.
  PauliSum out(nq);
  for (const auto& [p, c] : h) out.add(p, c.real());
  return out.simplify();
}

}  // namespace ascvqe
