#pragma once

// Spin-orbital expansion of spatial integrals and the closed-shell Fock diagonal.
// Spin orbital 2k is alpha, 2k+1 is beta; both share spatial orbital k.

#include <cmath>
#include <iostream>
#include <vector>

#include "ascvqe/fcidump.hpp"

namespace ascvqe {

inline constexpr double kTrailerTolerance = 1e-6;

struct SpinOrbitalIntegrals {
  int n_so = 0;
  int n_electrons = 0;
  std::vector<double> h1_so;   // n_so^2, row-major
  std::vector<double> eri_so;  // n_so^4, <pq||rs> at ((p*n+q)*n+r)*n+s
  std::vector<double> orbital_energies;

  double h(int p, int q) const { return h1_so[static_cast<std::size_t>(p * n_so + q)]; }
  double anti(int p, int q, int r, int s) const {
    return eri_so[static_cast<std::size_t>(((p * n_so + q) * n_so + r) * n_so + s)];
  }
};

inline int spin_of(int spin_orbital) noexcept { return spin_orbital & 1; }
inline int spatial_of(int spin_orbital) noexcept { return spin_orbital >> 1; }

/// Canonical RHF orbital energies, lowest n_electrons/2 orbitals occupied:
///   eps_p = h_pp + sum_i [2 (pp|ii) - (pi|ip)]
inline std::vector<double> fock_orbital_energies(const MolecularIntegrals& m) {
  if (m.n_electrons % 2 != 0)
    throw UnsupportedReferenceError("closed-shell reference required; NELEC=" + std::to_string(m.n_electrons));
  const int nocc = m.n_electrons / 2;
  std::vector<double> eps(static_cast<std::size_t>(m.n_spatial));
  for (int p = 0; p < m.n_spatial; ++p) {
    double e = m.h(p, p);
    for (int i = 0; i < nocc; ++i) e += 2.0 * m.g(p, p, i, i) - m.g(p, i, i, p);
    eps[static_cast<std::size_t>(p)] = e;
  }
  return eps;
}

/// Closed-shell determinant energy of the same reference, core energy included.
inline double rhf_energy(const MolecularIntegrals& m) {
  const int nocc = m.n_electrons / 2;
  double e = m.e_core;
  for (int i = 0; i < nocc; ++i) {
    e += 2.0 * m.h(i, i);
    for (int j = 0; j < nocc; ++j) e += 2.0 * m.g(i, i, j, j) - m.g(i, j, j, i);
  }
  return e;
}

inline SpinOrbitalIntegrals to_spin_orbitals(const MolecularIntegrals& m) {
  SpinOrbitalIntegrals s;
  const int n = 2 * m.n_spatial;
  s.n_so = n;
  s.n_electrons = m.n_electrons;
  s.h1_so.assign(static_cast<std::size_t>(n * n), 0.0);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if (spin_of(p) == spin_of(q)) s.h1_so[static_cast<std::size_t>(p * n + q)] = m.h(spatial_of(p), spatial_of(q));

  // Dense spatial (pq|rs) first; the map lookup per spin-orbital quadruple is too slow.
  const int ns = m.n_spatial;
  std::vector<double> g(static_cast<std::size_t>(ns * ns * ns * ns));
  for (int p = 0; p < ns; ++p)
    for (int q = 0; q < ns; ++q)
      for (int r = 0; r < ns; ++r)
        for (int t = 0; t < ns; ++t) g[static_cast<std::size_t>(((p * ns + q) * ns + r) * ns + t)] = m.g(p, q, r, t);
  auto chem = [&](int p, int q, int r, int t) { return g[static_cast<std::size_t>(((p * ns + q) * ns + r) * ns + t)]; };
  // <pq|rs> = (pr|qs) when spin(p)=spin(r) and spin(q)=spin(s).
  auto phys = [&](int p, int q, int r, int t) {
    if (spin_of(p) != spin_of(r) || spin_of(q) != spin_of(t)) return 0.0;
    return chem(spatial_of(p), spatial_of(r), spatial_of(q), spatial_of(t));
  };
  s.eri_so.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int t = 0; t < n; ++t)
          s.eri_so[static_cast<std::size_t>(((p * n + q) * n + r) * n + t)] = phys(p, q, r, t) - phys(p, q, t, r);

  if (m.n_electrons % 2 == 0) {
    const auto eps = fock_orbital_energies(m);
    if (!m.trailer_orbital_energies.empty()) {
      for (std::size_t k = 0; k < eps.size(); ++k)
        if (std::abs(eps[k] - m.trailer_orbital_energies[k]) > kTrailerTolerance) {
          std::clog << "warning: FCIDUMP orbital energy " << k + 1 << " (" << m.trailer_orbital_energies[k]
                    << ") disagrees with the Fock diagonal (" << eps[k] << "); using the computed value\n";
          break;
        }
    }
    s.orbital_energies.resize(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) s.orbital_energies[static_cast<std::size_t>(p)] = eps[static_cast<std::size_t>(spatial_of(p))];
  }
  return s;
}

}  // namespace ascvqe
