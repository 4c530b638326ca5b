#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "ascvqe/excitation.hpp"
#include "ascvqe/integrals.hpp"

namespace ascvqe {

inline constexpr double kMp2DenominatorFloor = 1e-10;

struct Mp2Amplitudes {
  std::map<FermionExcitation, double> values;
  /// Excitations whose denominator was not negative (non-canonical or non-ground reference).
  std::vector<FermionExcitation> flagged;

  double at(const FermionExcitation& x) const {
    auto it = values.find(x);
    return it == values.end() ? 0.0 : it->second;
  }
};

/// t_ij^ab = <ij||ab> / (e_i + e_j - e_a - e_b) for every double of the pool.
inline Mp2Amplitudes mp2_amplitudes(const SpinOrbitalIntegrals& s) {
  if (s.orbital_energies.size() != static_cast<std::size_t>(s.n_so))
    throw UnsupportedReferenceError("MP2 amplitudes need canonical orbital energies (closed-shell reference)");
  Mp2Amplitudes out;
  const auto& e = s.orbital_energies;
  for (const auto& x : excitation_pool(s.n_so, s.n_electrons, {2})) {
    const int i = x.occupied[0], j = x.occupied[1], a = x.virtuals[0], b = x.virtuals[1];
    const double denom = e[static_cast<std::size_t>(i)] + e[static_cast<std::size_t>(j)] - e[static_cast<std::size_t>(a)] -
                         e[static_cast<std::size_t>(b)];
    if (std::abs(denom) < kMp2DenominatorFloor)
      throw DegenerateDenominatorError("degenerate MP2 denominator for excitation " + x.label());
    if (denom > 0.0) out.flagged.push_back(x);
    out.values.emplace(x, s.anti(i, j, a, b) / denom);
  }
  return out;
}

/// Second-order correlation energy sum_{i<j,a<b} t <ij||ab>.
inline double mp2_energy(const SpinOrbitalIntegrals& s, const Mp2Amplitudes& t) {
  double e = 0.0;
  for (const auto& [x, v] : t.values) e += v * s.anti(x.occupied[0], x.occupied[1], x.virtuals[0], x.virtuals[1]);
  return e;
}

}  // namespace ascvqe
