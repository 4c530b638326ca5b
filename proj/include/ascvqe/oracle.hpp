#pragma once

// Exact ground-state energies: diagonalization of the qubit Hamiltonian inside
// a particle-number / S_z sector, and an independent determinant-basis CI.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <bit>
#include <cmath>
#include <random>
#include <unordered_map>
#include <vector>

#include "ascvqe/fcidump.hpp"
#include "ascvqe/statevector.hpp"

namespace ascvqe {

inline constexpr std::size_t kOracleQubitLimit = 16;
inline constexpr std::size_t kDenseSectorLimit = 4096;
inline constexpr std::size_t kDeterminantSpinOrbitalLimit = 16;

struct SpectrumResult {
  double energy = 0.0;
  StateVector state;
  int n_electrons = 0;
  int ms2 = 0;
  std::size_t dimension = 0;
  double residual = 0.0;  // ||H v - E v||
};

namespace detail {

using SectorMatrix = Eigen::SparseMatrix<cplx>;

inline std::unordered_map<std::uint64_t, Eigen::Index> sector_index(const Sector& s) {
  std::unordered_map<std::uint64_t, Eigen::Index> idx;
  for (std::size_t k = 0; k < s.size(); ++k) idx.emplace(s.states[k], static_cast<Eigen::Index>(k));
  return idx;
}

/// Lowest eigenpair by Lanczos with full reorthogonalization, restarted from the
/// current Ritz vector until the residual drops below `tol`.
template <typename Apply>
std::pair<double, Eigen::VectorXcd> lanczos(Eigen::Index dim, Apply&& apply, double tol = 1e-10,
                                            Eigen::Index krylov = 120, int max_restarts = 200) {
  std::mt19937_64 rng(20240521);
  std::normal_distribution<double> normal;
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = normal(rng);
  v.normalize();
  krylov = std::min(krylov, dim);
  double theta = 0.0;
  for (int restart = 0; restart < max_restarts; ++restart) {
    Eigen::MatrixXcd basis(dim, krylov);
    std::vector<double> alpha, beta;
    basis.col(0) = v;
    Eigen::Index m = 0;
    for (; m < krylov; ++m) {
      Eigen::VectorXcd w = apply(basis.col(m));
      alpha.push_back(basis.col(m).dot(w).real());
      for (int pass = 0; pass < 2; ++pass)
        for (Eigen::Index j = 0; j <= m; ++j) w -= basis.col(j) * basis.col(j).dot(w);
      const double b = w.norm();
      if (m + 1 == krylov || b < 1e-13) {
        ++m;
        break;
      }
      beta.push_back(b);
      basis.col(m + 1) = w / b;
    }
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      t(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    theta = es.eigenvalues()[0];
    v = basis.leftCols(m) * es.eigenvectors().col(0).cast<cplx>();
    v.normalize();
    const double res = (apply(v) - theta * v).norm();
    if (res < tol) break;
  }
  return {theta, v};
}

}  // namespace detail

/// Lowest eigenvalue of H among basis states with n_elec particles and 2 S_z = ms2.
inline SpectrumResult ground_energy(const PauliSum& h, int n_elec, int ms2,
                                    std::size_t dense_limit = kDenseSectorLimit) {
  const std::size_t n = h.n_qubits();
  if (n > kOracleQubitLimit)
    throw SizeLimitError("oracle: " + std::to_string(n) + " qubits exceeds the limit of " +
                         std::to_string(kOracleQubitLimit));
  const Sector sector = Sector::particles(n, n_elec, ms2);
  if (sector.size() == 0) throw DimensionError("oracle: empty sector");
  const SparseOperator op(h, sector);
  const auto idx = detail::sector_index(sector);
  const auto dim = static_cast<Eigen::Index>(sector.size());

  std::vector<Eigen::Triplet<cplx>> triplets;
  op.for_each_entry([&](std::uint64_t row, std::uint64_t col, cplx v) {
    auto it = idx.find(row);
    if (it == idx.end()) throw Error("oracle: Hamiltonian does not conserve the requested sector");
    triplets.emplace_back(it->second, idx.at(col), v);
  });
  detail::SectorMatrix mat(dim, dim);
  mat.setFromTriplets(triplets.begin(), triplets.end());

  SpectrumResult out;
  out.n_electrons = n_elec;
  out.ms2 = ms2;
  out.dimension = sector.size();
  Eigen::VectorXcd v;
  if (sector.size() < dense_limit) {
    const Eigen::MatrixXcd dense(mat);
    if (dense.imag().cwiseAbs().maxCoeff() == 0.0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{dense.real()};
      out.energy = es.eigenvalues()[0];
      v = es.eigenvectors().col(0).cast<cplx>();
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es{dense};
      out.energy = es.eigenvalues()[0];
      v = es.eigenvectors().col(0);
    }
  } else {
    auto [e, vec] = detail::lanczos(dim, [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd { return mat * x; });
    out.energy = e;
    v = std::move(vec);
  }
  out.residual = (mat * v - out.energy * v).norm();
  out.state = StateVector(n);
  for (Eigen::Index k = 0; k < dim; ++k) out.state[sector.states[static_cast<std::size_t>(k)]] = v[k];
  return out;
}

namespace detail {

/// Sign of a_p acting on `det` under the occupation-bit ordering.
inline double parity_below(std::uint64_t det, int p) {
  return (std::popcount(det & ((std::uint64_t{1} << p) - 1)) & 1) ? -1.0 : 1.0;
}

}  // namespace detail

/// FCI energy from Slater-Condon rules over all determinants of the sector,
/// built straight from the spatial integrals (no qubit operators involved).
inline double determinant_ci_energy(const MolecularIntegrals& m) {
  const int n = 2 * m.n_spatial;
  if (static_cast<std::size_t>(n) > kDeterminantSpinOrbitalLimit)
    throw SizeLimitError("determinant CI: " + std::to_string(n) + " spin orbitals exceeds the limit of " +
                         std::to_string(kDeterminantSpinOrbitalLimit));
  const Sector sector = Sector::particles(static_cast<std::size_t>(n), m.n_electrons, m.ms2);
  if (sector.size() == 0) throw DimensionError("determinant CI: empty sector");

  auto h1 = [&](int p, int q) { return (p & 1) == (q & 1) ? m.h(p >> 1, q >> 1) : 0.0; };
  auto direct = [&](int p, int q, int r, int s) {  // <pq|rs> = (pr|qs)
    if ((p & 1) != (r & 1) || (q & 1) != (s & 1)) return 0.0;
    return m.g(p >> 1, r >> 1, q >> 1, s >> 1);
  };
  auto anti = [&](int p, int q, int r, int s) { return direct(p, q, r, s) - direct(p, q, s, r); };
  auto occupied = [&](std::uint64_t det) {
    std::vector<int> o;
    for (int p = 0; p < n; ++p)
      if (det >> p & 1) o.push_back(p);
    return o;
  };
  // Sign of a+_a a_i |det>.
  auto single_sign = [](std::uint64_t det, int i, int a) {
    const double s1 = detail::parity_below(det, i);
    const std::uint64_t d1 = det & ~(std::uint64_t{1} << i);
    return s1 * detail::parity_below(d1, a);
  };

  const auto dim = static_cast<Eigen::Index>(sector.size());
  Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const std::uint64_t dj = sector.states[static_cast<std::size_t>(col)];
    const auto occ = occupied(dj);
    for (Eigen::Index row = 0; row <= col; ++row) {
      const std::uint64_t di = sector.states[static_cast<std::size_t>(row)];
      const std::uint64_t diff = di ^ dj;
      const int ndiff = std::popcount(diff) / 2;
      double v = 0.0;
      if (ndiff == 0) {
        for (int i : occ) {
          v += h1(i, i);
          for (int j : occ) v += 0.5 * anti(i, j, i, j);
        }
      } else if (ndiff == 1) {
        const int i = std::countr_zero(diff & dj);
        const int a = std::countr_zero(diff & di);
        v = h1(a, i);
        for (int j : occ)
          if (j != i) v += anti(a, j, i, j);
        v *= single_sign(dj, i, a);
      } else if (ndiff == 2) {
        const std::uint64_t holes = diff & dj, parts = diff & di;
        const int i = std::countr_zero(holes), j = 63 - std::countl_zero(holes);
        const int a = std::countr_zero(parts), b = 63 - std::countl_zero(parts);
        // a+_a a+_b a_j a_i |dj>
        std::uint64_t d = dj;
        double sign = detail::parity_below(d, i);
        d &= ~(std::uint64_t{1} << i);
        sign *= detail::parity_below(d, j);
        d &= ~(std::uint64_t{1} << j);
        sign *= detail::parity_below(d, b);
        d |= std::uint64_t{1} << b;
        sign *= detail::parity_below(d, a);
        v = sign * anti(a, b, i, j);
      }
      mat(row, col) = mat(col, row) = v;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0] + m.e_core;
}

}  // namespace ascvqe
