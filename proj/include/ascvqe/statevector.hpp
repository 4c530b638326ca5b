#pragma once

// Statevector engine. Basis index bit p set <=> spin orbital (qubit) p occupied.

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <span>
#include <vector>

#include "ascvqe/pauli.hpp"

namespace ascvqe {

inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kImaginaryResidueFloor = 1e-10;
inline constexpr double kImaginaryResidueError = 1e-8;
inline constexpr double kCubicIdentityTolerance = 1e-8;

/// Amplitudes over 2^n basis states. Unitary operations keep the norm at 1;
/// apply_pauli_sum and friends return unnormalised vectors of the same shape.
struct StateVector {
  std::size_t n_qubits = 0;
  std::vector<cplx> amplitudes;

  StateVector() = default;
  explicit StateVector(std::size_t n) : n_qubits(n), amplitudes(std::size_t{1} << n) {
    if (n > kMaxQubits) throw SizeLimitError("statevector: " + std::to_string(n) + " qubits exceeds limit");
  }

  std::size_t dim() const noexcept { return amplitudes.size(); }
  cplx& operator[](std::size_t i) { return amplitudes[i]; }
  const cplx& operator[](std::size_t i) const { return amplitudes[i]; }

  double norm() const {
    double s = 0.0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return std::sqrt(s);
  }

  static StateVector basis(std::size_t n, std::uint64_t index) {
    StateVector s(n);
    s.amplitudes.at(index) = 1.0;
    return s;
  }
};

inline void check_dims(const StateVector& a, const StateVector& b) {
  if (a.n_qubits != b.n_qubits) throw DimensionError("statevector dimension mismatch");
}

/// <a|b>
inline cplx inner(const StateVector& a, const StateVector& b) {
  check_dims(a, b);
  cplx s{};
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

/// y += alpha * x
inline void axpy(cplx alpha, const StateVector& x, StateVector& y) {
  check_dims(x, y);
  for (std::size_t i = 0; i < x.dim(); ++i) y[i] += alpha * x[i];
}

/// Computational basis state with spin orbitals 0..n_elec-1 occupied.
inline StateVector hf_reference(std::size_t n_so, std::size_t n_elec) {
  if (n_elec > n_so) throw DimensionError("hf_reference: more electrons than spin orbitals");
  return StateVector::basis(n_so, (std::uint64_t{1} << n_elec) - 1);
}

/// a|s>, term by term on the bit representation; no matrix is formed.
inline StateVector apply_pauli_sum(const StateVector& s, const PauliSum& a) {
  if (a.n_qubits() != s.n_qubits) throw DimensionError("apply_pauli_sum: operator and state widths differ");
  StateVector out(s.n_qubits);
  for (const auto& [p, c] : a) {
    const cplx base = c * i_power(std::popcount(p.x & p.z));
    for (std::uint64_t b = 0; b < s.dim(); ++b) {
      const cplx v = s[b];
      if (v == cplx{}) continue;
      out[b ^ p.x] += ((std::popcount(b & p.z) & 1) ? -base : base) * v;
    }
  }
  return out;
}

/// <s|b|s> for Hermitian b. An imaginary part above 1e-8 means b was not Hermitian.
inline double expectation(const StateVector& s, const PauliSum& b) {
  const cplx v = inner(s, apply_pauli_sum(s, b));
  if (std::abs(v.imag()) > kImaginaryResidueError)
    throw NonHermitianObservableError("expectation has imaginary part " + std::to_string(v.imag()));
  return v.real();
}

/// e^{theta kappa}|s> = s + sin(theta) kappa s + (1 - cos(theta)) kappa^2 s,
/// exact whenever kappa^3 = -kappa on the orbit of s.
inline StateVector apply_excitation_exponential(const StateVector& s, const PauliSum& kappa, double theta) {
  const StateVector k1 = apply_pauli_sum(s, kappa);
  const StateVector k2 = apply_pauli_sum(k1, kappa);
  StateVector k3 = apply_pauli_sum(k2, kappa);
  axpy(1.0, k1, k3);
  if (k3.norm() > kCubicIdentityTolerance)
    throw UnsupportedGeneratorError("generator violates kappa^3 = -kappa on this state");
  StateVector out = s;
  axpy(std::sin(theta), k1, out);
  axpy(1.0 - std::cos(theta), k2, out);
  return out;
}

// ---------------------------------------------------------------------------
// Particle-number / S_z sectors and compiled sparse operators
// ---------------------------------------------------------------------------

/// Basis states sharing particle number and 2*S_z (interleaved spin ordering).
struct Sector {
  std::size_t n_qubits = 0;
  std::vector<std::uint64_t> states;  // ascending

  static Sector full(std::size_t n) {
    Sector s{n, {}};
    s.states.resize(std::size_t{1} << n);
    for (std::uint64_t b = 0; b < s.states.size(); ++b) s.states[b] = b;
    return s;
  }

  static Sector particles(std::size_t n, int n_elec, int ms2) {
    constexpr std::uint64_t kAlphaMask = 0x5555555555555555ULL;
    Sector s{n, {}};
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
      if (std::popcount(b) != n_elec) continue;
      const int na = std::popcount(b & kAlphaMask);
      if (na - (n_elec - na) == ms2) s.states.push_back(b);
    }
    return s;
  }

  /// Sector containing a given basis state.
  static Sector of(std::size_t n, std::uint64_t basis_state) {
    constexpr std::uint64_t kAlphaMask = 0x5555555555555555ULL;
    const int ne = std::popcount(basis_state);
    const int na = std::popcount(basis_state & kAlphaMask);
    return particles(n, ne, na - (ne - na));
  }

  std::size_t size() const noexcept { return states.size(); }
};

/// Column-compressed matrix of a PauliSum restricted to a set of input basis
/// states. Applying it to a vector supported on those states is exact; any
/// amplitude outside them is ignored.
class SparseOperator {
 public:
  SparseOperator() = default;

  SparseOperator(const PauliSum& a, const Sector& columns) : n_qubits_(a.n_qubits()) {
    if (columns.n_qubits != a.n_qubits()) throw DimensionError("SparseOperator: sector width differs from operator");
    // Group strings by X mask: they share a target row for every column.
    std::map<std::uint64_t, std::vector<std::pair<std::uint64_t, cplx>>> groups;
    for (const auto& [p, c] : a) groups[p.x].emplace_back(p.z, c * i_power(std::popcount(p.x & p.z)));
    col_start_.reserve(columns.size() + 1);
    col_start_.push_back(0);
    for (std::uint64_t col : columns.states) {
      for (const auto& [x, zs] : groups) {
        cplx v{};
        for (const auto& [z, c] : zs) v += (std::popcount(col & z) & 1) ? -c : c;
        if (std::abs(v) < 1e-14) continue;
        rows_.push_back(col ^ x);
        vals_.push_back(v);
      }
      cols_.push_back(col);
      col_start_.push_back(rows_.size());
    }
  }

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  std::size_t nonzeros() const noexcept { return vals_.size(); }

  /// out = A in (out is overwritten).
  void apply(const StateVector& in, StateVector& out) const {
    if (in.n_qubits != n_qubits_) throw DimensionError("SparseOperator: state width differs from operator");
    if (out.n_qubits != n_qubits_ || out.dim() != in.dim()) out = StateVector(n_qubits_);
    std::fill(out.amplitudes.begin(), out.amplitudes.end(), cplx{});
    for (std::size_t k = 0; k < cols_.size(); ++k) {
      const cplx v = in[cols_[k]];
      if (v == cplx{}) continue;
      for (std::size_t e = col_start_[k]; e < col_start_[k + 1]; ++e) out[rows_[e]] += vals_[e] * v;
    }
  }

  StateVector apply(const StateVector& in) const {
    StateVector out(n_qubits_);
    apply(in, out);
    return out;
  }

  /// <u| A |v>
  cplx matrix_element(const StateVector& u, const StateVector& v) const {
    cplx s{};
    for (std::size_t k = 0; k < cols_.size(); ++k) {
      const cplx x = v[cols_[k]];
      if (x == cplx{}) continue;
      for (std::size_t e = col_start_[k]; e < col_start_[k + 1]; ++e) s += std::conj(u[rows_[e]]) * vals_[e] * x;
    }
    return s;
  }

  /// fn(row, column, value) for every stored entry, column-major.
  template <typename Fn>
  void for_each_entry(Fn&& fn) const {
    for (std::size_t k = 0; k < cols_.size(); ++k)
      for (std::size_t e = col_start_[k]; e < col_start_[k + 1]; ++e) fn(rows_[e], cols_[k], vals_[e]);
  }

  /// True when A^3 = -A on every column basis vector.
  bool satisfies_cubic_identity(double tol = kCubicIdentityTolerance) const {
    std::map<std::uint64_t, std::size_t> index;
    for (std::size_t k = 0; k < cols_.size(); ++k) index.emplace(cols_[k], k);
    using Sparse = std::map<std::uint64_t, cplx>;
    auto step = [&](const Sparse& v) {
      Sparse out;
      for (const auto& [col, x] : v) {
        auto it = index.find(col);
        if (it == index.end()) continue;
        for (std::size_t e = col_start_[it->second]; e < col_start_[it->second + 1]; ++e) out[rows_[e]] += vals_[e] * x;
      }
      return out;
    };
    for (std::uint64_t col : cols_) {
      const Sparse k1 = step(Sparse{{col, 1.0}});
      Sparse k3 = step(step(k1));
      for (const auto& [r, x] : k1) k3[r] += x;
      double n2 = 0.0;
      for (const auto& [r, x] : k3) n2 += std::norm(x);
      if (std::sqrt(n2) > tol) return false;
    }
    return true;
  }

 private:
  std::size_t n_qubits_ = 0;
  std::vector<std::uint64_t> cols_;
  std::vector<std::size_t> col_start_;
  std::vector<std::uint64_t> rows_;
  std::vector<cplx> vals_;
};

/// Debug dump: little-endian (re, im) pairs of 64-bit floats, basis order.
inline void write_amplitudes(const StateVector& s, const std::string& path) {
  static_assert(std::endian::native == std::endian::little, "binary dump assumes a little-endian host");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  for (const auto& a : s.amplitudes) {
    const double re = a.real(), im = a.imag();
    out.write(reinterpret_cast<const char*>(&re), sizeof re);
    out.write(reinterpret_cast<const char*>(&im), sizeof im);
  }
}

}  // namespace ascvqe
