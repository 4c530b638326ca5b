#pragma once

// Disentangled UCC ansatz states and the compiled problem they run against.

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "ascvqe/excitation.hpp"
#include "ascvqe/jordan_wigner.hpp"
#include "ascvqe/statevector.hpp"

namespace ascvqe {

enum class Role { principal, auxiliary };

struct AnsatzFactor {
  FermionExcitation excitation;
  double theta = 0.0;
  Role role = Role::principal;
};

/// Ordered dUCC factors over a computational-basis reference. factors[0] acts
/// on the reference first.
struct AnsatzState {
  std::size_t n_qubits = 0;
  std::uint64_t reference = 0;  // occupation bitmask
  std::vector<AnsatzFactor> factors;

  std::size_t size() const noexcept { return factors.size(); }

  std::vector<double> parameters() const {
    std::vector<double> t;
    t.reserve(factors.size());
    for (const auto& f : factors) t.push_back(f.theta);
    return t;
  }

  void set_parameters(std::span<const double> theta) {
    if (theta.size() != factors.size())
      throw DimensionError("parameter vector has " + std::to_string(theta.size()) + " entries, ansatz has " +
                           std::to_string(factors.size()) + " factors");
    for (std::size_t k = 0; k < theta.size(); ++k) factors[k].theta = theta[k];
  }

  /// Every factor's excitation must appear in the declared pool.
  bool drawn_from(std::span<const FermionExcitation> pool) const {
    return std::all_of(factors.begin(), factors.end(), [&](const AnsatzFactor& f) {
      return std::find(pool.begin(), pool.end(), f.excitation) != pool.end();
    });
  }
};

inline AnsatzState empty_ansatz(std::size_t n_so, std::size_t n_elec) {
  if (n_elec > n_so) throw DimensionError("more electrons than spin orbitals");
  return AnsatzState{n_so, (std::uint64_t{1} << n_elec) - 1, {}};
}

/// JW generator with its sparse image over the problem sector.
///
/// A pool generator maps each basis state it touches to exactly one partner,
/// kappa|a> = s|b>, kappa|b> = -s|a>, s = +-1. On each such pair kappa^2 = -1, so
/// the closed form s + sin(theta) kappa s + (1 - cos(theta)) kappa^2 s reduces to a
/// plane rotation, which is applied in place. Generators without that structure
/// fall back to the three-term form.
struct ExcitationGenerator {
  struct Pair {
    std::uint64_t a = 0, b = 0;
    double sign = 1.0;
  };

  FermionExcitation excitation;
  PauliSum pauli;
  SparseOperator op;

  ExcitationGenerator(FermionExcitation x, const Sector& sector)
      : excitation(std::move(x)), pauli(jordan_wigner_generator(excitation, sector.n_qubits)), op(pauli, sector) {
    find_pairs();
  }

  bool paired() const noexcept { return paired_; }
  const std::vector<Pair>& pairs() const noexcept { return pairs_; }

  /// kappa^3 = -kappa on the whole sector; checked once, on first use.
  bool exponentiable() const {
    std::call_once(checked_, [this] { exponentiable_ = paired_ || op.satisfies_cubic_identity(); });
    return exponentiable_;
  }

  /// s <- e^{theta kappa} s
  void rotate(StateVector& s, double theta) const {
    if (!paired_) {
      StateVector out(s.n_qubits), k1(s.n_qubits), k2(s.n_qubits);
      exponential(s, theta, out, k1, k2);
      s = std::move(out);
      return;
    }
    const double c = std::cos(theta), sn = std::sin(theta);
    for (const auto& p : pairs_) {
      const cplx va = s[p.a], vb = s[p.b];
      s[p.a] = c * va - p.sign * sn * vb;
      s[p.b] = c * vb + p.sign * sn * va;
    }
  }

  /// Re <lhs| kappa |psi>
  double real_overlap(const StateVector& lhs, const StateVector& psi) const {
    if (!paired_) return inner(lhs, op.apply(psi)).real();
    double acc = 0.0;
    for (const auto& p : pairs_)
      acc += p.sign * (std::conj(lhs[p.b]) * psi[p.a] - std::conj(lhs[p.a]) * psi[p.b]).real();
    return acc;
  }

  /// out = kappa in
  void apply(const StateVector& in, StateVector& out) const {
    if (!paired_) {
      op.apply(in, out);
      return;
    }
    if (out.n_qubits != in.n_qubits || out.dim() != in.dim()) out = StateVector(in.n_qubits);
    std::fill(out.amplitudes.begin(), out.amplitudes.end(), cplx{});
    for (const auto& p : pairs_) {
      out[p.b] += p.sign * in[p.a];
      out[p.a] -= p.sign * in[p.b];
    }
  }

  StateVector apply(const StateVector& in) const {
    StateVector out(in.n_qubits);
    apply(in, out);
    return out;
  }

  /// out = e^{theta kappa} in via the three-term closed form; k1/k2 are scratch.
  void exponential(const StateVector& in, double theta, StateVector& out, StateVector& k1, StateVector& k2) const {
    if (!exponentiable())
      throw UnsupportedGeneratorError("generator for " + excitation.label() + " violates kappa^3 = -kappa");
    op.apply(in, k1);
    op.apply(k1, k2);
    out = in;
    const double s = std::sin(theta), c = 1.0 - std::cos(theta);
    for (std::size_t i = 0; i < out.dim(); ++i) out[i] += s * k1[i] + c * k2[i];
  }

 private:
  void find_pairs() {
    std::map<std::uint64_t, std::pair<std::uint64_t, cplx>> entry;  // column -> (row, value)
    bool ok = true;
    op.for_each_entry([&](std::uint64_t row, std::uint64_t col, cplx v) {
      if (!entry.emplace(col, std::pair{row, v}).second) ok = false;
    });
    for (const auto& [col, rv] : entry) {
      if (!ok) break;
      const auto [row, v] = rv;
      auto back = entry.find(row);
      ok = std::abs(std::abs(v.real()) - 1.0) < 1e-12 && std::abs(v.imag()) < 1e-12 && back != entry.end() &&
           back->second.first == col && std::abs(back->second.second + v) < 1e-12;
      if (ok && col < row) pairs_.push_back({col, row, v.real() > 0 ? 1.0 : -1.0});
    }
    paired_ = ok;
    if (!ok) pairs_.clear();
  }

  std::vector<Pair> pairs_;
  bool paired_ = false;
  mutable std::once_flag checked_;
  mutable bool exponentiable_ = false;
};

/// Hamiltonian plus everything compiled against its (N, S_z) sector: the
/// sparse Hamiltonian and a lazily filled cache of excitation generators.
/// Shared read-only across threads; the cache is internally locked.
class Problem {
 public:
  Problem(PauliSum hamiltonian, std::uint64_t reference)
      : hamiltonian_(std::move(hamiltonian)),
        reference_(reference),
        sector_(Sector::of(hamiltonian_.n_qubits(), reference)),
        h_op_(hamiltonian_, sector_) {}

  std::size_t n_qubits() const noexcept { return hamiltonian_.n_qubits(); }
  const PauliSum& hamiltonian() const noexcept { return hamiltonian_; }
  const SparseOperator& h_op() const noexcept { return h_op_; }
  const Sector& sector() const noexcept { return sector_; }
  std::uint64_t reference() const noexcept { return reference_; }
  StateVector reference_state() const { return StateVector::basis(n_qubits(), reference_); }

  const ExcitationGenerator& generator(const FermionExcitation& x) const {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(x);
    if (it == cache_.end()) it = cache_.emplace(x, std::make_unique<ExcitationGenerator>(x, sector_)).first;
    return *it->second;
  }

  /// <s|H|s>
  double energy(const StateVector& s) const { return h_op_.matrix_element(s, s).real(); }

 private:
  PauliSum hamiltonian_;
  std::uint64_t reference_;
  Sector sector_;
  SparseOperator h_op_;
  mutable std::mutex mutex_;
  mutable std::map<FermionExcitation, std::unique_ptr<ExcitationGenerator>> cache_;
};

/// Factors applied to the reference in list order, via the Pauli-sum route.
inline StateVector prepare_state(const AnsatzState& a) {
  StateVector s = StateVector::basis(a.n_qubits, a.reference);
  for (const auto& f : a.factors)
    s = apply_excitation_exponential(s, jordan_wigner_generator(f.excitation, a.n_qubits), f.theta);
  return s;
}

/// Same state through the compiled generators of `problem`.
inline StateVector prepare_state(const AnsatzState& a, const Problem& problem) {
  if (a.n_qubits != problem.n_qubits()) throw DimensionError("ansatz and problem widths differ");
  StateVector s = StateVector::basis(a.n_qubits, a.reference);
  for (const auto& f : a.factors) problem.generator(f.excitation).rotate(s, f.theta);
  return s;
}

/// Staircase-template CNOT count: each Pauli rotation of weight w costs 2(w-1).
inline std::size_t cnot_estimate(const AnsatzState& a) {
  std::size_t total = 0;
  for (const auto& f : a.factors)
    for (const auto& [p, c] : jordan_wigner_generator(f.excitation, a.n_qubits))
      if (p.weight() > 1) total += 2 * static_cast<std::size_t>(p.weight() - 1);
  return total;
}

}  // namespace ascvqe
