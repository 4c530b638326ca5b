#pragma once

// Principal-subspace construction: ADAPT-VQE, MP2-screened ansatz, and
// parameter initialization strategies.

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <span>
#include <vector>

#include "ascvqe/commutators.hpp"
#include "ascvqe/mp2.hpp"
#include "ascvqe/parallel.hpp"
#include "ascvqe/vqe.hpp"

namespace ascvqe {

inline constexpr double kDenominatorFloor = 1e-10;

enum class SelectionMethod { adapt, mp2s };
enum class InitStrategy { hf_zero, recycled, generator_informed };

struct SelectionConfig {
  SelectionMethod method = SelectionMethod::adapt;
  double epsilon = 1e-3;       // ADAPT gradient threshold, Hartree
  double epsilon_bar = 0.05;   // MP2 amplitude threshold
  InitStrategy init = InitStrategy::recycled;
  std::size_t max_operators = 500;
  bool allow_duplicates = true;
  OptimizerOptions optimizer;
  std::size_t threads = 1;

  void validate() const {
    if (!(epsilon > 0.0)) throw Error("epsilon must be positive");
    if (!(epsilon_bar > 0.0)) throw Error("epsilon_bar must be positive");
  }
};

struct SelectionStep {
  std::size_t iteration = 0;  // 1-based macro-iteration
  FermionExcitation chosen;
  double gradient = 0.0;      // signed <[H,G]> of the chosen operator
  double theta_init = 0.0;
  double energy = 0.0;        // after re-optimization
  std::size_t n_params = 0;
  std::size_t optimizer_iterations = 0;
  std::size_t evals_cum = 0;            // every expectation evaluation so far
  std::size_t selection_evals_cum = 0;  // pool-gradient evaluations so far
};

struct SelectionTrace {
  std::vector<SelectionStep> steps;
  std::vector<TraceRecord> optimizer_trace;  // concatenated micro-iterations, fevals_cum global
  std::vector<double> final_gradients;       // pool gradients on the returned state
  double final_max_gradient = 0.0;
  std::size_t total_evals = 0;
  std::size_t selection_evals = 0;
  bool converged = false;
};

struct AdaptResult {
  AnsatzState ansatz;
  SelectionTrace trace;
  double energy = 0.0;
};

/// g_i = <psi|[H, G_i]|psi> for each pool member (symbolic route).
inline std::vector<double> pool_gradients(const StateVector& psi, std::span<const FermionExcitation> pool,
                                          const PauliSum& h) {
  std::vector<double> g(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i)
    g[i] = expectation(psi, commutator(h, jordan_wigner_generator(pool[i], h.n_qubits())));
  return g;
}

/// Same values through the compiled operators of `problem`, in parallel.
inline std::vector<double> pool_gradients(const StateVector& psi, std::span<const FermionExcitation> pool,
                                          const Problem& problem, std::size_t threads = 1) {
  const StateVector h_psi = problem.h_op().apply(psi);
  std::vector<double> g(pool.size());
  parallel_for(pool.size(), threads,
               [&](std::size_t i) { g[i] = single_commutator(psi, h_psi, problem.generator(pool[i])); });
  return g;
}

/// -<[H,G]> / <[[H,G],G]> on psi, or 0 when the curvature is degenerate.
inline double generator_informed_init(const StateVector& psi, const PauliSum& g, const PauliSum& h) {
  const CommutatorPair c = commutator_pair(psi, h, g);
  return std::abs(c.denominator) < kDenominatorFloor ? 0.0 : -c.numerator / c.denominator;
}

inline std::vector<double> initialize_parameters(InitStrategy strategy, std::span<const double> prev,
                                                 double theta_new = 0.0) {
  std::vector<double> out(prev.begin(), prev.end());
  switch (strategy) {
    case InitStrategy::hf_zero:
      return std::vector<double>(prev.size() + 1, 0.0);
    case InitStrategy::recycled:
      out.push_back(0.0);
      return out;
    case InitStrategy::generator_informed:
      out.push_back(theta_new);
      return out;
  }
  return out;
}

/// ADAPT-VQE: grow the ansatz by the largest-|gradient| pool operator until every
/// gradient falls below epsilon, re-optimizing all parameters after each addition.
inline AdaptResult adapt_vqe(const Problem& problem, std::span<const FermionExcitation> pool,
                             const SelectionConfig& cfg) {
  cfg.validate();
  AdaptResult out;
  out.ansatz = AnsatzState{problem.n_qubits(), problem.reference(), {}};
  SelectionTrace& tr = out.trace;
  std::size_t evals = 0;
  out.energy = problem.energy(problem.reference_state());
  evals += 1;

  for (std::size_t iteration = 1;; ++iteration) {
    const StateVector psi = prepare_state(out.ansatz, problem);
    const std::vector<double> g = pool_gradients(psi, pool, problem, cfg.threads);
    evals += pool.size();
    tr.selection_evals += pool.size();

    std::optional<std::size_t> best;
    double max_abs = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (!cfg.allow_duplicates &&
          std::any_of(out.ansatz.factors.begin(), out.ansatz.factors.end(),
                      [&](const AnsatzFactor& f) { return f.excitation == pool[i]; }))
        continue;
      if (!best || std::abs(g[i]) > max_abs) {
        best = i;
        max_abs = std::abs(g[i]);
      }
    }
    tr.final_gradients = g;
    tr.final_max_gradient = max_abs;
    if (!best || max_abs < cfg.epsilon) {
      tr.converged = true;
      break;
    }
    if (out.ansatz.size() >= cfg.max_operators) break;

    const FermionExcitation& chosen = pool[*best];
    double theta_new = 0.0;
    if (cfg.init == InitStrategy::generator_informed) {
      // Numerator is the selection gradient already in hand; only the curvature is new.
      const ExcitationGenerator& gen = problem.generator(chosen);
      const CommutatorPair c = commutator_pair(psi, problem.h_op().apply(psi), gen, problem.h_op());
      evals += 1;
      theta_new = std::abs(c.denominator) < kDenominatorFloor ? 0.0 : -g[*best] / c.denominator;
    }
    const std::vector<double> theta0 = initialize_parameters(cfg.init, out.ansatz.parameters(), theta_new);
    out.ansatz.factors.push_back({chosen, 0.0, Role::principal});

    CostFunction cost(problem, out.ansatz);
    OptimizationResult opt = minimize(cost, theta0, cfg.optimizer);
    for (auto& rec : opt.trace) {
      rec.fevals_cum += evals;
      tr.optimizer_trace.push_back(std::move(rec));
    }
    evals += opt.expectation_evals;
    out.ansatz.set_parameters(opt.parameters);
    out.energy = opt.energy;

    SelectionStep step;
    step.iteration = iteration;
    step.chosen = chosen;
    step.gradient = g[*best];
    step.theta_init = theta_new;
    step.energy = opt.energy;
    step.n_params = out.ansatz.size();
    step.optimizer_iterations = opt.iterations;
    step.evals_cum = evals;
    step.selection_evals_cum = tr.selection_evals;
    tr.steps.push_back(std::move(step));
  }
  tr.total_evals = evals;
  return out;
}

/// Doubles with |t| > epsilon_bar, largest |t| applied first.
inline std::vector<std::pair<FermionExcitation, double>> screened_doubles(const Mp2Amplitudes& amps,
                                                                          double epsilon_bar) {
  std::vector<std::pair<FermionExcitation, double>> kept;
  for (const auto& [x, t] : amps.values)
    if (std::abs(t) > epsilon_bar) kept.emplace_back(x, t);
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& a, const auto& b) { return std::abs(a.second) > std::abs(b.second); });
  return kept;
}

/// MP2-screened ansatz: screened doubles (initialized to t) followed by every
/// single of the pool in canonical order (initialized to 0).
inline AnsatzState mp2s_ansatz(const Mp2Amplitudes& amps, std::span<const FermionExcitation> pool,
                               std::size_t n_so, std::size_t n_elec, double epsilon_bar) {
  AnsatzState a = empty_ansatz(n_so, n_elec);
  for (const auto& [x, t] : screened_doubles(amps, epsilon_bar)) a.factors.push_back({x, t, Role::principal});
  if (a.factors.empty())
    std::clog << "warning: no MP2 amplitude exceeds " << epsilon_bar << "; ansatz holds singles only\n";
  for (const auto& x : pool)
    if (x.rank() == 1) a.factors.push_back({x, 0.0, Role::principal});
  return a;
}

}  // namespace ascvqe
