#pragma once

// Cost function, gradients and the quasi-Newton driver.
//
// Evaluation accounting (expectation evaluations):
//   energy                      1
//   parameter_shift_gradient    2 per component
//   analytic_gradient           2 per component (priced like the shift rule)

#include <atomic>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "ascvqe/ansatz.hpp"
#include "ascvqe/lbfgs.hpp"

namespace ascvqe {

struct TraceRecord {
  std::size_t iter = 0;
  double energy = 0.0;
  double grad_inf_norm = 0.0;
  std::size_t fevals_cum = 0;
  std::vector<double> parameters;
};

class OptimizerDivergence : public Error {
 public:
  OptimizerDivergence(const std::string& what, std::vector<TraceRecord> trace)
      : Error(what), trace_(std::move(trace)) {}
  const std::vector<TraceRecord>& trace() const noexcept { return trace_; }

 private:
  std::vector<TraceRecord> trace_;
};

/// E(theta) = <ref| U(theta)^+ H U(theta) |ref> for a fixed factor list.
class CostFunction {
 public:
  CostFunction(const Problem& problem, AnsatzState ansatz) : problem_(&problem), ansatz_(std::move(ansatz)) {
    if (ansatz_.n_qubits != problem.n_qubits()) throw DimensionError("ansatz and Hamiltonian widths differ");
    generators_.reserve(ansatz_.size());
    for (const auto& f : ansatz_.factors) generators_.push_back(&problem.generator(f.excitation));
  }

  std::size_t size() const noexcept { return ansatz_.size(); }
  const AnsatzState& ansatz() const noexcept { return ansatz_; }
  const Problem& problem() const noexcept { return *problem_; }

  std::size_t function_evals() const noexcept { return function_evals_.load(); }
  std::size_t gradient_evals() const noexcept { return gradient_evals_.load(); }
  std::size_t expectation_evals() const noexcept { return function_evals() + gradient_evals(); }

  /// U(theta)|ref>; not counted.
  StateVector state(std::span<const double> theta) const {
    check(theta);
    StateVector s = problem_->reference_state();
    for (std::size_t k = 0; k < generators_.size(); ++k) generators_[k]->rotate(s, theta[k]);
    return s;
  }

  double energy(std::span<const double> theta) {
    const double e = problem_->energy(state(theta));
    function_evals_ += 1;
    return e;
  }

  /// (f(theta + pi/2 e_i) - f(theta - pi/2 e_i)) / 2
  double parameter_shift_gradient(std::span<const double> theta, std::size_t i) {
    check(theta);
    if (i >= size()) throw DimensionError("parameter index out of range");
    std::vector<double> t(theta.begin(), theta.end());
    t[i] = theta[i] + std::numbers::pi / 2;
    const double plus = energy(t);
    t[i] = theta[i] - std::numbers::pi / 2;
    const double minus = energy(t);
    return 0.5 * (plus - minus);
  }

  std::vector<double> analytic_gradient(std::span<const double> theta) {
    std::vector<double> g(size());
    reverse_sweep(theta, g);
    gradient_evals_ += 2 * size();
    return g;
  }

  /// Energy and full analytic gradient from one forward and one reverse sweep.
  double energy_and_gradient(std::span<const double> theta, std::span<double> grad) {
    if (grad.size() != size()) throw DimensionError("gradient buffer has wrong length");
    const double e = reverse_sweep(theta, grad);
    function_evals_ += 1;
    gradient_evals_ += 2 * size();
    return e;
  }

 private:
  void check(std::span<const double> theta) const {
    if (theta.size() != size())
      throw DimensionError("parameter vector has " + std::to_string(theta.size()) + " entries, ansatz has " +
                           std::to_string(size()) + " factors");
  }

  // Back-propagates lambda = H psi through the factors:
  // dE/dtheta_k = 2 Re <lambda_k | kappa_k psi_k>, with psi_k the state after factor k.
  double reverse_sweep(std::span<const double> theta, std::span<double> grad) const {
    StateVector psi = state(theta);
    StateVector lambda = problem_->h_op().apply(psi);
    const double e = inner(psi, lambda).real();
    for (std::size_t k = generators_.size(); k-- > 0;) {
      const ExcitationGenerator& gen = *generators_[k];
      grad[k] = 2.0 * gen.real_overlap(lambda, psi);
      if (k == 0) break;
      gen.rotate(psi, -theta[k]);
      gen.rotate(lambda, -theta[k]);
    }
    return e;
  }

  const Problem* problem_;
  AnsatzState ansatz_;
  std::vector<const ExcitationGenerator*> generators_;
  std::atomic<std::size_t> function_evals_{0};
  std::atomic<std::size_t> gradient_evals_{0};
};

struct OptimizationResult {
  std::vector<double> parameters;
  double energy = 0.0;
  std::size_t iterations = 0;
  std::size_t expectation_evals = 0;  // spent by this call
  bool converged = false;
  std::vector<TraceRecord> trace;
};

struct OptimizerOptions {
  double grad_tol = 1e-8;
  std::size_t max_iter = 10000;
};

/// L-BFGS on the analytic gradient. Returns the best point seen.
inline OptimizationResult minimize(CostFunction& c, std::vector<double> theta0, const OptimizerOptions& opt = {}) {
  for (double t : theta0)
    if (!std::isfinite(t)) throw Error("minimize: non-finite initial parameter");
  if (theta0.size() != c.size()) throw DimensionError("minimize: initial vector length differs from ansatz");
  const std::size_t start = c.expectation_evals();
  OptimizationResult res;
  LbfgsOptions lo;
  lo.grad_tol = opt.grad_tol;
  lo.max_iter = opt.max_iter;

  auto objective = [&](std::span<const double> x, std::span<double> g) { return c.energy_and_gradient(x, g); };
  auto record = [&](const LbfgsIterate& it) {
    res.trace.push_back({it.iter, it.f, it.grad_inf, c.expectation_evals() - start, it.x});
  };
  const LbfgsReport rep = lbfgs_minimize(objective, std::move(theta0), lo, record);
  if (rep.status == LbfgsStatus::non_finite)
    throw OptimizerDivergence("optimizer encountered a non-finite energy", std::move(res.trace));

  res.parameters = rep.x;
  res.energy = rep.f;
  res.iterations = rep.iterations;
  res.converged = rep.status == LbfgsStatus::converged;
  res.expectation_evals = c.expectation_evals() - start;
  return res;
}

}  // namespace ascvqe
