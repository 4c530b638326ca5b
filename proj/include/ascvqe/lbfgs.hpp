#pragma once

// Limited-memory BFGS with a strong-Wolfe line search.
//
// The objective is any callable `(std::span<const double>, std::span<double>) -> double`
// that returns f(x) and writes the gradient. Energy evaluations carry absolute
// rounding noise of a few ulps of |f|, so the sufficient-decrease test admits
// that much slack; the curvature test runs on gradients, which stay accurate.

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace ascvqe {

struct LbfgsOptions {
  double grad_tol = 1e-8;  // on the infinity norm
  std::size_t max_iter = 10000;
  std::size_t memory = 20;
  double c1 = 1e-4;
  double c2 = 0.9;
  std::size_t max_line_search = 40;
  double flat_tol = 1e-12;  // components below this are not moved
};

struct LbfgsIterate {
  std::size_t iter = 0;
  double f = 0.0;
  double grad_inf = 0.0;
  std::vector<double> x;
};

enum class LbfgsStatus { converged, max_iter, line_search_failed, non_finite };

struct LbfgsReport {
  std::vector<double> x;
  double f = 0.0;
  double grad_inf = 0.0;
  std::size_t iterations = 0;
  LbfgsStatus status = LbfgsStatus::max_iter;
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline double inf_norm(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

/// Minimiser of the cubic interpolating (a, fa, da), (b, fb, db); falls back to
/// bisection when the fit is unusable or lands outside the safeguarded interval.
inline double cubic_step(double a, double fa, double da, double b, double fb, double db) {
  const double lo = std::min(a, b), hi = std::max(a, b);
  const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - da * db;
  double t = 0.5 * (a + b);
  if (disc >= 0.0) {
    const double d2 = std::copysign(std::sqrt(disc), b - a);
    const double denom = db - da + 2.0 * d2;
    if (denom != 0.0) t = b - (b - a) * (db + d2 - d1) / denom;
  }
  const double margin = 0.1 * (hi - lo);
  if (!std::isfinite(t) || t < lo + margin || t > hi - margin) t = 0.5 * (a + b);
  return t;
}

}  // namespace detail

template <typename Objective, typename OnIterate>
LbfgsReport lbfgs_minimize(Objective&& objective, std::vector<double> x, const LbfgsOptions& opt, OnIterate&& on_iterate) {
  using detail::dot;
  const std::size_t n = x.size();
  std::vector<double> g(n), g_new(n), d(n), x_new(n);
  LbfgsReport rep;

  double f = objective(std::span<const double>(x), std::span<double>(g));
  if (!std::isfinite(f)) {
    rep.x = x;
    rep.f = f;
    rep.status = LbfgsStatus::non_finite;
    return rep;
  }
  on_iterate(LbfgsIterate{0, f, detail::inf_norm(g), x});
  rep.x = x;
  rep.f = f;
  rep.grad_inf = detail::inf_norm(g);
  if (n == 0 || rep.grad_inf < opt.grad_tol) {
    rep.status = LbfgsStatus::converged;
    return rep;
  }

  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;
  bool retried_steepest = false;

  for (std::size_t iter = 1; iter <= opt.max_iter; ++iter) {
    // Two-loop recursion for d = -H g.
    std::vector<double> q = g;
    std::vector<double> alpha(s_hist.size());
    for (std::size_t k = s_hist.size(); k-- > 0;) {
      alpha[k] = rho_hist[k] * dot(s_hist[k], q);
      for (std::size_t i = 0; i < n; ++i) q[i] -= alpha[k] * y_hist[k][i];
    }
    double gamma = 1.0;
    if (!s_hist.empty()) gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
    for (auto& v : q) v *= gamma;
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const double beta = rho_hist[k] * dot(y_hist[k], q);
      for (std::size_t i = 0; i < n; ++i) q[i] += (alpha[k] - beta) * s_hist[k][i];
    }
    for (std::size_t i = 0; i < n; ++i) d[i] = std::abs(g[i]) < opt.flat_tol ? 0.0 : -q[i];
    double dg0 = dot(d, g);
    if (!(dg0 < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      for (std::size_t i = 0; i < n; ++i) d[i] = std::abs(g[i]) < opt.flat_tol ? 0.0 : -g[i];
      dg0 = dot(d, g);
      if (!(dg0 < 0.0)) {
        rep.status = LbfgsStatus::converged;
        break;
      }
    }

    double step = s_hist.empty() ? std::min(1.0, 1.0 / std::sqrt(-dg0)) : 1.0;
    const double f_slack = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(f));

    auto eval = [&](double a, double& fa, double& da) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + a * d[i];
      fa = objective(std::span<const double>(x_new), std::span<double>(g_new));
      da = dot(g_new, d);
    };
    auto armijo = [&](double a, double fa) { return fa <= f + opt.c1 * a * dg0 + f_slack; };
    auto curvature = [&](double da) { return std::abs(da) <= -opt.c2 * dg0; };

    // Bracketing then zoom (Nocedal & Wright, algorithms 3.5/3.6).
    bool accepted = false, non_finite = false;
    double a_prev = 0.0, f_prev = f, d_prev = dg0;
    double fa = 0.0, da = 0.0;
    std::size_t evals = 0;
    double a_lo = 0, f_lo = 0, d_lo = 0, a_hi = 0, f_hi = 0, d_hi = 0;
    bool zoom = false;
    while (evals < opt.max_line_search) {
      eval(step, fa, da);
      ++evals;
      if (!std::isfinite(fa)) {
        non_finite = true;
        break;
      }
      if (!armijo(step, fa) || (evals > 1 && fa >= f_prev + f_slack)) {
        a_lo = a_prev, f_lo = f_prev, d_lo = d_prev, a_hi = step, f_hi = fa, d_hi = da;
        zoom = true;
        break;
      }
      if (curvature(da)) {
        accepted = true;
        break;
      }
      if (da >= 0.0) {
        a_lo = step, f_lo = fa, d_lo = da, a_hi = a_prev, f_hi = f_prev, d_hi = d_prev;
        zoom = true;
        break;
      }
      a_prev = step, f_prev = fa, d_prev = da;
      step *= 2.0;
    }
    while (zoom && !accepted && !non_finite && evals < opt.max_line_search) {
      step = detail::cubic_step(a_lo, f_lo, d_lo, a_hi, f_hi, d_hi);
      eval(step, fa, da);
      ++evals;
      if (!std::isfinite(fa)) {
        non_finite = true;
        break;
      }
      if (!armijo(step, fa) || fa >= f_lo + f_slack) {
        a_hi = step, f_hi = fa, d_hi = da;
      } else {
        if (curvature(da)) {
          accepted = true;
          break;
        }
        if (da * (a_hi - a_lo) >= 0.0) a_hi = a_lo, f_hi = f_lo, d_hi = d_lo;
        a_lo = step, f_lo = fa, d_lo = da;
      }
      if (std::abs(a_hi - a_lo) < 1e-16 * std::max(1.0, std::abs(a_lo))) break;
    }
    if (non_finite) {
      rep.status = LbfgsStatus::non_finite;
      rep.f = fa;
      rep.iterations = iter;
      return rep;
    }
    if (!accepted) {
      // Take the best Armijo point found by zoom, if it moved at all.
      if (zoom && a_lo > 0.0 && f_lo <= f) {
        step = a_lo;
        eval(step, fa, da);
        accepted = true;
      }
    }
    if (!accepted) {
      if (!retried_steepest && !s_hist.empty()) {
        retried_steepest = true;
        s_hist.clear();
        y_hist.clear();
        rho_hist.clear();
        --iter;
        continue;
      }
      rep.status = LbfgsStatus::line_search_failed;
      rep.iterations = iter - 1;
      break;
    }
    retried_steepest = false;

    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = x_new[i] - x[i];
      y[i] = g_new[i] - g[i];
    }
    const double sy = dot(s, y);
    if (sy > 1e-16 * std::sqrt(dot(s, s) * dot(y, y))) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (s_hist.size() > opt.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    x = x_new;
    g = g_new;
    f = fa;
    const double gi = detail::inf_norm(g);
    on_iterate(LbfgsIterate{iter, f, gi, x});
    rep.iterations = iter;
    if (f <= rep.f) {
      rep.x = x;
      rep.f = f;
      rep.grad_inf = gi;
    }
    if (gi < opt.grad_tol) {
      rep.status = LbfgsStatus::converged;
      break;
    }
    if (iter == opt.max_iter) rep.status = LbfgsStatus::max_iter;
  }
  return rep;
}

}  // namespace ascvqe
