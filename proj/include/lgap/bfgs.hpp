#pragma once

// Quasi-Newton minimization with a BFGS inverse-Hessian update and an Armijo
// backtracking line search.

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lgap/errors.hpp"

namespace lgap {

/// Returns f(x) and writes the gradient into `grad` (same length as x).
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct BfgsOptions {
  int max_iterations = 2000;
  double grad_tol = 1e-8;
  double cost_tol = 1e-10;
  double armijo_c1 = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 60;
};

enum class StopReason { gradient, cost_change, max_iterations, line_search };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::gradient: return "gradient";
    case StopReason::cost_change: return "cost_change";
    case StopReason::max_iterations: return "max_iterations";
    case StopReason::line_search: return "line_search";
  }
  return "?";
}

/// One accepted iterate; step 0 is the starting point.
struct BfgsIterate {
  int step;
  double cost;
  double grad_norm;
  std::vector<double> x;
};

struct BfgsResult {
  std::vector<double> x;
  double cost = 0;
  double grad_norm = 0;
  StopReason reason = StopReason::max_iterations;
  int evaluations = 0;
  std::vector<BfgsIterate> trace;

  bool converged() const {
    return reason == StopReason::gradient || reason == StopReason::cost_change;
  }
  int iterations() const { return trace.empty() ? 0 : trace.back().step; }
};

inline BfgsResult bfgs_minimize(const Objective& objective, std::vector<double> x0,
                                const BfgsOptions& opts = {}) {
  using Vec = Eigen::VectorXd;
  const auto n = static_cast<Eigen::Index>(x0.size());
  BfgsResult res;

  auto eval = [&](const Vec& x, Vec& g) {
    g.resize(n);
    const double f = objective(std::span<const double>(x.data(), x.size()),
                               std::span<double>(g.data(), g.size()));
    ++res.evaluations;
    if (!std::isfinite(f) || !g.allFinite())
      throw optimization_error("bfgs_minimize: non-finite objective or gradient",
                               std::vector<double>(x.data(), x.data() + x.size()));
    return f;
  };
  auto record = [&](int step, double f, const Vec& g, const Vec& x) {
    res.trace.push_back({step, f, g.norm(), std::vector<double>(x.data(), x.data() + x.size())});
  };

  Vec x = Eigen::Map<const Vec>(x0.data(), n);
  Vec g;
  double f = eval(x, g);
  record(0, f, g, x);

  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  bool scaled = false;
  Vec g_new;
  Vec x_new;

  int step = 0;
  for (;;) {
    if (g.norm() < opts.grad_tol) {
      res.reason = StopReason::gradient;
      break;
    }
    if (step >= opts.max_iterations) {
      res.reason = StopReason::max_iterations;
      break;
    }

    Vec p = -h * g;
    double slope = g.dot(p);
    if (!(slope < 0)) {
      h.setIdentity();
      p = -g;
      slope = -g.squaredNorm();
    }

    double alpha = 1.0;
    double f_new = 0;
    bool accepted = false;
    for (int bt = 0; bt < opts.max_backtracks; ++bt) {
      x_new = x + alpha * p;
      f_new = eval(x_new, g_new);
      if (f_new <= f + opts.armijo_c1 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= opts.backtrack;
    }
    if (!accepted) {
      if (h.isIdentity()) {
        res.reason = StopReason::line_search;
        break;
      }
      // Retry from steepest descent before giving up.
      h.setIdentity();
      continue;
    }

    const Vec s = x_new - x;
    const Vec y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (!scaled) {
        h *= sy / y.squaredNorm();
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Vec hy = h * y;
      // H+ = (I - rho s y^T) H (I - rho y s^T) + rho s s^T, expanded.
      h += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) -
           rho * (hy * s.transpose() + s * hy.transpose());
    }

    const double df = f - f_new;
    x.swap(x_new);
    g.swap(g_new);
    f = f_new;
    ++step;
    record(step, f, g, x);
    if (std::abs(df) < opts.cost_tol) {
      res.reason = g.norm() < opts.grad_tol ? StopReason::gradient : StopReason::cost_change;
      break;
    }
  }

  res.x.assign(x.data(), x.data() + x.size());
  res.cost = f;
  res.grad_norm = g.norm();
  return res;
}

}  // namespace lgap
