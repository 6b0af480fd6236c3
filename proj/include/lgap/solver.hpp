#pragma once

// Two-stage variational gap solver and the energy-offset scan for models with
// degenerate steady states.
//
// Stage 1 (pre-training) holds E_r at the offset E_r0 and minimizes the
// Bell-penalized cost over (theta, E_i). Stage 2 (main training) starts from
// the Stage 1 optimum and minimizes the plain variance over (theta, E_r, E_i).
// The gap estimate is |E_r| at the end of Stage 2.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "lgap/bfgs.hpp"
#include "lgap/cost.hpp"
#include "lgap/liouvillian.hpp"
#include "lgap/simulator.hpp"
#include "lgap/spectrum.hpp"

namespace lgap {

/// |<psi|B>|^2 above this marks a collapsed state as the trace-carrying steady
/// state rather than a zero-trace one.
inline constexpr double kTraceWeightTol = 1e-2;

struct OptimizerOptions {
  int max_iterations = 2000;  // per stage
  double grad_tol = 1e-8;
  double cost_tol = 1e-10;
  double fd_step = kFdStep;
  std::uint64_t seed = 7;
  double theta_init_scale = 0.1;
  GradientMethod gradient = GradientMethod::finite_difference;

  /// Independent Stage 1 initializations; the lowest C1 is kept.
  int pretrain_starts = 8;
  /// Extra full attempts when Stage 2 fails.
  int max_restarts = 3;
  /// Stage 2 must end below this cost to count as converged.
  double success_cost = 1e-4;
  /// |E_r| above this means the state left the steady-state manifold.
  double nonzero_threshold = 1e-3;

  /// 0 selects 2N blocks.
  int block_count = 0;
  /// Unset selects default_kappa.
  std::optional<double> kappa;
  /// Record fidelity to the first excited cluster when the oracle fits.
  bool record_fidelity = true;
};

inline void validate(const OptimizerOptions& o) {
  if (o.max_iterations < 1) throw domain_error("OptimizerOptions: max_iterations must be >= 1");
  if (!(o.grad_tol > 0) || !(o.cost_tol > 0) || !(o.fd_step > 0) || !(o.success_cost > 0) ||
      !(o.nonzero_threshold > 0))
    throw domain_error("OptimizerOptions: tolerances must be > 0");
  if (!(o.theta_init_scale >= 0)) throw domain_error("OptimizerOptions: theta_init_scale must be >= 0");
  if (o.pretrain_starts < 1) throw domain_error("OptimizerOptions: pretrain_starts must be >= 1");
  if (o.max_restarts < 0) throw domain_error("OptimizerOptions: max_restarts must be >= 0");
  if (o.block_count < 0) throw domain_error("OptimizerOptions: block_count must be >= 0");
  if (o.kappa && !(*o.kappa >= 0)) throw domain_error("OptimizerOptions: kappa must be >= 0");
}

enum class Stage { pretrain, main };

inline const char* to_string(Stage s) { return s == Stage::pretrain ? "pretrain" : "main"; }

struct IterationRecord {
  Stage stage;
  int step;
  double cost;
  double e_r;
  double e_i;
  double grad_norm;
  std::optional<double> fidelity;
  int offset_index = 0;  // m of the offset scan, 0 for the plain solver
};

struct GapResult {
  double e_r_final = 0;
  double e_i_final = 0;
  std::vector<double> theta_final;
  double gap = 0;
  bool converged = false;
  double final_cost = 0;
  double pretrain_cost = 0;
  int iterations = 0;  // accepted BFGS steps, summed over all attempts and offsets
  int attempts = 0;
  double kappa = 0;
  int block_count = 0;
  std::vector<IterationRecord> stage_traces;
  std::vector<double> offsets_tried;
};

namespace detail {

/// Uniform in [-scale, scale) from the raw 53 high bits; identical on every platform.
inline std::vector<double> random_theta(std::mt19937_64& rng, std::size_t n, double scale) {
  std::vector<double> t(n);
  for (auto& v : t) v = scale * (2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0);
  return t;
}

struct TwoStageOutcome {
  double e_r = 0;
  double e_i = 0;
  std::vector<double> theta;
  std::vector<double> pretrain_x;  // (theta', E_i) at the end of Stage 1
  double pretrain_cost = 0;
  double final_cost = 0;
  double trace_weight = 0;  // |<psi|B>|^2 of the final state
  int iterations = 0;
  std::vector<IterationRecord> records;
};

class TwoStageRunner {
 public:
  TwoStageRunner(const CostContext& ctx, const OptimizerOptions& opts,
                 const ExcitedProjector* projector)
      : ctx_(ctx), opts_(opts), projector_(projector) {
    bfgs_.max_iterations = opts.max_iterations;
    bfgs_.grad_tol = opts.grad_tol;
    bfgs_.cost_tol = opts.cost_tol;
  }

  TwoStageOutcome run(double e_r0, std::mt19937_64& rng, int offset_index) const {
    const std::size_t p = ctx_.parameter_count();

    // Stage 1: x = (theta, E_i), E_r frozen at e_r0.
    const Objective pre = [&](std::span<const double> x, std::span<double> g) {
      const auto cg = cost_and_gradient(ctx_, {e_r0, x[p]}, x.first(p), true, opts_.gradient,
                                        opts_.fd_step);
      std::copy(cg.gradient.begin(), cg.gradient.begin() + static_cast<std::ptrdiff_t>(p), g.begin());
      g[p] = cg.gradient[p + 1];
      return cg.cost;
    };
    std::optional<BfgsResult> best;
    for (int s = 0; s < opts_.pretrain_starts; ++s) {
      std::vector<double> x0 = random_theta(rng, p, opts_.theta_init_scale);
      x0.push_back(0.0);  // E_i
      BfgsResult r = bfgs_minimize(pre, std::move(x0), bfgs_);
      if (!best || r.cost < best->cost) best = std::move(r);
    }

    TwoStageOutcome out;
    out.pretrain_cost = best->cost;
    out.pretrain_x = best->x;
    for (const auto& it : best->trace)
      out.records.push_back(record(Stage::pretrain, it, e_r0, it.x[p], offset_index));

    // Stage 2: x = (theta, E_r, E_i), warm-started from Stage 1.
    const Objective main = [&](std::span<const double> x, std::span<double> g) {
      const auto cg = cost_and_gradient(ctx_, {x[p], x[p + 1]}, x.first(p), false, opts_.gradient,
                                        opts_.fd_step);
      std::copy(cg.gradient.begin(), cg.gradient.end(), g.begin());
      return cg.cost;
    };
    std::vector<double> x0(best->x.begin(), best->x.begin() + static_cast<std::ptrdiff_t>(p));
    x0.push_back(e_r0);
    x0.push_back(best->x[p]);
    const BfgsResult r2 = bfgs_minimize(main, std::move(x0), bfgs_);
    for (const auto& it : r2.trace)
      out.records.push_back(record(Stage::main, it, it.x[p], it.x[p + 1], offset_index));

    out.theta.assign(r2.x.begin(), r2.x.begin() + static_cast<std::ptrdiff_t>(p));
    out.e_r = r2.x[p];
    out.e_i = r2.x[p + 1];
    out.final_cost = r2.cost;
    out.trace_weight = std::norm(overlap(run_circuit(ctx_.ansatz(), out.theta), ctx_.bell()));
    out.iterations = best->iterations() + r2.iterations();
    return out;
  }

 private:
  IterationRecord record(Stage stage, const BfgsIterate& it, double e_r, double e_i,
                         int offset_index) const {
    IterationRecord rec{stage, it.step, it.cost, e_r, e_i, it.grad_norm, std::nullopt, offset_index};
    if (projector_) {
      const std::size_t p = ctx_.parameter_count();
      rec.fidelity = projector_->fidelity(
          run_circuit(ctx_.ansatz(), std::span<const double>(it.x.data(), p)));
    }
    return rec;
  }

  const CostContext& ctx_;
  const OptimizerOptions& opts_;
  const ExcitedProjector* projector_;
  BfgsOptions bfgs_;
};

struct PreparedProblem {
  CostContext ctx;
  std::optional<ExcitedProjector> projector;
};

inline PreparedProblem prepare(const LindbladModel& model, const OptimizerOptions& opts) {
  validate(opts);
  VectorizedLiouvillian l = vectorize(model);
  const int qubits = l.qubit_count();
  const int blocks = opts.block_count > 0 ? opts.block_count : qubits;
  const double kappa = opts.kappa ? *opts.kappa : default_kappa(l);
  std::optional<ExcitedProjector> projector;
  if (opts.record_fidelity && (Eigen::Index{1} << qubits) <= kMaxDenseDimension) {
    const SpectralResult s = dense_spectrum(l);
    if (s.first_excited() >= 0) projector.emplace(s);
  }
  return {CostContext(std::move(l), kappa, build_ansatz(qubits, blocks)), std::move(projector)};
}

inline void fill_result(GapResult& res, TwoStageOutcome&& o) {
  res.e_r_final = o.e_r;
  res.e_i_final = o.e_i;
  res.theta_final = std::move(o.theta);
  res.gap = std::abs(o.e_r);
  res.final_cost = o.final_cost;
  res.pretrain_cost = o.pretrain_cost;
}

}  // namespace detail

/// Two-stage solve with E_r0 = 0. Restarts (fresh random theta) when Stage 2
/// ends above `success_cost` or collapses onto the steady state.
inline GapResult solve_gap(const LindbladModel& model, const OptimizerOptions& opts = {}) {
  const detail::PreparedProblem prob = detail::prepare(model, opts);
  const detail::TwoStageRunner runner(prob.ctx, opts,
                                      prob.projector ? &*prob.projector : nullptr);
  std::mt19937_64 rng(opts.seed);

  GapResult res;
  res.kappa = prob.ctx.kappa();
  res.block_count = prob.ctx.ansatz().block_count;
  res.offsets_tried = {0.0};
  std::optional<detail::TwoStageOutcome> best;
  bool best_ok = false;
  for (int attempt = 0; attempt <= opts.max_restarts; ++attempt) {
    detail::TwoStageOutcome o = runner.run(0.0, rng, 0);
    res.attempts = attempt + 1;
    res.iterations += o.iterations;
    const bool ok = o.final_cost <= opts.success_cost && std::abs(o.e_r) > opts.nonzero_threshold;
    // Prefer a converged attempt, then one that left the steady state, then the lowest cost.
    auto rank = [&](const detail::TwoStageOutcome& t, bool good) {
      return std::make_tuple(good ? 0 : 1, std::abs(t.e_r) > opts.nonzero_threshold ? 0 : 1,
                             t.final_cost);
    };
    if (!best || rank(o, ok) < rank(*best, best_ok)) {
      best = std::move(o);
      best_ok = ok;
    }
    if (ok) break;
  }
  res.converged = best_ok;
  res.stage_traces = std::move(best->records);
  detail::fill_result(res, std::move(*best));
  return res;
}

/// Energy-offset scan: runs the two-stage solve from E_r0 = -m * delta_e for
/// m = 0, 1, ... until |E_r| exceeds `nonzero_threshold`. Each offset starts
/// from fresh random theta. An offset is retried (up to max_restarts) when
/// Stage 2 misses `success_cost` or collapses onto a trace-carrying state.
inline GapResult solve_gap_degenerate(const LindbladModel& model, double delta_e,
                                      const OptimizerOptions& opts = {}, int max_offsets = 20) {
  if (!(delta_e > 0)) throw domain_error("solve_gap_degenerate: delta_e must be > 0");
  if (max_offsets < 1) throw domain_error("solve_gap_degenerate: max_offsets must be >= 1");
  const detail::PreparedProblem prob = detail::prepare(model, opts);
  const detail::TwoStageRunner runner(prob.ctx, opts,
                                      prob.projector ? &*prob.projector : nullptr);
  std::mt19937_64 rng(opts.seed);

  GapResult res;
  res.kappa = prob.ctx.kappa();
  res.block_count = prob.ctx.ansatz().block_count;
  for (int m = 0; m < max_offsets; ++m) {
    const double e_r0 = m == 0 ? 0.0 : -m * delta_e;
    res.offsets_tried.push_back(e_r0);
    std::optional<detail::TwoStageOutcome> chosen;
    bool chosen_done = false;
    for (int attempt = 0; attempt <= opts.max_restarts; ++attempt) {
      detail::TwoStageOutcome o = runner.run(e_r0, rng, m);
      ++res.attempts;
      res.iterations += o.iterations;
      // Landing on E_r ~ 0 with trace-carrying weight means Stage 2 slid back
      // to the steady state the penalty excluded, not a zero-trace mode.
      const bool leaked = std::abs(o.e_r) <= opts.nonzero_threshold && o.trace_weight > kTraceWeightTol;
      const bool done = o.final_cost <= opts.success_cost && !leaked;
      if (!chosen || std::make_pair(!done, o.final_cost) < std::make_pair(!chosen_done, chosen->final_cost)) {
        chosen = std::move(o);
        chosen_done = done;
      }
      if (done) break;
    }
    res.stage_traces.insert(res.stage_traces.end(), chosen->records.begin(), chosen->records.end());
    const bool escaped = std::abs(chosen->e_r) > opts.nonzero_threshold;
    const double cost = chosen->final_cost;
    detail::fill_result(res, std::move(*chosen));
    if (escaped) {
      res.converged = cost <= opts.success_cost;
      return res;
    }
  }
  res.converged = false;
  return res;
}

}  // namespace lgap
