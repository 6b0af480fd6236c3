#include <gtest/gtest.h>

#include <cmath>

#include "lgap/solver.hpp"

using namespace lgap;

namespace {

LindbladModel decay_model() {
  return make_lindblad_model(1, PauliSum(1), {{1.0, lowering_operator(1, 0)}});
}

LindbladModel xxz2() { return build_xxz_model(2, 0.5, 1.0, JumpKind::lowering); }

}  // namespace

TEST(SolveGap, SingleQubitDecay) {
  const GapResult r = solve_gap(decay_model());
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.gap, 0.5, 1e-3);
  EXPECT_EQ(r.block_count, 2);
  EXPECT_EQ(r.kappa, 49.0);
  ASSERT_EQ(r.offsets_tried.size(), 1u);
}

TEST(SolveGap, XxzTwoSpinsAgainstExactGap) {
  const LindbladModel m = xxz2();
  const GapResult r = solve_gap(m);
  const double ed = exact_gap(m).gap;
  ASSERT_TRUE(r.converged);
  EXPECT_LE(std::abs(r.gap - ed) / ed, 1e-2);
  EXPECT_EQ(r.block_count, 4);
  EXPECT_EQ(r.theta_final.size(), 56u);
  ASSERT_FALSE(r.stage_traces.empty());
  const IterationRecord& last = r.stage_traces.back();
  EXPECT_EQ(last.stage, Stage::main);
  ASSERT_TRUE(last.fidelity.has_value());
  EXPECT_GT(*last.fidelity, 0.99);
}

TEST(SolveGap, PretrainingNeverMovesRealEnergy) {
  const GapResult r = solve_gap(xxz2());
  int pre = 0;
  for (const auto& rec : r.stage_traces)
    if (rec.stage == Stage::pretrain) {
      ++pre;
      EXPECT_EQ(rec.e_r, 0.0);
    }
  EXPECT_GT(pre, 0);
}

TEST(SolveGap, MainStageStartsFromPretrainedState) {
  const LindbladModel m = xxz2();
  OptimizerOptions opts;
  const detail::PreparedProblem prob = detail::prepare(m, opts);
  const detail::TwoStageRunner runner(prob.ctx, opts, nullptr);
  std::mt19937_64 rng(opts.seed);
  const detail::TwoStageOutcome o = runner.run(0.0, rng, 0);
  const std::size_t p = prob.ctx.parameter_count();
  const std::span<const double> theta(o.pretrain_x.data(), p);
  const Statevector psi = run_circuit(prob.ctx.ansatz(), theta);
  const double e_i = o.pretrain_x[p];
  EXPECT_NEAR(penalized_cost(prob.ctx, {0, e_i}, psi), o.pretrain_cost, 1e-12);

  const IterationRecord* first_main = nullptr;
  for (const auto& rec : o.records)
    if (rec.stage == Stage::main) {
      first_main = &rec;
      break;
    }
  ASSERT_NE(first_main, nullptr);
  EXPECT_EQ(first_main->step, 0);
  EXPECT_NEAR(first_main->cost, o.pretrain_cost - prob.ctx.penalty(psi), 1e-10);
  EXPECT_EQ(first_main->e_i, e_i);
}

TEST(SolveGap, DeterministicForFixedSeed) {
  OptimizerOptions opts;
  opts.seed = 123;
  const GapResult a = solve_gap(xxz2(), opts);
  const GapResult b = solve_gap(xxz2(), opts);
  ASSERT_EQ(a.stage_traces.size(), b.stage_traces.size());
  for (std::size_t k = 0; k < a.stage_traces.size(); ++k) {
    EXPECT_EQ(a.stage_traces[k].cost, b.stage_traces[k].cost);
    EXPECT_EQ(a.stage_traces[k].e_r, b.stage_traces[k].e_r);
    EXPECT_EQ(a.stage_traces[k].e_i, b.stage_traces[k].e_i);
  }
  EXPECT_EQ(a.theta_final, b.theta_final);
}

TEST(SolveGap, OptionValidation) {
  OptimizerOptions bad;
  bad.max_iterations = 0;
  EXPECT_THROW(solve_gap(decay_model(), bad), domain_error);
  bad = {};
  bad.pretrain_starts = 0;
  EXPECT_THROW(solve_gap(decay_model(), bad), domain_error);
  bad = {};
  bad.kappa = -1;
  EXPECT_THROW(solve_gap(decay_model(), bad), domain_error);
}

TEST(SolveGapDegenerate, UniqueSteadyStateStopsAtFirstOffset) {
  const LindbladModel m = xxz2();
  const GapResult plain = solve_gap(m);
  const GapResult scan = solve_gap_degenerate(m, 0.3);
  ASSERT_EQ(scan.offsets_tried.size(), 1u);
  EXPECT_EQ(scan.offsets_tried[0], 0.0);
  EXPECT_TRUE(scan.converged);
  EXPECT_NEAR(scan.gap, plain.gap, 1e-3);
}

TEST(SolveGapDegenerate, DephasingEscapesTheSteadyManifold) {
  const LindbladModel m = build_xxz_model(2, 1.0, 1.0, JumpKind::dephasing);
  const GapResult r = solve_gap_degenerate(m, 0.3);
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.gap, exact_gap(m).gap, 1e-2 * exact_gap(m).gap);
  ASSERT_GE(r.offsets_tried.size(), 2u);
  for (std::size_t k = 0; k < r.offsets_tried.size(); ++k) EXPECT_NEAR(r.offsets_tried[k], -0.3 * k, 1e-15);
  // Every earlier offset ended on the zero-trace steady manifold.
  const int last = static_cast<int>(r.offsets_tried.size()) - 1;
  double prev_final = 0;
  int prev = -1;
  for (const auto& rec : r.stage_traces) {
    if (rec.offset_index != prev && prev >= 0) {
      EXPECT_LE(std::abs(prev_final), 1e-3) << "offset " << prev;
    }
    prev = rec.offset_index;
    if (rec.stage == Stage::main) prev_final = rec.e_r;
  }
  EXPECT_EQ(prev, last);
  EXPECT_GT(*r.stage_traces.back().fidelity, 0.99);
}

TEST(SolveGapDegenerate, RejectsBadArguments) {
  EXPECT_THROW(solve_gap_degenerate(xxz2(), 0.0), domain_error);
  EXPECT_THROW(solve_gap_degenerate(xxz2(), 0.3, {}, 0), domain_error);
}
