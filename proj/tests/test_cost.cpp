#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lgap/checks.hpp"
#include "lgap/cost.hpp"

using namespace lgap;

namespace {

LindbladModel decay_model() {
  return make_lindblad_model(1, PauliSum(1), {{1.0, lowering_operator(1, 0)}});
}

VectorizedLiouvillian xxz2() { return vectorize(build_xxz_model(2, 0.5, 1.0, JumpKind::lowering)); }

std::vector<double> random_theta(oracle::Rng& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> t(n);
  for (auto& v : t) v = u(rng);
  return t;
}

}  // namespace

TEST(Kappa, Defaults) {
  EXPECT_EQ(default_kappa(xxz2()), 4.0);
  EXPECT_EQ(default_kappa(xxz2(), 4), 16.0);
  const LindbladModel single = make_lindblad_model(1, PauliSum::single(1, 0, 'Z'), {});
  // -i ZI + i IZ has two terms
  EXPECT_EQ(default_kappa(vectorize(single)), 4.0);
  EXPECT_EQ(default_kappa(vectorize(decay_model())), 49.0);
}

TEST(Kappa, SingleTermGivesOne) {
  // Dephasing at rate 1 on a single spin with H = 0: L = ZZ - II, two terms.
  const LindbladModel deph = make_lindblad_model(1, PauliSum(1), {{1.0, PauliSum::single(1, 0, 'Z')}});
  VectorizedLiouvillian l = vectorize(deph);
  ASSERT_EQ(l.op.size(), 2u);
  l.op = PauliSum(2, {l.op.terms()[0]});
  EXPECT_EQ(default_kappa(l), 1.0);
}

TEST(Cost, LoweringOperatorOnUpState) {
  // A = sigma^- on qubit 0 of a two-qubit register, psi = |00>: f = |10>, cost 1.
  const VectorizedLiouvillian a{lowering_operator(2, 0), decay_model()};
  const CostContext ctx(a, 4.0, build_ansatz(2, 1));
  EXPECT_NEAR(variance_cost(ctx, {0, 0}, Statevector(2)), 1.0, 1e-14);
}

TEST(Cost, DecaySteadyStateHasZeroCost) {
  const CostContext ctx(vectorize(decay_model()), 1.0, build_ansatz(2, 1));
  // |1><1| vectorizes to index 1 + 2*1.
  EXPECT_LT(variance_cost(ctx, {0, 0}, Statevector::basis(2, 3)), 1e-10);
  // |0><0| evolves to |1><1| - |0><0|.
  EXPECT_NEAR(variance_cost(ctx, {0, 0}, Statevector(2)), 2.0, 1e-14);
}

TEST(Cost, PenaltyOnBellAndOrthogonalStates) {
  const CostContext ctx(vectorize(decay_model()), 4.0, build_ansatz(2, 1));
  const Statevector b = bell_state(1);
  EXPECT_NEAR(penalized_cost(ctx, {0.1, 0.2}, b), variance_cost(ctx, {0.1, 0.2}, b) + 4, 1e-14);
  const Statevector orth(2, Eigen::Vector4cd(1, 0, 0, -1) / std::sqrt(2.0));
  EXPECT_EQ(penalized_cost(ctx, {0.1, 0.2}, orth), variance_cost(ctx, {0.1, 0.2}, orth));
}

TEST(Cost, ZeroAtExactEigenpair) {
  const VectorizedLiouvillian l = xxz2();
  const SpectralResult s = dense_spectrum(l);
  const Eigen::Index k = s.first_excited();
  const Statevector v(4, s.right_eigenvectors.col(k));
  const CostContext ctx(l, 4.0, build_ansatz(4, 1));
  EXPECT_LT(variance_cost(ctx, {s.eigenvalues(k).real(), s.eigenvalues(k).imag()}, v), 1e-20);
}

TEST(Cost, ContextValidation) {
  EXPECT_THROW(CostContext(xxz2(), 1.0, build_ansatz(3, 1)), dimension_error);
  EXPECT_THROW(CostContext(xxz2(), bell_state(1), 1.0, build_ansatz(4, 1)), dimension_error);
  EXPECT_THROW(CostContext(xxz2(), -1.0, build_ansatz(4, 1)), domain_error);
}

TEST(CostProperty, NonNegativeAndExpansionEquivalent) {
  oracle::Rng rng(31);
  std::normal_distribution<double> n(0, 2);
  const VectorizedLiouvillian l = xxz2();
  const CostContext ctx(l, 0.0, build_ansatz(4, 1));
  for (int trial = 0; trial < 1000; ++trial)
    EXPECT_GE(variance_cost(ctx, {n(rng), n(rng)}, oracle::random_state(rng, 4)), -1e-12);
  for (int trial = 0; trial < 10; ++trial) {
    const EnergyParam e{n(rng), n(rng)};
    const PauliSum shifted = l.op - PauliSum::identity(4, e.value());
    const PauliSum m = sum_multiply(adjoint(shifted), shifted);
    const Statevector psi = oracle::random_state(rng, 4);
    EXPECT_LT(std::abs(expectation(m, psi) - variance_cost(ctx, e, psi)), 1e-10);
  }
}

TEST(CostProperty, ExpectationMinimizesOverEnergy) {
  oracle::Rng rng(32);
  std::normal_distribution<double> n(0, 1);
  const VectorizedLiouvillian l = xxz2();
  const CostContext ctx(l, 0.0, build_ansatz(4, 1));
  for (int trial = 0; trial < 5; ++trial) {
    const Statevector psi = oracle::random_state(rng, 4);
    const complex best = expectation(l.op, psi);
    const double c0 = variance_cost(ctx, {best.real(), best.imag()}, psi);
    for (int k = 0; k < 100; ++k)
      EXPECT_LE(c0, variance_cost(ctx, {best.real() + n(rng), best.imag() + n(rng)}, psi) + 1e-12);
    // Quadratic in E: C(E) = C(<L>) + |E - <L>|^2 for a unit state.
    EXPECT_NEAR(variance_cost(ctx, {best.real() + 0.3, best.imag() - 0.4}, psi), c0 + 0.25, 1e-10);
  }
}

TEST(Gradient, EnergyComponentsMatchFiniteDifferences) {
  oracle::Rng rng(33);
  const CostContext ctx(xxz2(), 4.0, build_ansatz(4, 2));
  for (int trial = 0; trial < 10; ++trial) {
    const auto theta = random_theta(rng, ctx.parameter_count());
    const EnergyParam e{0.2 * trial - 1, 0.5};
    const bool pen = trial % 2;
    const auto g = cost_gradient(ctx, e, theta, pen);
    const double h = 1e-6;
    const std::size_t p = theta.size();
    EXPECT_NEAR(g[p], (circuit_cost(ctx, {e.re + h, e.im}, theta, pen) - circuit_cost(ctx, {e.re - h, e.im}, theta, pen)) / (2 * h), 1e-6);
    EXPECT_NEAR(g[p + 1], (circuit_cost(ctx, {e.re, e.im + h}, theta, pen) - circuit_cost(ctx, {e.re, e.im - h}, theta, pen)) / (2 * h), 1e-6);
  }
}

TEST(Gradient, ThetaComponentsMatchNaiveDifferencesAndAdjoint) {
  oracle::Rng rng(34);
  const CostContext ctx(xxz2(), 4.0, build_ansatz(4, 1));
  const auto theta = random_theta(rng, ctx.parameter_count());
  const EnergyParam e{-0.4, 0.9};
  const auto fd = cost_gradient(ctx, e, theta, true, GradientMethod::finite_difference);
  const auto adj = cost_gradient(ctx, e, theta, true, GradientMethod::adjoint);
  ASSERT_EQ(fd.size(), theta.size() + 2);
  for (std::size_t k = 0; k < theta.size(); ++k) {
    auto plus = theta, minus = theta;
    plus[k] += 1e-5;
    minus[k] -= 1e-5;
    const double naive = (circuit_cost(ctx, e, plus, true) - circuit_cost(ctx, e, minus, true)) / 2e-5;
    EXPECT_NEAR(fd[k], naive, 1e-9) << k;
    EXPECT_NEAR(adj[k], fd[k], 1e-6) << k;
  }
}

TEST(Gradient, VanishesAtGlobalMinimum) {
  // Rx(pi/2) on both qubits prepares the decay steady state |1><1|.
  const CostContext ctx(vectorize(decay_model()), 0.0, build_ansatz(2, 1));
  std::vector<double> theta(ctx.parameter_count(), 0.0);
  theta[2] = theta[3] = std::acos(-1.0) / 2;
  const auto cg = cost_and_gradient(ctx, {0, 0}, theta, false);
  EXPECT_LT(cg.cost, 1e-20);
  double norm = 0;
  for (double g : cg.gradient) norm += g * g;
  EXPECT_LE(std::sqrt(norm), 1e-6);
}
