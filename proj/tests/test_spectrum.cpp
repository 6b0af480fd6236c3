#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "lgap/checks.hpp"
#include "lgap/dense_eig.hpp"
#include "lgap/spectrum.hpp"

using namespace lgap;

namespace {

LindbladModel decay_model() {
  return make_lindblad_model(1, PauliSum(1), {{1.0, lowering_operator(1, 0)}});
}

std::vector<double> sorted_real(const Eigen::VectorXcd& v) {
  std::vector<double> out;
  for (const auto& z : v) out.push_back(z.real());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(DenseEig, HermitianMatchesSelfAdjointSolver) {
  oracle::Rng rng(41);
  for (int n : {1, 2, 5, 16, 40}) {
    const Eigen::MatrixXcd g = oracle::random_matrix(rng, n);
    const Eigen::MatrixXcd h = g + g.adjoint();
    const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h).eigenvalues();
    const EigenDecomposition d = eigen_decompose(h);
    const auto ours = sorted_real(d.values);
    for (int k = 0; k < n; ++k) EXPECT_NEAR(ours[k], ref(k), 1e-10 * std::max(1.0, std::abs(ref(k))));
    for (int k = 0; k < n; ++k) EXPECT_LT(std::abs(d.values(k).imag()), 1e-10);
  }
}

TEST(DenseEig, GeneralMatrixResidualsAndSpectrum) {
  oracle::Rng rng(42);
  for (int n : {3, 8, 30, 64}) {
    const Eigen::MatrixXcd a = oracle::random_matrix(rng, n);
    const EigenDecomposition d = eigen_decompose(a);
    for (int k = 0; k < n; ++k) {
      EXPECT_NEAR(d.vectors.col(k).norm(), 1.0, 1e-12);
      EXPECT_LT((a * d.vectors.col(k) - d.values(k) * d.vectors.col(k)).norm(), 1e-9 * a.norm());
    }
    const Eigen::VectorXcd ref = Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(a, false).eigenvalues();
    for (int k = 0; k < n; ++k) {
      double best = 1e300;
      for (int j = 0; j < n; ++j) best = std::min(best, std::abs(ref(j) - d.values(k)));
      EXPECT_LT(best, 1e-9);
    }
  }
}

TEST(DenseEig, CharacteristicPolynomialVanishes) {
  const Eigen::MatrixXcd l = to_dense(vectorize(decay_model()).op);
  const EigenDecomposition d = eigen_decompose(l);
  for (const auto& lam : d.values)
    EXPECT_LT(std::abs((l - lam * Eigen::MatrixXcd::Identity(4, 4)).determinant()), 1e-12);
}

TEST(DenseEig, PhaseConvention) {
  oracle::Rng rng(43);
  const EigenDecomposition d = eigen_decompose(oracle::random_matrix(rng, 6));
  for (Eigen::Index k = 0; k < 6; ++k) {
    Eigen::Index imax = 0;
    d.vectors.col(k).cwiseAbs().maxCoeff(&imax);
    EXPECT_NEAR(d.vectors(imax, k).imag(), 0, 1e-14);
    EXPECT_GT(d.vectors(imax, k).real(), 0);
  }
  EXPECT_THROW(eigen_decompose(Eigen::MatrixXcd::Zero(2, 3)), dimension_error);
}

TEST(Spectrum, SingleQubitDecay) {
  const SpectralResult s = dense_spectrum(vectorize(decay_model()));
  const double expected[] = {0, -0.5, -0.5, -1};
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(s.eigenvalues(k).real(), expected[k], 1e-9);
    EXPECT_NEAR(s.eigenvalues(k).imag(), 0, 1e-9);
  }
  EXPECT_EQ(s.zero_count, 1);
  EXPECT_NEAR(s.gap(), 0.5, 1e-12);
  EXPECT_EQ(s.excited_cluster().size(), 2u);
}

TEST(Spectrum, XxzLoweringGapIsHalfGamma) {
  for (int n : {2, 3})
    for (double gamma : {0.5, 1.0, 2.0}) {
      const GapReference g = exact_gap(build_xxz_model(n, 0.5, gamma, JumpKind::lowering));
      EXPECT_NEAR(g.gap, gamma / 2, 1e-8) << "N=" << n << " gamma=" << gamma;
      EXPECT_EQ(g.degeneracy, 1);
    }
}

TEST(Spectrum, DephasingIsDegenerate) {
  const GapReference g = exact_gap(build_xxz_model(2, 1.0, 1.0, JumpKind::dephasing));
  EXPECT_GE(g.degeneracy, 2);
  EXPECT_EQ(g.degeneracy, 3);
  EXPECT_NEAR(g.gap, 2.0, 1e-8);
}

TEST(Spectrum, SortingAndSanity) {
  oracle::Rng rng(44);
  for (int trial = 0; trial < 6; ++trial) {
    const LindbladModel m = oracle::random_model(rng, 1 + trial % 2);
    const SpectralResult s = dense_spectrum(vectorize(m));
    EXPECT_LE(s.eigenvalues.real().maxCoeff(), 1e-9);
    EXPECT_LE(s.eigenvalues.cwiseAbs().minCoeff(), 1e-9);
    for (Eigen::Index k = 1; k < s.eigenvalues.size(); ++k)
      EXPECT_LE(s.eigenvalues(k).real(), s.eigenvalues(k - 1).real() + 1e-8);
  }
}

TEST(Spectrum, ResidualsAndBellStructure) {
  for (const auto& m : oracle::built_models(2)) {
    const VectorizedLiouvillian l = vectorize(m);
    const Eigen::MatrixXcd dense = dense_liouvillian(l);
    const SpectralResult s = dense_spectrum(l);
    const Statevector b = bell_state(m.spin_count);
    for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) {
      const Eigen::VectorXcd v = s.right_eigenvectors.col(k);
      EXPECT_LT((dense * v - s.eigenvalues(k) * v).norm(), 1e-8);
      if (std::abs(s.eigenvalues(k)) > s.degeneracy_tol) {
        EXPECT_LT(std::abs(b.amplitudes().dot(v)), 1e-8);
      } else if (s.zero_count == 1) {
        EXPECT_GT(std::abs(b.amplitudes().dot(v)), 1e-3);
      }
    }
  }
}

TEST(Spectrum, KroneckerAssemblyAgrees) {
  oracle::Rng rng(45);
  for (int trial = 0; trial < 5; ++trial) {
    const LindbladModel m = oracle::random_model(rng, 1);
    EXPECT_LT((dense_liouvillian(vectorize(m)) - oracle::kronecker_liouvillian(m)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Spectrum, Errors) {
  EXPECT_THROW(dense_liouvillian(vectorize(build_xxz_model(5, 1, 1, JumpKind::lowering))), capacity_error);
  const LindbladModel trivial = make_lindblad_model(1, PauliSum(1), {});
  EXPECT_THROW(exact_gap(trivial), domain_error);
}

TEST(Fidelity, ExcitedModeAndSteadyState) {
  const LindbladModel m = build_xxz_model(2, 0.5, 1.0, JumpKind::lowering);
  const SpectralResult s = dense_spectrum(vectorize(m));
  const ExcitedProjector proj(s);
  EXPECT_GE(proj.rank(), 1);
  const Eigen::Index k = s.first_excited();
  EXPECT_NEAR(proj.fidelity(Statevector(4, s.right_eigenvectors.col(k))), 1.0, 1e-12);
  const double steady = fidelity_to_excited(Statevector(4, s.right_eigenvectors.col(0)), m);
  EXPECT_LT(steady, 1.0);
  EXPECT_GE(steady, 0.0);
  EXPECT_THROW(proj.fidelity(Statevector(2)), dimension_error);
}
