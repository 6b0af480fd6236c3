#pragma once

// Exact-diagonalization reference for the vectorized Liouvillian: sorted
// spectrum, steady-state degeneracy, gap and first-excited-mode fidelity.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lgap/dense_eig.hpp"
#include "lgap/errors.hpp"
#include "lgap/liouvillian.hpp"
#include "lgap/simulator.hpp"

namespace lgap {

inline constexpr double kDegeneracyTol = 1e-8;
/// Largest dense Liouvillian dimension handled by the oracle (N <= 4).
inline constexpr Eigen::Index kMaxDenseDimension = 256;
/// Real parts within this distance count as one excited cluster.
inline constexpr double kClusterTol = 1e-6;

struct SpectralResult {
  Eigen::VectorXcd eigenvalues;      // descending real part
  Eigen::MatrixXcd right_eigenvectors;  // unit-norm columns
  int zero_count = 0;                // |lambda| <= degeneracy_tol
  double degeneracy_tol = kDegeneracyTol;

  /// Index of the eigenvalue with the largest real part among |lambda| > tol,
  /// or -1 if every eigenvalue is near zero.
  Eigen::Index first_excited() const {
    for (Eigen::Index k = 0; k < eigenvalues.size(); ++k)
      if (std::abs(eigenvalues(k)) > degeneracy_tol) return k;
    return -1;
  }

  double gap() const {
    const Eigen::Index k = first_excited();
    return k < 0 ? 0.0 : std::abs(eigenvalues(k).real());
  }

  /// Indices sharing the first excited real part within kClusterTol.
  std::vector<Eigen::Index> excited_cluster() const {
    std::vector<Eigen::Index> out;
    const Eigen::Index first = first_excited();
    if (first < 0) return out;
    const double re = eigenvalues(first).real();
    for (Eigen::Index k = 0; k < eigenvalues.size(); ++k)
      if (std::abs(eigenvalues(k)) > degeneracy_tol &&
          std::abs(eigenvalues(k).real() - re) <= kClusterTol)
        out.push_back(k);
    return out;
  }
};

/// Eigen-decomposition of a dense matrix sorted by descending real part (ties
/// by ascending imaginary part).
inline SpectralResult sorted_spectrum(const Eigen::MatrixXcd& m, double degeneracy_tol = kDegeneracyTol) {
  const EigenDecomposition dec = eigen_decompose(m);
  const Eigen::Index n = dec.values.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  auto key = [&](Eigen::Index k) { return std::llround(dec.values(k).real() * 1e8); };
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const auto ka = key(a), kb = key(b);
    if (ka != kb) return ka > kb;
    return dec.values(a).imag() < dec.values(b).imag();
  });
  SpectralResult r;
  r.degeneracy_tol = degeneracy_tol;
  r.eigenvalues.resize(n);
  r.right_eigenvectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index k = order[static_cast<std::size_t>(i)];
    r.eigenvalues(i) = dec.values(k);
    r.right_eigenvectors.col(i) = dec.vectors.col(k);
    if (std::abs(dec.values(k)) <= degeneracy_tol) ++r.zero_count;
  }
  return r;
}

inline Eigen::MatrixXcd dense_liouvillian(const VectorizedLiouvillian& l) {
  const Eigen::Index dim = Eigen::Index{1} << l.qubit_count();
  if (dim > kMaxDenseDimension)
    throw capacity_error("dense Liouvillian of dimension " + std::to_string(dim) +
                         " exceeds the oracle limit " + std::to_string(kMaxDenseDimension));
  return to_dense(l.op);
}

inline SpectralResult dense_spectrum(const VectorizedLiouvillian& l,
                                     double degeneracy_tol = kDegeneracyTol) {
  return sorted_spectrum(dense_liouvillian(l), degeneracy_tol);
}

struct GapReference {
  double gap;
  int degeneracy;
};

inline GapReference exact_gap(const LindbladModel& model, double degeneracy_tol = kDegeneracyTol) {
  const SpectralResult s = dense_spectrum(vectorize(model), degeneracy_tol);
  if (s.first_excited() < 0)
    throw domain_error("exact_gap: every eigenvalue lies within the degeneracy tolerance");
  return {s.gap(), s.zero_count};
}

/// Orthogonal projector onto the span of the first excited cluster's right
/// eigenvectors; built once, evaluated per iterate.
class ExcitedProjector {
 public:
  ExcitedProjector() = default;

  explicit ExcitedProjector(const SpectralResult& s) {
    const auto cluster = s.excited_cluster();
    const Eigen::Index n = s.right_eigenvectors.rows();
    basis_.resize(n, 0);
    for (Eigen::Index k : cluster) {
      Eigen::VectorXcd v = s.right_eigenvectors.col(k);
      for (int pass = 0; pass < 2; ++pass)
        for (Eigen::Index j = 0; j < basis_.cols(); ++j) v -= basis_.col(j) * basis_.col(j).dot(v);
      const double nv = v.norm();
      if (nv < 1e-8) continue;  // linearly dependent member
      basis_.conservativeResize(Eigen::NoChange, basis_.cols() + 1);
      basis_.col(basis_.cols() - 1) = v / nv;
    }
  }

  Eigen::Index rank() const { return basis_.cols(); }

  /// ||P psi||^2 / ||psi||^2
  double fidelity(const Statevector& psi) const {
    if (psi.dimension() != basis_.rows())
      throw dimension_error("fidelity_to_excited: state dimension mismatch");
    return (basis_.adjoint() * psi.amplitudes()).squaredNorm() / psi.amplitudes().squaredNorm();
  }

 private:
  Eigen::MatrixXcd basis_;
};

inline double fidelity_to_excited(const Statevector& psi, const LindbladModel& model) {
  return ExcitedProjector(dense_spectrum(vectorize(model))).fidelity(psi);
}

}  // namespace lgap
