#pragma once

// Dense complex non-Hermitian eigensolver.
//
//   1. diagonal balancing by powers of two,
//   2. Householder reduction to upper Hessenberg form,
//   3. shifted QR iteration (Wilkinson shift, Givens rotations) for the eigenvalues,
//   4. inverse iteration on the Hessenberg matrix for right eigenvectors,
//      back-transformed through the Householder reflectors and the balancing.
//
// Eigenvectors of equal (clustered) eigenvalues are kept linearly independent
// by orthogonalizing each new iterate against the earlier members of the cluster.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lgap/errors.hpp"

namespace lgap {

struct EigenOptions {
  int max_qr_sweeps_per_eigenvalue = 60;
  int inverse_iterations = 3;
  /// Eigenvalues closer than this share an eigenvector cluster.
  double cluster_tol = 1e-7;
  bool balance = true;
};

struct EigenDecomposition {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;  // column k pairs with values(k), unit 2-norm
};

namespace detail {

inline double abs1(std::complex<double> z) { return std::abs(z.real()) + std::abs(z.imag()); }

/// Scales A <- D^-1 A D with D diagonal powers of two so that row and column
/// off-diagonal norms are comparable. Returns D.
inline Eigen::VectorXd balance(Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
  constexpr double radix = 2.0;
  bool changed = true;
  for (int sweep = 0; changed && sweep < 100; ++sweep) {
    changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0, r = 0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += abs1(a(j, i));
        r += abs1(a(i, j));
      }
      if (c == 0 || r == 0) continue;
      double g = r / radix, f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c >= g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        changed = true;
        d(i) *= f;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
  return d;
}

/// In-place reduction to upper Hessenberg form. Reflector k (acting on rows
/// k+1..n-1) is returned as column k of `v`, scaled so H_k = I - 2 v v^H.
inline Eigen::MatrixXcd hessenberg_reduce(Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(n, std::max<Eigen::Index>(n - 2, 0));
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index m = n - k - 1;
    Eigen::VectorXcd x = a.block(k + 1, k, m, 1);
    const double xnorm = x.norm();
    if (xnorm == 0) continue;
    const std::complex<double> x0 = x(0);
    const std::complex<double> phase = std::abs(x0) == 0 ? 1.0 : x0 / std::abs(x0);
    x(0) += phase * xnorm;
    const double un = x.norm();
    if (un == 0) continue;
    x /= un;
    v.block(k + 1, k, m, 1) = x;
    // A <- H A H with H = I - 2 x x^H on rows/cols k+1..n-1.
    auto rows = a.block(k + 1, 0, m, n);
    rows -= 2.0 * x * (x.adjoint() * rows);
    auto cols = a.block(0, k + 1, n, m);
    cols -= 2.0 * (cols * x) * x.adjoint();
    a.block(k + 2, k, m - 1, 1).setZero();
  }
  return v;
}

/// Eigenvalues of an upper Hessenberg matrix by explicitly shifted QR.
inline Eigen::VectorXcd hessenberg_eigenvalues(Eigen::MatrixXcd h, const EigenOptions& opts) {
  using cd = std::complex<double>;
  const Eigen::Index n = h.rows();
  Eigen::VectorXcd eig(n);
  const double eps = std::numeric_limits<double>::epsilon();
  const double hnorm = std::max(h.cwiseAbs().sum(), std::numeric_limits<double>::min());
  std::vector<double> cs(static_cast<std::size_t>(n));
  std::vector<cd> sn(static_cast<std::size_t>(n));

  Eigen::Index hi = n - 1;
  int its = 0;
  long total = 0;
  const long cap = static_cast<long>(opts.max_qr_sweeps_per_eigenvalue) * std::max<Eigen::Index>(n, 1);
  while (hi >= 0) {
    Eigen::Index l = hi;
    for (; l > 0; --l) {
      double tst = abs1(h(l - 1, l - 1)) + abs1(h(l, l));
      if (tst == 0) tst = hnorm;
      if (abs1(h(l, l - 1)) <= eps * tst) {
        h(l, l - 1) = 0;
        break;
      }
    }
    if (l == hi) {
      eig(hi) = h(hi, hi);
      --hi;
      its = 0;
      continue;
    }
    if (++total > cap)
      throw numerical_error("dense eigensolver: QR iteration did not converge after " +
                            std::to_string(total) + " sweeps");
    ++its;

    // Wilkinson shift from the trailing 2x2 of the active block; exceptional
    // shifts break rare cycles.
    cd mu;
    if (its % 11 == 10) {
      mu = h(hi, hi) + cd(std::abs(h(hi, hi - 1).real()), std::abs(h(hi, hi - 1).imag()));
    } else {
      const cd a = h(hi - 1, hi - 1), b = h(hi - 1, hi), c = h(hi, hi - 1), d = h(hi, hi);
      const cd tr_half = 0.5 * (a + d);
      const cd disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
      const cd r1 = tr_half + disc, r2 = tr_half - disc;
      mu = std::abs(r1 - d) < std::abs(r2 - d) ? r1 : r2;
    }

    for (Eigen::Index k = l; k <= hi; ++k) h(k, k) -= mu;
    // QR by Givens rotations from the left.
    for (Eigen::Index k = l; k < hi; ++k) {
      const cd a = h(k, k), b = h(k + 1, k);
      const double aa = std::abs(a), r = std::hypot(aa, std::abs(b));
      double c;
      cd s;
      if (r == 0) {
        c = 1;
        s = 0;
      } else if (aa == 0) {
        c = 0;
        s = 1;
      } else {
        c = aa / r;
        s = (a / aa) * std::conj(b) / r;
      }
      const auto ku = static_cast<std::size_t>(k);
      cs[ku] = c;
      sn[ku] = s;
      for (Eigen::Index j = k; j <= hi; ++j) {
        const cd t0 = h(k, j), t1 = h(k + 1, j);
        h(k, j) = c * t0 + s * t1;
        h(k + 1, j) = -std::conj(s) * t0 + c * t1;
      }
    }
    // RQ: apply the adjoint rotations from the right.
    for (Eigen::Index k = l; k < hi; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      const double c = cs[ku];
      const cd s = sn[ku];
      const Eigen::Index top = std::min(k + 2, hi);
      for (Eigen::Index i = l; i <= top; ++i) {
        const cd t0 = h(i, k), t1 = h(i, k + 1);
        h(i, k) = c * t0 + std::conj(s) * t1;
        h(i, k + 1) = -s * t0 + c * t1;
      }
    }
    for (Eigen::Index k = l; k <= hi; ++k) h(k, k) += mu;
  }
  return eig;
}

/// Solves (H - mu I) x = b for upper Hessenberg H by Gaussian elimination with
/// partial pivoting between adjacent rows. Zero pivots are replaced by `tiny`.
inline Eigen::VectorXcd hessenberg_shifted_solve(const Eigen::MatrixXcd& h, std::complex<double> mu,
                                                 Eigen::VectorXcd b, double tiny) {
  const Eigen::Index n = h.rows();
  Eigen::MatrixXcd u = h;
  for (Eigen::Index k = 0; k < n; ++k) u(k, k) -= mu;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (detail::abs1(u(k + 1, k)) > detail::abs1(u(k, k))) {
      u.row(k).segment(k, n - k).swap(u.row(k + 1).segment(k, n - k));
      std::swap(b(k), b(k + 1));
    }
    if (u(k, k) == 0.0) u(k, k) = tiny;
    const std::complex<double> m = u(k + 1, k) / u(k, k);
    if (m != 0.0) {
      u.row(k + 1).segment(k, n - k) -= m * u.row(k).segment(k, n - k);
      b(k + 1) -= m * b(k);
    }
  }
  if (u(n - 1, n - 1) == 0.0) u(n - 1, n - 1) = tiny;
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    std::complex<double> s = b(k);
    for (Eigen::Index j = k + 1; j < n; ++j) s -= u(k, j) * b(j);
    b(k) = s / u(k, k);
  }
  return b;
}

/// Deterministic start vector for inverse iteration number `seed`.
inline Eigen::VectorXcd start_vector(Eigen::Index n, std::size_t seed) {
  Eigen::VectorXcd v(n);
  std::uint64_t state = 0x9E3779B97F4A7C15ULL * (seed + 1);
  auto next = [&] {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return static_cast<double>(state >> 11) / 9007199254740992.0 - 0.5;
  };
  for (Eigen::Index i = 0; i < n; ++i) v(i) = {1.0 + next(), next()};
  return v / v.norm();
}

}  // namespace detail

/// Full eigen-decomposition of a general complex matrix. Eigenvalues are
/// returned in the order the QR iteration deflates them.
inline EigenDecomposition eigen_decompose(const Eigen::MatrixXcd& matrix, const EigenOptions& opts = {}) {
  const Eigen::Index n = matrix.rows();
  if (n != matrix.cols()) throw dimension_error("eigen_decompose: matrix is not square");
  EigenDecomposition out;
  if (n == 0) return out;

  Eigen::MatrixXcd a = matrix;
  const Eigen::VectorXd scale = opts.balance ? detail::balance(a) : Eigen::VectorXd::Ones(n);
  const Eigen::MatrixXcd reflectors = detail::hessenberg_reduce(a);
  const Eigen::MatrixXcd& h = a;
  out.values = detail::hessenberg_eigenvalues(h, opts);

  const double hnorm = std::max(h.cwiseAbs().sum(), 1.0);
  const double tiny = std::numeric_limits<double>::epsilon() * hnorm;
  out.vectors.resize(n, n);
  std::vector<Eigen::VectorXcd> hess_vectors(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    const std::complex<double> lam = out.values(k);
    std::vector<Eigen::Index> cluster;
    for (Eigen::Index j = 0; j < k; ++j)
      if (std::abs(out.values(j) - lam) <= opts.cluster_tol * std::max(1.0, std::abs(lam)))
        cluster.push_back(j);
    Eigen::VectorXcd x = detail::start_vector(n, static_cast<std::size_t>(k));
    auto deflate = [&] {
      for (Eigen::Index j : cluster) {
        const auto& q = hess_vectors[static_cast<std::size_t>(j)];
        x -= q * q.dot(x);
      }
    };
    deflate();
    for (int it = 0; it < opts.inverse_iterations; ++it) {
      x = detail::hessenberg_shifted_solve(h, lam, x, tiny);
      x /= x.norm();
      deflate();
      x /= x.norm();
    }
    hess_vectors[static_cast<std::size_t>(k)] = x;

    // Back-transform: v = D Q x with Q = H_0 H_1 ... H_{n-3}.
    Eigen::VectorXcd v = x;
    for (Eigen::Index r = reflectors.cols() - 1; r >= 0; --r) {
      const auto u = reflectors.col(r);
      v -= 2.0 * u * u.dot(v);
    }
    v = scale.cwiseProduct(v);
    v /= v.norm();
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    v *= std::abs(v(imax)) / v(imax);
    out.vectors.col(k) = v;
  }
  return out;
}

}  // namespace lgap
