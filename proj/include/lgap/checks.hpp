#pragma once

// Self-check suite behind `lgap check`. Every check compares a library path
// against an independent one (dense matrices, direct Kronecker assembly,
// finite differences) on seeded random inputs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "lgap/cost.hpp"
#include "lgap/liouvillian.hpp"
#include "lgap/pauli.hpp"
#include "lgap/simulator.hpp"
#include "lgap/spectrum.hpp"

namespace lgap {

/// Bell-state source used by the Bell-related checks; replaceable so tests
/// can feed a corrupted state and watch the suite fail.
using BellFactory = std::function<Statevector(int)>;

struct CheckOptions {
  BellFactory bell = bell_state;
  std::uint64_t seed = 20240601;
};

struct CheckOutcome {
  std::string name;
  bool passed = false;
  std::string detail;
  double millis = 0;
};

namespace oracle {

using Rng = std::mt19937_64;

inline complex gaussian(Rng& rng) {
  std::normal_distribution<double> n;
  const double re = n(rng);
  return {re, n(rng)};
}

inline PauliString random_string(Rng& rng, int qubits) {
  const std::uint64_t mask = (qubits == 64) ? ~0ULL : ((1ULL << qubits) - 1);
  const std::uint64_t x = rng() & mask;
  return PauliString(qubits, x, rng() & mask);
}

inline PauliSum random_sum(Rng& rng, int qubits, int terms) {
  PauliSum s(qubits);
  for (int k = 0; k < terms; ++k) s.add(gaussian(rng), random_string(rng, qubits));
  return s;
}

inline PauliSum random_hermitian(Rng& rng, int qubits, int terms) {
  PauliSum s(qubits);
  std::normal_distribution<double> n;
  for (int k = 0; k < terms; ++k) s.add(n(rng), random_string(rng, qubits));
  return s;
}

inline Eigen::MatrixXcd random_matrix(Rng& rng, Eigen::Index d) {
  Eigen::MatrixXcd m(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) m(i, j) = gaussian(rng);
  return m;
}

/// Random positive semidefinite matrix of unit trace.
inline Eigen::MatrixXcd random_density(Rng& rng, Eigen::Index d) {
  const Eigen::MatrixXcd g = random_matrix(rng, d);
  Eigen::MatrixXcd rho = g * g.adjoint();
  return rho / rho.trace();
}

inline Statevector random_state(Rng& rng, int qubits) {
  Eigen::VectorXcd v(Eigen::Index{1} << qubits);
  for (auto& a : v) a = gaussian(rng);
  return {qubits, v / v.norm()};
}

inline LindbladModel random_model(Rng& rng, int n) {
  std::uniform_real_distribution<double> rate(0.1, 2.0);
  std::vector<JumpOperator> jumps;
  const int count = 1 + static_cast<int>(rng() % 2);
  for (int j = 0; j < count; ++j) jumps.push_back({rate(rng), random_sum(rng, n, 2)});
  return make_lindblad_model(n, random_hermitian(rng, n, 3), std::move(jumps));
}

/// Column stacking: entry (m, n) lands at m + d n.
inline Eigen::VectorXcd vec(const Eigen::MatrixXcd& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

/// L(rho) evaluated with plain matrix products.
inline Eigen::MatrixXcd lindblad_action(const LindbladModel& model, const Eigen::MatrixXcd& rho) {
  const Eigen::MatrixXcd h = to_dense(model.hamiltonian);
  const complex i{0, 1};
  Eigen::MatrixXcd out = -i * (h * rho - rho * h);
  for (const auto& j : model.jumps) {
    const Eigen::MatrixXcd l = to_dense(j.op);
    const Eigen::MatrixXcd ll = l.adjoint() * l;
    out += j.rate * (l * rho * l.adjoint() - 0.5 * (ll * rho + rho * ll));
  }
  return out;
}

/// Superoperator assembled from Kronecker products for column-stacked vec.
inline Eigen::MatrixXcd kronecker_liouvillian(const LindbladModel& model) {
  using Eigen::kroneckerProduct;
  const Eigen::MatrixXcd h = to_dense(model.hamiltonian);
  const Eigen::Index d = h.rows();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  const complex i{0, 1};
  Eigen::MatrixXcd s = -i * kroneckerProduct(id, h) + i * kroneckerProduct(h.transpose(), id);
  for (const auto& j : model.jumps) {
    const Eigen::MatrixXcd l = to_dense(j.op);
    const Eigen::MatrixXcd ll = l.adjoint() * l;
    s += j.rate * (kroneckerProduct(l.conjugate(), l) - 0.5 * kroneckerProduct(id, ll) -
                   0.5 * kroneckerProduct(ll.transpose(), id));
  }
  return s;
}

inline std::vector<LindbladModel> built_models(int max_spins) {
  std::vector<LindbladModel> out;
  for (int n = 1; n <= max_spins; ++n)
    for (JumpKind kind : {JumpKind::lowering, JumpKind::dephasing})
      for (double jz : {0.5, 1.0})
        for (double gamma : {0.5, 1.0}) out.push_back(build_xxz_model(n, jz, gamma, kind));
  return out;
}

}  // namespace oracle

namespace detail {

struct Finding {
  bool pass;
  std::string detail;
};

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

inline Finding bounded(double worst, double tol, const std::string& what) {
  return {worst <= tol, what + " max " + sci(worst) + " (tol " + sci(tol) + ")"};
}

inline double dense_diff(const PauliSum& a, const PauliSum& b) {
  return (to_dense(a) - to_dense(b)).cwiseAbs().maxCoeff();
}

inline Finding check_algebra(oracle::Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int q = 2 + trial % 2;
    const PauliSum a = oracle::random_sum(rng, q, 4), b = oracle::random_sum(rng, q, 4),
                   c = oracle::random_sum(rng, q, 3);
    const Eigen::MatrixXcd da = to_dense(a), db = to_dense(b), dc = to_dense(c);
    worst = std::max(worst, (to_dense(sum_multiply(a, b)) - da * db).cwiseAbs().maxCoeff());
    worst = std::max(worst, dense_diff(sum_multiply(sum_multiply(a, b), c), sum_multiply(a, sum_multiply(b, c))));
    worst = std::max(worst, dense_diff(adjoint(sum_multiply(a, b)), sum_multiply(adjoint(b), adjoint(a))));
    worst = std::max(worst, dense_diff(transpose(conjugate(a)), adjoint(a)));
    worst = std::max(worst, (to_dense(transpose(a)) - da.transpose()).cwiseAbs().maxCoeff());
    worst = std::max(worst, (to_dense(conjugate(a)) - da.conjugate()).cwiseAbs().maxCoeff());
    const PauliSum once = collect(a + b);
    if (format(collect(once)) != format(once)) return {false, "collect is not idempotent"};
    worst = std::max(worst, (to_dense(once) - (da + db)).cwiseAbs().maxCoeff());
  }
  return bounded(worst, 1e-10, "dense mismatch");
}

inline Finding check_vec_identity(oracle::Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 2;
    const PauliSum a = oracle::random_sum(rng, n, 3), b = oracle::random_sum(rng, n, 3);
    const Eigen::MatrixXcd rho = oracle::random_matrix(rng, Eigen::Index{1} << n);
    const Statevector v(2 * n, oracle::vec(rho));
    const Statevector lhs = apply_operator(a.tensor(transpose(b)), v);
    const Eigen::VectorXcd rhs = oracle::vec(to_dense(a) * rho * to_dense(b));
    worst = std::max(worst, (lhs.amplitudes() - rhs).cwiseAbs().maxCoeff());
  }
  return bounded(worst, 1e-10, "vec(A rho B) vs (A (x) B^T) vec(rho)");
}

inline Finding check_bell_annihilation(const BellFactory& bell, oracle::Rng& rng) {
  auto models = oracle::built_models(4);
  for (int n = 1; n <= 2; ++n)
    for (int k = 0; k < 3; ++k) models.push_back(oracle::random_model(rng, n));
  double worst = 0;
  for (const auto& m : models) {
    const VectorizedLiouvillian l = vectorize(m);
    worst = std::max(worst, apply_operator(adjoint(l.op), bell(m.spin_count)).norm());
  }
  return bounded(worst, 1e-10, std::to_string(models.size()) + " models, ||L^dag B||");
}

inline Finding check_trace_annihilation(const BellFactory& bell, oracle::Rng& rng) {
  const auto models = oracle::built_models(2);
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const LindbladModel& m = models[static_cast<std::size_t>(trial) % models.size()];
    const Eigen::MatrixXcd rho = oracle::random_density(rng, Eigen::Index{1} << m.spin_count);
    const Statevector v(2 * m.spin_count, oracle::vec(rho));
    worst = std::max(worst, std::abs(overlap(bell(m.spin_count), apply_operator(vectorize(m).op, v))));
  }
  return bounded(worst, 1e-10, "|<B|L rho>|");
}

inline Finding check_kronecker(oracle::Rng& rng) {
  double action = 0, spectrum = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 1 + trial % 2;
    const LindbladModel m = oracle::random_model(rng, n);
    const Eigen::MatrixXcd dense = dense_liouvillian(vectorize(m));
    const Eigen::MatrixXcd kron = oracle::kronecker_liouvillian(m);
    const Eigen::MatrixXcd rho = oracle::random_density(rng, Eigen::Index{1} << n);
    action = std::max(action, (dense * oracle::vec(rho) - oracle::vec(oracle::lindblad_action(m, rho)))
                                  .cwiseAbs()
                                  .maxCoeff());
    action = std::max(action, (dense - kron).cwiseAbs().maxCoeff());
    if (n != 1) continue;
    // Permutation match of the library spectrum against Eigen's solver on the
    // Kronecker matrix.
    const Eigen::VectorXcd ref = Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(kron, false).eigenvalues();
    const SpectralResult ours = dense_spectrum(vectorize(m));
    std::vector<bool> used(static_cast<std::size_t>(ref.size()), false);
    for (Eigen::Index k = 0; k < ours.eigenvalues.size(); ++k) {
      Eigen::Index best = -1;
      for (Eigen::Index j = 0; j < ref.size(); ++j)
        if (!used[static_cast<std::size_t>(j)] &&
            (best < 0 || std::abs(ref(j) - ours.eigenvalues(k)) < std::abs(ref(best) - ours.eigenvalues(k))))
          best = j;
      used[static_cast<std::size_t>(best)] = true;
      spectrum = std::max(spectrum, std::abs(ref(best) - ours.eigenvalues(k)));
    }
  }
  if (action > 1e-10) return bounded(action, 1e-10, "superoperator vs matrix action");
  return bounded(spectrum, 1e-8, "eigenvalues vs Kronecker assembly");
}

struct SpectraFixture {
  std::vector<LindbladModel> models;
  std::vector<SpectralResult> spectra;
};

inline SpectraFixture spectra_fixture(oracle::Rng& rng) {
  SpectraFixture f;
  f.models = oracle::built_models(3);
  for (int k = 0; k < 4; ++k) f.models.push_back(oracle::random_model(rng, 1 + k % 2));
  for (const auto& m : f.models) f.spectra.push_back(dense_spectrum(vectorize(m)));
  return f;
}

inline Finding check_spectrum_sanity(const SpectraFixture& f) {
  double max_re = -1e300, worst_zero = 0;
  for (const auto& s : f.spectra) {
    max_re = std::max(max_re, s.eigenvalues.real().maxCoeff());
    worst_zero = std::max(worst_zero, s.eigenvalues.cwiseAbs().minCoeff());
  }
  const bool pass = max_re <= 1e-9 && worst_zero <= 1e-9;
  return {pass, "max Re(lambda) " + sci(max_re) + ", max min|lambda| " + sci(worst_zero) + " (tol 1.00e-09)"};
}

inline Finding check_residuals(const SpectraFixture& f) {
  double worst = 0;
  for (std::size_t i = 0; i < f.models.size(); ++i) {
    const Eigen::MatrixXcd l = dense_liouvillian(vectorize(f.models[i]));
    const SpectralResult& s = f.spectra[i];
    for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k)
      worst = std::max(worst, (l * s.right_eigenvectors.col(k) - s.eigenvalues(k) * s.right_eigenvectors.col(k)).norm());
  }
  return bounded(worst, 1e-8, "||L v - lambda v||");
}

inline Finding check_excited_orthogonality(const BellFactory& bell, const SpectraFixture& f) {
  double worst = 0, weakest_steady = 1e300;
  for (std::size_t i = 0; i < f.models.size(); ++i) {
    const SpectralResult& s = f.spectra[i];
    const Statevector b = bell(f.models[i].spin_count);
    for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) {
      const Statevector v(b.qubit_count(), s.right_eigenvectors.col(k));
      const double o = std::abs(overlap(b, v));
      if (std::abs(s.eigenvalues(k)) > s.degeneracy_tol) worst = std::max(worst, o);
      else if (s.zero_count == 1) weakest_steady = std::min(weakest_steady, o);
    }
  }
  const bool pass = worst <= 1e-8 && weakest_steady > 1e-3;
  return {pass, "excited |<B|v>| max " + sci(worst) + " (tol 1.00e-08), unique steady state |<B|v0>| min " +
                    sci(weakest_steady) + " (> 1.00e-03)"};
}

inline Finding check_variance_nonnegative(oracle::Rng& rng) {
  const VectorizedLiouvillian l = vectorize(build_xxz_model(2, 0.5, 1.0, JumpKind::lowering));
  const CostContext ctx(l, 4.0, build_ansatz(4, 1));
  std::normal_distribution<double> n(0, 3);
  double lowest = 1e300;
  for (int trial = 0; trial < 1000; ++trial) {
    const Statevector psi = oracle::random_state(rng, 4);
    lowest = std::min(lowest, variance_cost(ctx, {n(rng), n(rng)}, psi));
  }
  return {lowest >= -1e-12, "min cost over 1000 samples " + sci(lowest)};
}

inline Finding check_expansion_path(oracle::Rng& rng) {
  double worst = 0;
  std::normal_distribution<double> n;
  for (JumpKind kind : {JumpKind::lowering, JumpKind::dephasing}) {
    const VectorizedLiouvillian l = vectorize(build_xxz_model(2, 0.5, 1.0, kind));
    const CostContext ctx(l, 0.0, build_ansatz(4, 1));
    for (int trial = 0; trial < 10; ++trial) {
      const EnergyParam e{n(rng), n(rng)};
      const PauliSum shifted = l.op - PauliSum::identity(4, e.value());
      const PauliSum m = sum_multiply(adjoint(shifted), shifted);
      const Statevector psi = oracle::random_state(rng, 4);
      worst = std::max(worst, std::abs(expectation(m, psi) - variance_cost(ctx, e, psi)));
    }
  }
  return bounded(worst, 1e-10, "<psi|M|psi> vs ||f||^2");
}

inline Finding check_e_gradient(oracle::Rng& rng) {
  const VectorizedLiouvillian l = vectorize(build_xxz_model(2, 0.5, 1.0, JumpKind::lowering));
  const CostContext ctx(l, 4.0, build_ansatz(4, 2));
  std::uniform_real_distribution<double> u(-1, 1);
  constexpr double h = 1e-6;
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> theta(ctx.parameter_count());
    for (auto& t : theta) t = u(rng);
    const EnergyParam e{u(rng), u(rng)};
    const bool penalized = trial % 2 == 0;
    const auto g = cost_gradient(ctx, e, theta, penalized);
    const std::size_t p = theta.size();
    const double fr = (circuit_cost(ctx, {e.re + h, e.im}, theta, penalized) -
                       circuit_cost(ctx, {e.re - h, e.im}, theta, penalized)) / (2 * h);
    const double fi = (circuit_cost(ctx, {e.re, e.im + h}, theta, penalized) -
                       circuit_cost(ctx, {e.re, e.im - h}, theta, penalized)) / (2 * h);
    worst = std::max({worst, std::abs(g[p] - fr), std::abs(g[p + 1] - fi)});
  }
  return bounded(worst, 1e-6, "analytic vs central differences");
}

inline Finding check_theta_gradient(oracle::Rng& rng) {
  const VectorizedLiouvillian l = vectorize(build_xxz_model(2, 0.5, 1.0, JumpKind::lowering));
  const CostContext ctx(l, 4.0, build_ansatz(4, 2));
  std::uniform_real_distribution<double> u(-1, 1);
  double worst = 0;
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<double> theta(ctx.parameter_count());
    for (auto& t : theta) t = u(rng);
    const EnergyParam e{u(rng), u(rng)};
    const auto fd = cost_gradient(ctx, e, theta, trial % 2 == 0, GradientMethod::finite_difference);
    const auto adj = cost_gradient(ctx, e, theta, trial % 2 == 0, GradientMethod::adjoint);
    for (std::size_t k = 0; k < fd.size(); ++k) worst = std::max(worst, std::abs(fd[k] - adj[k]));
  }
  return bounded(worst, 1e-6, "finite differences vs adjoint sweep");
}

inline Finding check_e_optimality(oracle::Rng& rng) {
  const VectorizedLiouvillian l = vectorize(build_xxz_model(2, 1.0, 1.0, JumpKind::dephasing));
  const CostContext ctx(l, 0.0, build_ansatz(4, 1));
  std::normal_distribution<double> n(0, 2);
  double worst = -1e300;
  for (int trial = 0; trial < 5; ++trial) {
    const Statevector psi = oracle::random_state(rng, 4);
    const complex best = expectation(l.op, psi);
    const double c0 = variance_cost(ctx, {best.real(), best.imag()}, psi);
    for (int k = 0; k < 100; ++k) {
      const EnergyParam other{best.real() + n(rng), best.imag() + n(rng)};
      worst = std::max(worst, c0 - variance_cost(ctx, other, psi));
    }
  }
  return {worst <= 1e-12, "C(<L>) - min C(E') " + sci(worst) + " (must be <= 0)"};
}

inline Finding check_penalty_zero_set(const BellFactory& bell, oracle::Rng& rng) {
  const VectorizedLiouvillian l = vectorize(build_xxz_model(2, 0.5, 1.0, JumpKind::lowering));
  const CostContext ctx(l, bell(2), 4.0, build_ansatz(4, 1));
  const Statevector b = ctx.bell();
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Statevector psi = oracle::random_state(rng, 4);
    const Eigen::VectorXcd orth = psi.amplitudes() - b.amplitudes() * b.amplitudes().dot(psi.amplitudes()) /
                                                         b.amplitudes().squaredNorm();
    psi = Statevector(4, orth / orth.norm());
    const EnergyParam e{0.3, -0.7};
    worst = std::max(worst, std::abs(penalized_cost(ctx, e, psi) - variance_cost(ctx, e, psi)));
  }
  return bounded(worst, 1e-12, "C1 - C on Bell-orthogonal states");
}

inline Finding check_simulator(oracle::Rng& rng) {
  std::uniform_real_distribution<double> u(-3, 3);
  double unit = 0, linear = 0, expect = 0;
  bool identical = true;
  for (int trial = 0; trial < 10; ++trial) {
    const int q = 2 + trial % 5;
    const AnsatzSpec a = build_ansatz(q, 2);
    std::vector<double> theta(a.parameter_count());
    for (auto& t : theta) t = u(rng);
    const Statevector psi = run_circuit(a, theta);
    unit = std::max(unit, std::abs(psi.norm() - 1));
    identical = identical && (run_circuit(a, theta).amplitudes() == psi.amplitudes());

    const PauliSum op = oracle::random_sum(rng, q, 4);
    const Statevector phi = oracle::random_state(rng, q);
    const complex al = oracle::gaussian(rng), be = oracle::gaussian(rng);
    const Statevector mix(q, al * psi.amplitudes() + be * phi.amplitudes());
    const Eigen::VectorXcd rhs = al * apply_operator(op, psi).amplitudes() + be * apply_operator(op, phi).amplitudes();
    linear = std::max(linear, (apply_operator(op, mix).amplitudes() - rhs).cwiseAbs().maxCoeff());
    expect = std::max(expect, std::abs(expectation(op, psi) - overlap(psi, apply_operator(op, psi))));
  }
  const bool pass = unit <= 1e-12 && linear <= 1e-12 && expect <= 1e-12 && identical;
  return {pass, "| ||psi|| - 1 | " + sci(unit) + ", linearity " + sci(linear) + ", expectation " + sci(expect) +
                    (identical ? ", repeat runs identical" : ", repeat runs differ")};
}

}  // namespace detail

inline std::vector<CheckOutcome> run_checks(const CheckOptions& opts = {}) {
  using detail::Finding;
  oracle::Rng rng(opts.seed);
  std::vector<CheckOutcome> out;
  auto run = [&](const std::string& name, const std::function<Finding()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckOutcome o{name, false, "", 0};
    try {
      const Finding f = body();
      o.passed = f.pass;
      o.detail = f.detail;
    } catch (const std::exception& e) {
      o.detail = std::string("threw: ") + e.what();
    }
    o.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(o));
  };

  run("pauli_algebra", [&] { return detail::check_algebra(rng); });
  run("vec_identity", [&] { return detail::check_vec_identity(rng); });
  run("bell_annihilation", [&] { return detail::check_bell_annihilation(opts.bell, rng); });
  run("trace_annihilation", [&] { return detail::check_trace_annihilation(opts.bell, rng); });
  run("kronecker_consistency", [&] { return detail::check_kronecker(rng); });
  std::optional<detail::SpectraFixture> spectra;
  run("spectrum_sanity", [&] {
    spectra = detail::spectra_fixture(rng);
    return detail::check_spectrum_sanity(*spectra);
  });
  auto with_spectra = [&](auto&& f) {
    if (!spectra) return Finding{false, "spectra unavailable"};
    return f(*spectra);
  };
  run("eigen_residuals", [&] { return with_spectra(detail::check_residuals); });
  run("excited_bell_orthogonality", [&] {
    return with_spectra([&](const detail::SpectraFixture& f) { return detail::check_excited_orthogonality(opts.bell, f); });
  });
  run("variance_nonnegative", [&] { return detail::check_variance_nonnegative(rng); });
  run("expansion_path", [&] { return detail::check_expansion_path(rng); });
  run("penalty_zero_set", [&] { return detail::check_penalty_zero_set(opts.bell, rng); });
  run("e_gradient", [&] { return detail::check_e_gradient(rng); });
  run("theta_gradient", [&] { return detail::check_theta_gradient(rng); });
  run("e_optimality", [&] { return detail::check_e_optimality(rng); });
  run("simulator", [&] { return detail::check_simulator(rng); });
  return out;
}

inline void print_checks(const std::vector<CheckOutcome>& results, std::ostream& os) {
  char line[96];
  std::snprintf(line, sizeof line, "%-28s %-6s %10s  %s\n", "check", "status", "time_ms", "detail");
  os << line;
  for (const auto& r : results) {
    std::snprintf(line, sizeof line, "%-28s %-6s %10.1f  ", r.name.c_str(), r.passed ? "PASS" : "FAIL", r.millis);
    os << line << r.detail << '\n';
  }
  const auto failed = std::count_if(results.begin(), results.end(), [](const CheckOutcome& r) { return !r.passed; });
  os << (results.size() - static_cast<std::size_t>(failed)) << '/' << results.size() << " checks passed\n";
}

inline int cmd_check(std::ostream& os = std::cout, const CheckOptions& opts = {}) {
  const auto results = run_checks(opts);
  print_checks(results, os);
  return std::all_of(results.begin(), results.end(), [](const CheckOutcome& r) { return r.passed; }) ? 0 : 1;
}

}  // namespace lgap
