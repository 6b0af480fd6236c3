#pragma once

// Lindblad models and their vectorized Liouvillian.
//
// Vectorization maps rho = sum rho_mn |m><n| to sum rho_mn/C |m>|n>. The ket
// index m occupies qubits 0..N-1 (low bits) and the bra index n occupies
// qubits N..2N-1, so the basis index of |m>|n> is m + 2^N n.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lgap/errors.hpp"
#include "lgap/pauli.hpp"
#include "lgap/simulator.hpp"

namespace lgap {

struct JumpOperator {
  double rate;
  PauliSum op;
};

enum class JumpKind { lowering, dephasing };

struct LindbladModel {
  int spin_count = 0;
  PauliSum hamiltonian;
  std::vector<JumpOperator> jumps;
  /// Set by build_xxz_model; lets default_kappa apply the N^2 choice.
  bool xxz = false;
};

/// True when adjoint(a) - a collects to the empty sum at tolerance `tol`.
inline bool is_hermitian(const PauliSum& a, double tol = kDropTol) {
  return collect(a - adjoint(a), tol).empty();
}

/// Validating constructor for arbitrary models.
inline LindbladModel make_lindblad_model(int spin_count, PauliSum hamiltonian,
                                         std::vector<JumpOperator> jumps) {
  if (spin_count < 1) throw domain_error("LindbladModel: spin count must be >= 1");
  if (hamiltonian.qubit_count() != spin_count)
    throw dimension_error("LindbladModel: Hamiltonian acts on " +
                          std::to_string(hamiltonian.qubit_count()) + " qubits, model has " +
                          std::to_string(spin_count) + " spins");
  if (!is_hermitian(hamiltonian)) throw domain_error("LindbladModel: Hamiltonian is not Hermitian");
  for (std::size_t j = 0; j < jumps.size(); ++j) {
    if (!(jumps[j].rate >= 0) || !std::isfinite(jumps[j].rate))
      throw domain_error("LindbladModel: jump " + std::to_string(j) + " has negative rate");
    if (jumps[j].op.qubit_count() != spin_count)
      throw dimension_error("LindbladModel: jump " + std::to_string(j) + " acts on " +
                            std::to_string(jumps[j].op.qubit_count()) + " qubits");
  }
  return {spin_count, collect(hamiltonian), std::move(jumps), false};
}

/// sigma^- = |1><0| = (X - iY)/2 with Z|0> = +|0>.
inline PauliSum lowering_operator(int qubits, int site) {
  return PauliSum::single(qubits, site, 'X', 0.5) + PauliSum::single(qubits, site, 'Y', {0, -0.5});
}

/// Open-chain XXZ Hamiltonian with uniform local jumps at rate gamma.
inline LindbladModel build_xxz_model(int n, double jz, double gamma, JumpKind kind) {
  if (n < 1) throw domain_error("build_xxz_model: N must be >= 1, got " + std::to_string(n));
  if (!(gamma >= 0)) throw domain_error("build_xxz_model: gamma must be >= 0");
  PauliSum h(n);
  for (int j = 0; j + 1 < n; ++j) {
    for (char axis : {'X', 'Y', 'Z'}) {
      PauliString s(n);
      s.set(j, axis);
      s.set(j + 1, axis);
      h.add(axis == 'Z' ? jz : 1.0, s);
    }
  }
  std::vector<JumpOperator> jumps;
  for (int j = 0; j < n; ++j)
    jumps.push_back({gamma, kind == JumpKind::lowering ? lowering_operator(n, j)
                                                       : PauliSum::single(n, j, 'Z')});
  LindbladModel m = make_lindblad_model(n, std::move(h), std::move(jumps));
  m.xxz = true;
  return m;
}

struct VectorizedLiouvillian {
  PauliSum op;  // on 2N qubits
  LindbladModel source;

  int spin_count() const { return source.spin_count; }
  int qubit_count() const { return op.qubit_count(); }
};

/// L = -i H(x)I + i I(x)H^T + sum_j g_j (L_j(x)L_j^* - 1/2 L_j^dag L_j (x) I - 1/2 I (x) L_j^T L_j^*)
inline VectorizedLiouvillian vectorize(const LindbladModel& model) {
  const int n = model.spin_count;
  const PauliSum id = PauliSum::identity(n);
  PauliSum l = complex{0, -1} * model.hamiltonian.tensor(id);
  l += complex{0, 1} * id.tensor(transpose(model.hamiltonian));
  for (const auto& jump : model.jumps) {
    const PauliSum& lj = jump.op;
    const PauliSum lj_conj = conjugate(lj);
    l += complex{jump.rate} * lj.tensor(lj_conj);
    l += complex{-0.5 * jump.rate} * sum_multiply(adjoint(lj), lj).tensor(id);
    l += complex{-0.5 * jump.rate} * id.tensor(sum_multiply(transpose(lj), lj_conj));
  }
  return {collect(l), model};
}

/// rho_mn / C at index m + 2^N n, C the Frobenius norm.
inline Statevector vectorize_density(const Eigen::MatrixXcd& rho) {
  const Eigen::Index d = rho.rows();
  if (d != rho.cols() || d < 2 || (d & (d - 1)) != 0)
    throw dimension_error("vectorize_density: expected a square 2^N x 2^N matrix");
  const double c = rho.norm();
  if (c == 0) throw domain_error("vectorize_density: zero matrix");
  int n = 0;
  while ((Eigen::Index{1} << n) < d) ++n;
  Eigen::VectorXcd v(d * d);
  for (Eigen::Index col = 0; col < d; ++col)
    for (Eigen::Index row = 0; row < d; ++row) v(row + d * col) = rho(row, col) / c;
  return {2 * n, std::move(v)};
}

/// 2^{-N/2} sum_n |n>|n>
inline Statevector bell_state(int n) {
  if (n < 1) throw domain_error("bell_state: N must be >= 1");
  const Eigen::Index d = Eigen::Index{1} << n;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (Eigen::Index k = 0; k < d; ++k) v(k + d * k) = amp;
  return {2 * n, std::move(v)};
}

/// (L + L^dag)/2
inline PauliSum hermitian_part(const VectorizedLiouvillian& l) {
  return collect(0.5 * (l.op + adjoint(l.op)));
}

/// Which register size sets the exponent of the delta-E heuristic.
enum class DeltaERegister { vectorized, physical };

struct DeltaEOptions {
  double safety = 0.5;
  DeltaERegister exponent = DeltaERegister::vectorized;
  double floor = 1e-3;
};

/// safety * one_norm(Re L) / 2^q, with q = 2N (vectorized) or N (physical).
/// Falls back to `floor` when the Hermitian part vanishes.
inline double default_delta_e(const VectorizedLiouvillian& l, const DeltaEOptions& opts = {}) {
  if (!(opts.safety > 0 && opts.safety <= 1))
    throw domain_error("default_delta_e: safety must lie in (0, 1]");
  const PauliSum re = hermitian_part(l);
  if (re.empty()) return opts.floor;
  const int q = opts.exponent == DeltaERegister::vectorized ? l.qubit_count() : l.spin_count();
  return opts.safety * one_norm(re) / std::ldexp(1.0, q);
}

}  // namespace lgap
