#pragma once

// Dense statevector simulation of the layered rotation ansatz and of Pauli-sum
// operator actions. Qubit 0 is the least significant bit of the basis index.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lgap/errors.hpp"
#include "lgap/pauli.hpp"

namespace lgap {

class Statevector {
 public:
  Statevector() = default;

  /// |0...0> on `qubits` qubits.
  explicit Statevector(int qubits) : qubits_(checked(qubits)) {
    amps_ = Eigen::VectorXcd::Zero(Eigen::Index{1} << qubits);
    amps_(0) = 1.0;
  }

  Statevector(int qubits, Eigen::VectorXcd amplitudes)
      : qubits_(checked(qubits)), amps_(std::move(amplitudes)) {
    if (amps_.size() != (Eigen::Index{1} << qubits))
      throw dimension_error("Statevector: " + std::to_string(amps_.size()) +
                            " amplitudes for " + std::to_string(qubits) + " qubits");
  }

  static Statevector basis(int qubits, std::uint64_t index) {
    Statevector s(qubits);
    s.amps_(0) = 0.0;
    s.amps_(static_cast<Eigen::Index>(index)) = 1.0;
    return s;
  }

  int qubit_count() const { return qubits_; }
  Eigen::Index dimension() const { return amps_.size(); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  Eigen::VectorXcd& amplitudes() { return amps_; }
  complex operator[](Eigen::Index i) const { return amps_(i); }
  double norm() const { return amps_.norm(); }

  Statevector normalized() const { return {qubits_, amps_ / amps_.norm()}; }

 private:
  static int checked(int qubits) {
    if (qubits < 0 || qubits > 30) throw capacity_error("Statevector: qubit count outside [0, 30]");
    return qubits;
  }

  int qubits_ = 0;
  Eigen::VectorXcd amps_;
};

inline void require_same_dimension(const Statevector& a, const Statevector& b, const char* where) {
  if (a.qubit_count() != b.qubit_count())
    throw dimension_error(std::string(where) + ": qubit counts differ (" +
                          std::to_string(a.qubit_count()) + " vs " +
                          std::to_string(b.qubit_count()) + ")");
}

/// A|psi>, unnormalized.
inline Statevector apply_operator(const PauliSum& a, const Statevector& psi) {
  if (a.qubit_count() != psi.qubit_count())
    throw dimension_error("apply_operator: operator on " + std::to_string(a.qubit_count()) +
                          " qubits, state on " + std::to_string(psi.qubit_count()));
  const Eigen::Index dim = psi.dimension();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
  const auto& in = psi.amplitudes();
  for (const auto& t : a.terms()) {
    const std::uint64_t flip = t.string.x_mask();
    const std::uint64_t zmask = t.string.z_mask();
    static constexpr complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const complex base = t.coeff * kIPow[t.string.y_count() & 3];
    for (Eigen::Index b = 0; b < dim; ++b) {
      const auto ub = static_cast<std::uint64_t>(b);
      const complex v = base * in(b);
      out(static_cast<Eigen::Index>(ub ^ flip)) += (std::popcount(ub & zmask) & 1) ? -v : v;
    }
  }
  return {psi.qubit_count(), std::move(out)};
}

/// <phi|psi>
inline complex overlap(const Statevector& phi, const Statevector& psi) {
  require_same_dimension(phi, psi, "overlap");
  return phi.amplitudes().dot(psi.amplitudes());
}

/// |<phi|psi>|^2 of the normalized inputs.
inline double fidelity(const Statevector& phi, const Statevector& psi) {
  const double n = phi.norm() * psi.norm();
  return std::norm(overlap(phi, psi)) / (n * n);
}

/// <psi|A|psi>
inline complex expectation(const PauliSum& a, const Statevector& psi) {
  return overlap(psi, apply_operator(a, psi));
}

// ---------------------------------------------------------------------------
// Ansatz

enum class GateKind { rz, rx, rzz, rxx };

/// exp(-i theta P) with P = Z_a, X_a, Z_a Z_b or X_a X_b. `second` is -1 for
/// single-qubit gates.
struct Gate {
  GateKind kind;
  int first;
  int second;

  std::uint64_t support() const {
    std::uint64_t m = 1ULL << first;
    if (second >= 0) m |= 1ULL << second;
    return m;
  }
  bool diagonal() const { return kind == GateKind::rz || kind == GateKind::rzz; }
};

struct AnsatzSpec {
  int qubit_count = 0;
  int block_count = 0;
  std::vector<Gate> gates;  // gate k uses theta[k]

  std::size_t parameter_count() const { return gates.size(); }
};

/// Each block: Rz on every qubit, Rx on every qubit, Rzz on each neighbouring
/// pair (j, j+1), Rxx on each neighbouring pair. Open chain, one parameter per gate.
inline AnsatzSpec build_ansatz(int qubit_count, int block_count) {
  if (qubit_count < 2)
    throw domain_error("build_ansatz: qubit_count must be >= 2, got " + std::to_string(qubit_count));
  if (block_count < 1)
    throw domain_error("build_ansatz: block_count must be >= 1, got " + std::to_string(block_count));
  AnsatzSpec spec{qubit_count, block_count, {}};
  spec.gates.reserve(static_cast<std::size_t>(block_count) * (4 * qubit_count - 2));
  for (int blk = 0; blk < block_count; ++blk) {
    for (int q = 0; q < qubit_count; ++q) spec.gates.push_back({GateKind::rz, q, -1});
    for (int q = 0; q < qubit_count; ++q) spec.gates.push_back({GateKind::rx, q, -1});
    for (int q = 0; q + 1 < qubit_count; ++q) spec.gates.push_back({GateKind::rzz, q, q + 1});
    for (int q = 0; q + 1 < qubit_count; ++q) spec.gates.push_back({GateKind::rxx, q, q + 1});
  }
  return spec;
}

/// psi <- exp(-i theta P) psi = (cos theta - i sin theta P) psi.
inline void apply_gate(const Gate& g, double theta, Eigen::VectorXcd& amps) {
  const std::uint64_t mask = g.support();
  const Eigen::Index dim = amps.size();
  if (g.diagonal()) {
    const complex even = std::polar(1.0, -theta);
    const complex odd = std::polar(1.0, theta);
    for (Eigen::Index b = 0; b < dim; ++b)
      amps(b) *= (std::popcount(static_cast<std::uint64_t>(b) & mask) & 1) ? odd : even;
    return;
  }
  const double c = std::cos(theta);
  const complex mis{0.0, -std::sin(theta)};
  // Visit each pair (b, b ^ mask) once via its member with the lowest support bit clear.
  const std::uint64_t low = 1ULL << g.first;
  for (Eigen::Index b = 0; b < dim; ++b) {
    const auto ub = static_cast<std::uint64_t>(b);
    if (ub & low) continue;
    const auto partner = static_cast<Eigen::Index>(ub ^ mask);
    const complex a0 = amps(b);
    const complex a1 = amps(partner);
    amps(b) = c * a0 + mis * a1;
    amps(partner) = c * a1 + mis * a0;
  }
}

/// psi <- P psi for the gate's generator P.
inline void apply_generator(const Gate& g, Eigen::VectorXcd& amps) {
  const std::uint64_t mask = g.support();
  const Eigen::Index dim = amps.size();
  if (g.diagonal()) {
    for (Eigen::Index b = 0; b < dim; ++b)
      if (std::popcount(static_cast<std::uint64_t>(b) & mask) & 1) amps(b) = -amps(b);
    return;
  }
  const std::uint64_t low = 1ULL << g.first;
  for (Eigen::Index b = 0; b < dim; ++b) {
    const auto ub = static_cast<std::uint64_t>(b);
    if (!(ub & low)) std::swap(amps(b), amps(static_cast<Eigen::Index>(ub ^ mask)));
  }
}

inline void require_parameters(const AnsatzSpec& ansatz, std::span<const double> theta) {
  if (theta.size() != ansatz.parameter_count())
    throw domain_error("run_circuit: expected " + std::to_string(ansatz.parameter_count()) +
                       " parameters, got " + std::to_string(theta.size()));
}

/// Applies gates [from, gates.size()) to `state` in place.
inline void run_gates(const AnsatzSpec& ansatz, std::span<const double> theta, std::size_t from,
                      Eigen::VectorXcd& state) {
  for (std::size_t k = from; k < ansatz.gates.size(); ++k) apply_gate(ansatz.gates[k], theta[k], state);
}

/// U(theta)|0...0>
inline Statevector run_circuit(const AnsatzSpec& ansatz, std::span<const double> theta) {
  require_parameters(ansatz, theta);
  Statevector psi(ansatz.qubit_count);
  run_gates(ansatz, theta, 0, psi.amplitudes());
  return psi;
}

}  // namespace lgap
