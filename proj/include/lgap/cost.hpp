#pragma once

// Non-Hermitian variance cost C(E, theta) = || (L - E) psi ||^2 and its
// Bell-penalized form C1 = C + kappa |<psi|B>|^2.

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lgap/liouvillian.hpp"
#include "lgap/pauli.hpp"
#include "lgap/simulator.hpp"

namespace lgap {

struct EnergyParam {
  double re = 0;
  double im = 0;

  complex value() const { return {re, im}; }
};

enum class GradientMethod { finite_difference, adjoint };

inline constexpr double kFdStep = 1e-5;

/// s^2 with s the collected term count of L, or N^2 for XXZ models.
inline double default_kappa(const VectorizedLiouvillian& l,
                            std::optional<int> xxz_spins = std::nullopt) {
  if (!xxz_spins && l.source.xxz) xxz_spins = l.spin_count();
  if (xxz_spins) return static_cast<double>(*xxz_spins) * *xxz_spins;
  const auto s = static_cast<double>(l.op.size());
  return s * s;
}

class CostContext {
 public:
  CostContext(VectorizedLiouvillian liouvillian, double kappa, AnsatzSpec ansatz)
      : CostContext(liouvillian, bell_state(liouvillian.spin_count()), kappa, std::move(ansatz)) {}

  CostContext(VectorizedLiouvillian liouvillian, Statevector bell, double kappa, AnsatzSpec ansatz)
      : l_(std::move(liouvillian)),
        l_dag_(adjoint(l_.op)),
        bell_(std::move(bell)),
        kappa_(kappa),
        ansatz_(std::move(ansatz)) {
    if (bell_.qubit_count() != l_.qubit_count())
      throw dimension_error("CostContext: Bell state on " + std::to_string(bell_.qubit_count()) +
                            " qubits, Liouvillian on " + std::to_string(l_.qubit_count()));
    if (ansatz_.qubit_count != l_.qubit_count())
      throw dimension_error("CostContext: ansatz on " + std::to_string(ansatz_.qubit_count) +
                            " qubits, Liouvillian on " + std::to_string(l_.qubit_count()));
    if (!(kappa_ >= 0)) throw domain_error("CostContext: kappa must be >= 0");
  }

  const VectorizedLiouvillian& liouvillian() const { return l_; }
  const PauliSum& liouvillian_adjoint() const { return l_dag_; }
  const Statevector& bell() const { return bell_; }
  double kappa() const { return kappa_; }
  const AnsatzSpec& ansatz() const { return ansatz_; }
  std::size_t parameter_count() const { return ansatz_.parameter_count(); }

  /// |f> = (L - E)|psi>
  Statevector residual(EnergyParam e, const Statevector& psi) const {
    Statevector f = apply_operator(l_.op, psi);
    f.amplitudes() -= e.value() * psi.amplitudes();
    return f;
  }

  double penalty(const Statevector& psi) const {
    return kappa_ * std::norm(overlap(psi, bell_));
  }

 private:
  VectorizedLiouvillian l_;
  PauliSum l_dag_;
  Statevector bell_;
  double kappa_;
  AnsatzSpec ansatz_;
};

/// <f|f> with |f> = (L - E)|psi>.
inline double variance_cost(const CostContext& ctx, EnergyParam e, const Statevector& psi) {
  return ctx.residual(e, psi).amplitudes().squaredNorm();
}

inline double penalized_cost(const CostContext& ctx, EnergyParam e, const Statevector& psi) {
  return variance_cost(ctx, e, psi) + ctx.penalty(psi);
}

/// Cost at circuit parameters theta.
inline double circuit_cost(const CostContext& ctx, EnergyParam e, std::span<const double> theta,
                           bool penalized) {
  const Statevector psi = run_circuit(ctx.ansatz(), theta);
  return penalized ? penalized_cost(ctx, e, psi) : variance_cost(ctx, e, psi);
}

namespace detail {

inline double state_cost(const CostContext& ctx, EnergyParam e, const Eigen::VectorXcd& amps,
                         bool penalized) {
  const Statevector psi(ctx.ansatz().qubit_count, amps);
  return penalized ? penalized_cost(ctx, e, psi) : variance_cost(ctx, e, psi);
}

/// Central differences reusing the state just before each gate.
inline void fd_theta_gradient(const CostContext& ctx, EnergyParam e, std::span<const double> theta,
                              bool penalized, double h, std::span<double> grad) {
  const auto& gates = ctx.ansatz().gates;
  Eigen::VectorXcd prefix = Statevector(ctx.ansatz().qubit_count).amplitudes();
  Eigen::VectorXcd work;
  for (std::size_t k = 0; k < gates.size(); ++k) {
    double f[2];
    for (int side = 0; side < 2; ++side) {
      work = prefix;
      apply_gate(gates[k], theta[k] + (side == 0 ? h : -h), work);
      run_gates(ctx.ansatz(), theta, k + 1, work);
      f[side] = state_cost(ctx, e, work, penalized);
    }
    grad[k] = (f[0] - f[1]) / (2 * h);
    apply_gate(gates[k], theta[k], prefix);
  }
}

/// Reverse sweep: dC/dtheta_k = 2 Im <lambda_k| G_k |phi_k>, lambda = M psi.
inline void adjoint_theta_gradient(const CostContext& ctx, EnergyParam e, const Statevector& psi,
                                   const Statevector& f, std::span<const double> theta,
                                   bool penalized, std::span<double> grad) {
  Eigen::VectorXcd lambda = apply_operator(ctx.liouvillian_adjoint(), f).amplitudes();
  lambda -= std::conj(e.value()) * f.amplitudes();
  if (penalized)
    lambda += ctx.kappa() * ctx.bell().amplitudes() * overlap(ctx.bell(), psi);
  Eigen::VectorXcd phi = psi.amplitudes();
  Eigen::VectorXcd gphi;
  const auto& gates = ctx.ansatz().gates;
  for (std::size_t k = gates.size(); k-- > 0;) {
    gphi = phi;
    apply_generator(gates[k], gphi);
    grad[k] = 2 * lambda.dot(gphi).imag();
    apply_gate(gates[k], -theta[k], phi);
    apply_gate(gates[k], -theta[k], lambda);
  }
}

}  // namespace detail

struct CostAndGradient {
  double cost;
  std::vector<double> gradient;  // (theta..., E_r, E_i)
};

/// Cost and gradient with respect to (theta, E_r, E_i). The E-components are
/// analytic: dC/dE_r = -2 Re<psi|f>, dC/dE_i = -2 Im<psi|f>; the penalty does
/// not depend on E.
inline CostAndGradient cost_and_gradient(const CostContext& ctx, EnergyParam e,
                                         std::span<const double> theta, bool penalized,
                                         GradientMethod method = GradientMethod::finite_difference,
                                         double fd_step = kFdStep) {
  require_parameters(ctx.ansatz(), theta);
  const Statevector psi = run_circuit(ctx.ansatz(), theta);
  const Statevector f = ctx.residual(e, psi);
  CostAndGradient out;
  out.cost = f.amplitudes().squaredNorm() + (penalized ? ctx.penalty(psi) : 0.0);
  const std::size_t p = theta.size();
  out.gradient.assign(p + 2, 0.0);
  std::span<double> g_theta(out.gradient.data(), p);
  if (method == GradientMethod::adjoint)
    detail::adjoint_theta_gradient(ctx, e, psi, f, theta, penalized, g_theta);
  else
    detail::fd_theta_gradient(ctx, e, theta, penalized, fd_step, g_theta);
  const complex psi_f = overlap(psi, f);
  out.gradient[p] = -2 * psi_f.real();
  out.gradient[p + 1] = -2 * psi_f.imag();
  return out;
}

inline std::vector<double> cost_gradient(const CostContext& ctx, EnergyParam e,
                                         std::span<const double> theta, bool penalized,
                                         GradientMethod method = GradientMethod::finite_difference,
                                         double fd_step = kFdStep) {
  return cost_and_gradient(ctx, e, theta, penalized, method, fd_step).gradient;
}

}  // namespace lgap
