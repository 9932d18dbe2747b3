#include "dlambda/medium.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "dlambda/errors.hpp"
#include "dlambda/quadrature.hpp"

namespace dlambda {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) throw DomainError(std::string(name) + " must be finite");
}

/// Common factor od * gamma / (4 L) of the propagation coefficients.
double coupling_density(const MediumParams& p) { return p.od * p.gamma / (4.0 * p.length); }

}  // namespace

void MediumParams::validate() const {
  require_finite(od, "od");
  require_finite(delta, "delta");
  require_finite(gamma, "gamma");
  require_finite(phi_c, "phi_c");
  require_finite(phi_d, "phi_d");
  require_finite(length, "length");
  if (od < 0.0) throw DomainError("od must be non-negative");
  if (gamma <= 0.0) throw DomainError("gamma must be positive");
  if (length <= 0.0) throw DomainError("length must be positive");
}

Eigen::Matrix2cd TransferMatrix::matrix() const {
  Eigen::Matrix2cd m;
  m << a, b, c, d;
  return m;
}

double LossIdentityReport::max_residual() const noexcept {
  return std::max({residual_probe, residual_signal, residual_closed_form});
}

TransferMatrix transfer_matrix(const MediumParams& params) {
  params.validate();
  const cplx e = std::exp(kI * params.od * params.gamma / (2.0 * cplx(params.delta, -params.gamma)));
  const cplx loop = std::exp(kI * params.loop_phase());
  TransferMatrix tm;
  tm.a = 0.5 * (1.0 + e);
  tm.d = tm.a;
  tm.b = 0.5 * (1.0 - e) / loop;
  tm.c = 0.5 * (1.0 - e) * loop;
  tm.phi_c = params.phi_c;
  tm.phi_d = params.phi_d;
  return tm;
}

PropagationCoefficients propagation_coefficients(const MediumParams& params) {
  params.validate();
  const cplx lambda = coupling_density(params) / cplx(params.gamma, params.delta);
  return {lambda, lambda, -lambda, -lambda};
}

Eigen::Matrix2cd evolution_generator(const MediumParams& params) {
  const PropagationCoefficients pc = propagation_coefficients(params);
  const cplx loop = std::exp(kI * params.loop_phase());
  Eigen::Matrix2cd m;
  m << pc.lambda_p, pc.kappa_p / loop, pc.kappa_s * loop, pc.lambda_s;
  return m;
}

Eigen::Matrix2cd propagate(const MediumParams& params, double distance) {
  const Eigen::Matrix2cd m = evolution_generator(params);
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> solver(m);
  if (solver.info() != Eigen::Success) throw DomainError("eigen-decomposition of the generator failed");
  const Eigen::Matrix2cd& v = solver.eigenvectors();
  Eigen::Vector2cd decay;
  for (int i = 0; i < 2; ++i) decay(i) = std::exp(-solver.eigenvalues()(i) * distance);
  return v * decay.asDiagonal() * v.inverse();
}

TransferMatrix transfer_matrix_expm(const MediumParams& params) {
  const Eigen::Matrix2cd t = propagate(params, params.length);
  TransferMatrix tm;
  tm.a = t(0, 0);
  tm.b = t(0, 1);
  tm.c = t(1, 0);
  tm.d = t(1, 1);
  tm.phi_c = params.phi_c;
  tm.phi_d = params.phi_d;
  return tm;
}

double absorption_exponent(const MediumParams& params) {
  params.validate();
  const double g2 = params.gamma * params.gamma;
  return params.od * g2 / (2.0 * (g2 + params.delta * params.delta));
}

double closed_form_loss(const MediumParams& params) {
  return -0.5 * std::expm1(-2.0 * absorption_exponent(params));
}

DiffusionMatrices diffusion_matrices(double gamma, const PopulationSet& populations) {
  require_finite(gamma, "gamma");
  if (gamma <= 0.0) throw DomainError("gamma must be positive");
  for (double pop : {populations.ground, populations.excited3, populations.excited4}) {
    if (!(pop >= 0.0 && pop <= 1.0)) throw DomainError("populations must lie in [0, 1]");
  }
  DiffusionMatrices dm;
  // Normal order: only the ground-state coherence picks up excited-state noise.
  dm.normal(0, 0) = 0.5 * gamma * (populations.excited3 + populations.excited4);
  // Anti-normal order: the optical coherences see the full ground population.
  dm.antinormal(1, 1) = gamma * populations.ground;
  dm.antinormal(2, 2) = gamma * populations.ground;
  return dm;
}

NoiseModel noise_coefficients(const MediumParams& params, double rabi) {
  params.validate();
  if (!std::isfinite(rabi) || rabi <= 0.0) throw DomainError("rabi must be positive");
  const double amp = std::sqrt(coupling_density(params));
  const double g = params.gamma;
  const cplx den(g, params.delta);
  const cplx loop = std::exp(kI * params.loop_phase());

  NoiseModel nm;
  nm.rabi = rabi;
  nm.zeta_p[Transition::t21] =
      kI * amp * (cplx(-2.0 * params.delta, g) / (den * rabi)) * std::exp(-kI * params.phi_c);
  nm.zeta_p[Transition::t31] = -kI * amp / den;
  nm.zeta_p[Transition::t41] = kI * amp / den / loop;
  nm.zeta_s[Transition::t21] = kI * amp * (cplx(0.0, g) / (den * rabi)) * std::exp(-kI * params.phi_d);
  nm.zeta_s[Transition::t31] = kI * amp / den * loop;
  nm.zeta_s[Transition::t41] = -kI * amp / den;

  const DiffusionMatrices dm = diffusion_matrices(g, nm.populations);
  nm.d_normal = dm.normal;
  nm.d_antinormal = dm.antinormal;
  return nm;
}

LossIdentityReport loss_identity_check(const MediumParams& params, int quad_points) {
  params.validate();
  if (quad_points < 16) throw DomainError("quad_points must be at least 16");

  const NoiseModel nm = noise_coefficients(params);
  const Eigen::Matrix2cd m = evolution_generator(params);
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> solver(m);
  const Eigen::Matrix2cd v = solver.eigenvectors();
  const Eigen::Matrix2cd v_inv = v.inverse();
  const Eigen::Vector2cd lambda = solver.eigenvalues();

  // Column k of `sources` is (zeta^p_k, zeta^s_k) for transition k.
  Eigen::Matrix<cplx, 2, 3> sources;
  for (int k = 0; k < 3; ++k) {
    sources(0, k) = nm.zeta_p.values[k];
    sources(1, k) = nm.zeta_s.values[k];
  }
  const Eigen::Matrix<cplx, 2, 3> modal = v_inv * sources;
  const Eigen::Matrix3cd diffusion = nm.d_antinormal.cast<cplx>();
  const double length = params.length;

  // Row 0 of the propagated sources gives the probe kernels P_jk, row 1 the
  // signal kernels Q_jk; each output mode collects p^dagger D p.
  auto integrand = [&](int row) {
    return [&, row](double z) {
      Eigen::Vector2cd decay;
      for (int i = 0; i < 2; ++i) decay(i) = std::exp(-lambda(i) * (length - z));
      const Eigen::Matrix<cplx, 1, 3> kernel = v.row(row) * decay.asDiagonal() * modal;
      return (kernel.conjugate() * diffusion * kernel.transpose())(0, 0).real();
    };
  };

  const QuadratureResult probe = integrate_refined(integrand(0), 0.0, length, quad_points);
  const QuadratureResult signal = integrate_refined(integrand(1), 0.0, length, quad_points);

  const TransferMatrix tm = transfer_matrix(params);
  LossIdentityReport report;
  report.lhs_probe = probe.value;
  report.lhs_signal = signal.value;
  report.rhs_probe = 1.0 - std::norm(tm.a) - std::norm(tm.b);
  report.rhs_signal = 1.0 - std::norm(tm.c) - std::norm(tm.d);
  report.closed_form = closed_form_loss(params);
  report.residual_probe = std::abs(report.lhs_probe - report.rhs_probe);
  report.residual_signal = std::abs(report.lhs_signal - report.rhs_signal);
  report.residual_closed_form =
      std::max(std::abs(report.rhs_probe - report.closed_form), std::abs(report.rhs_signal - report.closed_form));
  report.panels = std::max(probe.panels, signal.panels);
  report.converged = probe.converged && signal.converged;
  return report;
}

}  // namespace dlambda
