#pragma once

// Linear response of a closed-loop double-Lambda EIT medium driven in the
// steady state: the 2x2 probe/signal mode map, its generator, the Langevin
// noise coefficients and the diffusion matrices that account for loss.
//
// Units: the decay rate `gamma` sets the rate unit and `length` the length
// unit. Detunings are given in the same unit as `gamma`, so with the default
// gamma = 1 they are in units of Gamma.

#include <array>
#include <complex>

#include <Eigen/Core>

namespace dlambda {

using cplx = std::complex<double>;

struct MediumParams {
  double od = 0.0;      ///< optical depth alpha
  double delta = 0.0;   ///< one-photon detuning
  double gamma = 1.0;   ///< excited-state coherence decay rate
  double phi_c = 0.0;   ///< coupling-field phase (rad)
  double phi_d = 0.0;   ///< driving-field phase (rad)
  double length = 1.0;  ///< medium length

  /// phi_c - phi_d, the only combination of the control phases that matters.
  double loop_phase() const noexcept { return phi_c - phi_d; }

  /// Throws DomainError unless od >= 0, gamma > 0, length > 0 and every
  /// field is finite.
  void validate() const;
};

/// Output creation operators in terms of input ones:
///   a+_p(L) = a a+_p(0) + b a+_s(0),   a+_s(L) = c a+_p(0) + d a+_s(0).
struct TransferMatrix {
  cplx a{1.0, 0.0};
  cplx b{0.0, 0.0};
  cplx c{0.0, 0.0};
  cplx d{1.0, 0.0};
  double phi_c = 0.0;
  double phi_d = 0.0;

  static TransferMatrix identity() { return {}; }

  double loop_phase() const noexcept { return phi_c - phi_d; }
  Eigen::Matrix2cd matrix() const;
  /// Mode map acting on annihilation operators, i.e. the elementwise conjugate.
  Eigen::Matrix2cd annihilation_map() const { return matrix().conjugate(); }
};

struct PropagationCoefficients {
  cplx lambda_p;
  cplx lambda_s;
  cplx kappa_p;
  cplx kappa_s;
};

/// Atomic coherences whose Langevin forces drive the fields.
enum class Transition { t21 = 0, t31 = 1, t41 = 2 };

struct TransitionCoefficients {
  std::array<cplx, 3> values{};

  cplx& operator[](Transition t) { return values[static_cast<int>(t)]; }
  const cplx& operator[](Transition t) const { return values[static_cast<int>(t)]; }
};

/// Steady-state populations <sigma_11>, <sigma_33>, <sigma_44>.
struct PopulationSet {
  double ground = 1.0;
  double excited3 = 0.0;
  double excited4 = 0.0;
};

/// Rows/columns are ordered (21, 31, 41) in both matrices.
struct DiffusionMatrices {
  Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();      ///< D_{jk,k'j'}
  Eigen::Matrix3d antinormal = Eigen::Matrix3d::Zero();  ///< D_{k'j',jk}
};

struct NoiseModel {
  double rabi = 1.0;
  TransitionCoefficients zeta_p;
  TransitionCoefficients zeta_s;
  Eigen::Matrix3d d_normal = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d d_antinormal = Eigen::Matrix3d::Zero();
  PopulationSet populations;
};

struct LossIdentityReport {
  double lhs_probe = 0.0;
  double lhs_signal = 0.0;
  double rhs_probe = 0.0;    ///< 1 - |A|^2 - |B|^2
  double rhs_signal = 0.0;   ///< 1 - |C|^2 - |D|^2
  double closed_form = 0.0;  ///< (1 - exp(-2r)) / 2
  double residual_probe = 0.0;
  double residual_signal = 0.0;
  double residual_closed_form = 0.0;
  int panels = 0;
  bool converged = false;

  double max_residual() const noexcept;
};

/// Closed-form mode map. Throws DomainError on invalid params.
TransferMatrix transfer_matrix(const MediumParams& params);

/// exp(-M L) from a numerical eigen-decomposition of the generator M.
/// Independent of transfer_matrix(); the two must agree.
TransferMatrix transfer_matrix_expm(const MediumParams& params);

/// The generator M (per unit length) of the coupled propagation equations.
Eigen::Matrix2cd evolution_generator(const MediumParams& params);

/// exp(-M s) for the generator of `params` and a propagation distance s.
Eigen::Matrix2cd propagate(const MediumParams& params, double distance);

PropagationCoefficients propagation_coefficients(const MediumParams& params);

/// r = od Gamma^2 / (2 (Gamma^2 + Delta^2)); the lossy eigenmode decays as exp(-r).
double absorption_exponent(const MediumParams& params);

/// (1 - exp(-2r)) / 2, the fraction of a single mode's power lost in the medium.
double closed_form_loss(const MediumParams& params);

NoiseModel noise_coefficients(const MediumParams& params, double rabi = 1.0);

DiffusionMatrices diffusion_matrices(double gamma, const PopulationSet& populations);

/// Integrates the anti-normally ordered noise fed into each output mode and
/// compares it with the loss 1 - |A|^2 - |B|^2 (probe) and 1 - |C|^2 - |D|^2
/// (signal). Composite Gauss-Legendre with `quad_points` nodes per panel;
/// panels double until successive estimates agree. A run that stops at the
/// panel limit comes back with converged == false.
LossIdentityReport loss_identity_check(const MediumParams& params, int quad_points = 16);

}  // namespace dlambda
