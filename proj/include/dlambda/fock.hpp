#pragma once

// Two-frequency-mode photonic states in a truncated Fock basis and the
// lossy channel the medium induces on them.
//
// A basis state |n_p, n_s> with 0 <= n_p, n_s <= nmax sits at index
// n_p * (nmax + 1) + n_s. Density matrices are stored as ordinary matrices
// rho(row, col) = <row| rho |col>.

#include <map>
#include <optional>
#include <utility>

#include <Eigen/Core>

#include "dlambda/medium.hpp"

namespace dlambda {

inline constexpr int kDefaultCutoff = 4;

/// Occupation (n_p, n_s).
using FockLabel = std::pair<int, int>;

struct CoherentPair {
  cplx beta_p{0.0, 0.0};
  cplx beta_s{0.0, 0.0};
};

class PureTwoModeState {
 public:
  /// Throws DomainError unless the amplitudes are normalized to 1e-12.
  explicit PureTwoModeState(std::map<FockLabel, cplx> amplitudes);

  static PureTwoModeState fock(int n_p, int n_s, cplx phase = 1.0);
  /// (|1_p 0_s> + u e^{-i phi_u} |0_p 1_s>) / sqrt(1 + u^2)
  static PureTwoModeState two_color_qubit(double u, double phi_u);
  /// (|2_p 0_s> + e^{i theta} |0_p 2_s>) / sqrt(2)
  static PureTwoModeState noon(double theta);

  const std::map<FockLabel, cplx>& amplitudes() const noexcept { return amplitudes_; }
  int max_occupation() const noexcept;
  Eigen::VectorXcd vector(int nmax) const;

 private:
  std::map<FockLabel, cplx> amplitudes_;
};

class FockDensityMatrix {
 public:
  /// Zero operator with cutoff nmax per mode.
  explicit FockDensityMatrix(int nmax);
  /// Wraps an arbitrary (dim x dim) operator; dim must be (nmax + 1)^2.
  FockDensityMatrix(int nmax, Eigen::MatrixXcd matrix);

  static FockDensityMatrix fock_state(int n_p, int n_s, int nmax = kDefaultCutoff);
  static FockDensityMatrix pure(const PureTwoModeState& state, int nmax = kDefaultCutoff);
  /// |beta_p> (x) |beta_s> truncated at nmax, not renormalized.
  static FockDensityMatrix coherent(const CoherentPair& fields, int nmax);

  int nmax() const noexcept { return nmax_; }
  int dim() const noexcept { return (nmax_ + 1) * (nmax_ + 1); }
  int index(int n_p, int n_s) const noexcept { return n_p * (nmax_ + 1) + n_s; }
  FockLabel label(int index) const noexcept { return {index / (nmax_ + 1), index % (nmax_ + 1)}; }

  /// <m_p m_s| rho |n_p n_s>, the value Tr{rho~_{m n} rho_in} of the
  /// reduced-density-operator expansion.
  cplx element(int m_p, int m_s, int n_p, int n_s) const;
  double probability(int n_p, int n_s) const { return element(n_p, n_s, n_p, n_s).real(); }

  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }

  double trace() const;
  double hermiticity_error() const;
  double min_eigenvalue() const;
  /// Largest n_p + n_s carrying a diagonal weight above `tolerance`.
  int max_total_photons(double tolerance = 0.0) const;
  /// Total diagonal weight in sectors with n_p + n_s > total.
  double weight_above(int total) const;

 private:
  int nmax_;
  Eigen::MatrixXcd matrix_;
};

/// Applies the medium channel to an arbitrary operator (linear, not
/// necessarily a state) using the normally ordered vacuum expansion.
/// Output cutoff defaults to the input cutoff. Throws CapacityError when
/// operator content above 1e-12 would not fit the output cutoff.
FockDensityMatrix apply_channel(const TransferMatrix& tm, const FockDensityMatrix& rho_in,
                                std::optional<int> nmax_out = std::nullopt);

/// 4x4 unitary on (probe, signal, loss1, loss2) annihilation operators whose
/// upper-left block is the annihilation-operator mode map of `tm`.
/// Throws DomainError for an active (non-contractive) map.
Eigen::Matrix4cd dilation_unitary(const TransferMatrix& tm);

/// Reference implementation of the channel: embed with two vacuum loss
/// modes, evolve with dilation_unitary, trace the loss modes out.
FockDensityMatrix apply_channel_dilation(const TransferMatrix& tm, const FockDensityMatrix& rho_in,
                                         std::optional<int> nmax_out = std::nullopt);

/// beta'_p = A* beta_p + B* beta_s,  beta'_s = C* beta_p + D* beta_s.
CoherentPair coherent_output(const TransferMatrix& tm, const CoherentPair& fields);

/// <psi| rho |psi>
double overlap_fidelity(const FockDensityMatrix& rho, const PureTwoModeState& target);
/// sqrt(<psi| rho |psi>), the default fidelity convention.
double uhlmann_fidelity(const FockDensityMatrix& rho, const PureTwoModeState& target);

std::map<FockLabel, double> mode_probabilities(const FockDensityMatrix& rho);

}  // namespace dlambda
