#pragma once

// Gate-level observables of the double-Lambda medium: coherent-field phase
// response, single-photon two-color qubit rotations, two-photon HOM
// interference / NOON generation and the color SWAP gate.

#include <array>
#include <numbers>
#include <optional>
#include <string>

#include "dlambda/fock.hpp"
#include "dlambda/medium.hpp"

namespace dlambda {

enum class Branch { probe, signal };

struct CoherentResponse {
  double t_p = 1.0;
  double t_s = 1.0;
  double dphi_p = 0.0;  ///< in (-pi, pi]
  double dphi_s = 0.0;  ///< in (-pi, pi]
};

struct QubitReport {
  double p_1p0s = 0.0;
  double p_0p1s = 0.0;
  double p_loss = 0.0;
  double fidelity_sqrt = 0.0;    ///< sqrt(P) of the target one-color state
  double fidelity_linear = 0.0;  ///< P of the target one-color state
  Branch target = Branch::probe;
};

struct HomReport {
  double p_2p0s = 0.0;
  double p_0p2s = 0.0;
  double p_1p1s = 0.0;
  double loss_sector = 0.0;
  double noon_fidelity = 0.0;         ///< sqrt convention
  double noon_fidelity_linear = 0.0;  ///< <psi|rho|psi>
  double noon_phase = 0.0;            ///< -2 (phi_c - phi_d), wrapped to (-pi, pi]
};

/// Computational inputs in the order |0_p0_s>, |1_p0_s>, |0_p1_s>, |1_p1_s>.
inline constexpr std::array<FockLabel, 4> kSwapInputs{{{0, 0}, {1, 0}, {0, 1}, {1, 1}}};
/// Every two-mode outcome with at most two photons.
inline constexpr std::array<FockLabel, 6> kSwapOutputs{{{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 0}, {0, 2}}};

struct SwapReport {
  std::array<double, 4> per_input_fidelity{};
  std::array<double, 4> per_input_fidelity_linear{};
  double mean_fidelity = 0.0;
  double std_fidelity = 0.0;  ///< population standard deviation over the four inputs
  double mean_fidelity_linear = 0.0;
  /// truth_table[i][o]: probability of kSwapOutputs[o] given kSwapInputs[i].
  std::array<std::array<double, 6>, 4> truth_table{};
  double mean_success = 0.0;
};

/// "np ns" label used in tables, e.g. "10" for |1_p 0_s>.
std::string fock_label(const FockLabel& label);

/// Detuning od * gamma / pi where the medium acts as a balanced splitter.
inline double hom_detuning(double od, double gamma = 1.0) { return od * gamma / std::numbers::pi; }
/// Detuning od * gamma / (2 pi) where the medium swaps the two colors.
inline double swap_detuning(double od, double gamma = 1.0) { return od * gamma / (2.0 * std::numbers::pi); }

/// Transmittance and phase shift of two coherent fields with amplitude
/// ratio u_beta = |beta_s| / |beta_p| and closed-loop phase phi_r.
CoherentResponse coherent_response(const MediumParams& params, double u_beta, double phi_r);

/// Output probabilities for a single photon in (|1_p0_s> + u e^{-i phi_u}|0_p1_s>)/sqrt(1+u^2).
QubitReport qubit_probabilities(const MediumParams& params, double u, double phi_u,
                                Branch target = Branch::probe);

/// Detuning that routes the two-color qubit with amplitude ratio u into the
/// chosen output color: the root of u|A| - |B| (probe) or u|C| - |D|
/// (signal) between the color-swap point and od * gamma. nullopt when no
/// sign change exists there.
std::optional<double> hadamard_detuning(double od, double u, Branch branch, double gamma = 1.0);

/// Two-photon output statistics for |1_p 1_s>, closed form, plus the NOON
/// fidelity computed on the full channel output.
HomReport hom_probabilities(const MediumParams& params);

/// Same as hom_probabilities; kept separate as the NOON entry point.
HomReport noon_report(const MediumParams& params);

SwapReport swap_report(const MediumParams& params);

}  // namespace dlambda
