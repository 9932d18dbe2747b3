#pragma once

// Randomized property checks shared by the unit tests and the acceptance
// run. Each returns the worst residual it saw; callers compare it against
// their tolerance.

#include <cstdint>
#include <random>

#include "dlambda/fock.hpp"

namespace dlambda::props {

/// Random density matrix supported on states with n_p + n_s <= max_total.
FockDensityMatrix random_density(int nmax, int max_total, std::mt19937_64& rng);

/// Copy of rho with every element touching n_p + n_s > total set to zero.
FockDensityMatrix truncate_total(const FockDensityMatrix& rho, int total);

/// Shifting phi_c - phi_d by delta must multiply b by e^{-i delta}, c by
/// e^{+i delta} and leave a, d untouched.
double phase_covariance_residual(std::uint64_t seed, int trials = 200);

/// |Phi(w r1 + (1-w) r2) - (w Phi(r1) + (1-w) Phi(r2))|_max over random inputs.
double linearity_residual(std::uint64_t seed, int trials = 50);

/// Change of the |1_p 1_s> output diagonal under random loop-phase shifts.
double two_photon_diagonal_phase_residual(std::uint64_t seed, int trials = 50);

/// Channel on |beta_p> (x) |beta_s> (|beta| = 0.5) truncated to 12 photons
/// in total, against the coherent pair from coherent_output on nmax = 12.
/// Per-mode truncation of the input would let the output leave the cutoff.
double coherent_consistency_residual(std::uint64_t seed, int trials = 6);

}  // namespace dlambda::props
