#pragma once

#include <optional>

#include <Eigen/Core>

#include "dlambda/fock.hpp"

namespace dlambda::detail {

double factorial(int n);
int total_photons(int index, int nmax);
/// Largest n_p + n_s touched by a nonzero row or column of `op`; -1 for zero.
int support_total(const Eigen::MatrixXcd& op, int nmax);
/// Frobenius norm of the part of `op` touching sectors with more than `cutoff` photons.
double content_above(const Eigen::MatrixXcd& op, int nmax, int cutoff);
int resolve_output_cutoff(const FockDensityMatrix& rho_in, std::optional<int> nmax_out);

}  // namespace dlambda::detail
