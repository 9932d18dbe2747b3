#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "dlambda/medium.hpp"

namespace dlambda {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

/// Choi matrix sum_ij |i><j| (x) Phi(|i><j|) of the channel restricted to
/// inputs with cutoff nmax_in; outputs use cutoff 2 * nmax_in so nothing is
/// truncated.
Eigen::MatrixXcd choi_matrix(const TransferMatrix& tm, int nmax_in);

/// Medium parameter grid shared by the integrity checks: od in
/// {0, 1, 10, 50, 200, 1000} x delta in {0, 1, 13, od/pi, od/2pi} x loop
/// phase in {0, pi/3, pi}.
std::vector<MediumParams> integrity_grid();

std::vector<CheckResult> run_integrity_checks(int quad_points = 16);

}  // namespace dlambda
