#pragma once

#include <functional>
#include <vector>

namespace dlambda {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendreRule(int points);
  int size() const noexcept { return static_cast<int>(nodes.size()); }
};

struct QuadratureResult {
  double value = 0.0;
  double last_change = 0.0;
  int panels = 0;
  bool converged = false;
};

/// Composite rule over `panels` equal panels of [lo, hi].
double composite_gauss_legendre(const std::function<double(double)>& f, double lo, double hi,
                                const GaussLegendreRule& rule, int panels);

/// Doubles the panel count from 1 until two successive estimates differ by
/// at most rel_tol * max(1, |value|), or max_panels is reached.
QuadratureResult integrate_refined(const std::function<double(double)>& f, double lo, double hi,
                                   int points, double rel_tol = 1e-14, int max_panels = 1 << 14);

}  // namespace dlambda
