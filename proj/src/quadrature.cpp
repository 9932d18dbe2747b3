#include "dlambda/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/legendre.hpp>

#include "dlambda/errors.hpp"

namespace dlambda {

GaussLegendreRule::GaussLegendreRule(int points) {
  if (points < 1) throw DomainError("Gauss-Legendre rule needs at least one point");
  // boost returns the non-negative zeros in ascending order.
  const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(points);
  auto weight = [points](double x) {
    const double dp = boost::math::legendre_p_prime<double>(points, x);
    return 2.0 / ((1.0 - x * x) * dp * dp);
  };
  for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) {
    if (*it == 0.0) continue;
    nodes.push_back(-*it);
    weights.push_back(weight(*it));
  }
  for (double x : zeros) {
    nodes.push_back(x);
    weights.push_back(weight(x));
  }
}

double composite_gauss_legendre(const std::function<double(double)>& f, double lo, double hi,
                                const GaussLegendreRule& rule, int panels) {
  const double width = (hi - lo) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double left = lo + p * width;
    const double mid = left + 0.5 * width;
    double panel_sum = 0.0;
    for (int i = 0; i < rule.size(); ++i) {
      panel_sum += rule.weights[i] * f(mid + 0.5 * width * rule.nodes[i]);
    }
    total += 0.5 * width * panel_sum;
  }
  return total;
}

QuadratureResult integrate_refined(const std::function<double(double)>& f, double lo, double hi,
                                   int points, double rel_tol, int max_panels) {
  const GaussLegendreRule rule(points);
  QuadratureResult result;
  result.panels = 1;
  result.value = composite_gauss_legendre(f, lo, hi, rule, 1);
  while (result.panels < max_panels) {
    const int next = result.panels * 2;
    const double refined = composite_gauss_legendre(f, lo, hi, rule, next);
    result.last_change = std::abs(refined - result.value);
    result.value = refined;
    result.panels = next;
    if (result.last_change <= rel_tol * std::max(1.0, std::abs(refined))) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace dlambda
