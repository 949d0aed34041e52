#pragma once

#include <vector>

namespace herding {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  int order() const noexcept { return static_cast<int>(nodes.size()); }

  /// Integral of f over [a, b].
  template <class F>
  double integrate(double a, double b, F&& f) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(mid + half * nodes[i]);
    return half * sum;
  }
};

/// Rule of the given order (>= 1). Rules are computed once and cached; the
/// returned reference stays valid for the life of the program.
const GaussLegendreRule& gauss_legendre(int order);

}  // namespace herding
