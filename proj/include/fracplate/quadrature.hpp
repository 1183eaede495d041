#pragma once

#include <cstddef>
#include <vector>

namespace fracplate {

struct GaussLegendreRule {
  std::vector<double> nodes;    ///< ascending, in (-1, 1)
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton on the three-term recurrence).
GaussLegendreRule gauss_legendre(std::size_t n);

/// Same rule mapped to [a, b].
GaussLegendreRule gauss_legendre(std::size_t n, double a, double b);

}  // namespace fracplate
