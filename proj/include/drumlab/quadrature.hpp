#pragma once

#include <vector>

namespace drumlab {

/// Gauss-Legendre rule on [-1,1]. Nodes are strictly interior and sorted
/// ascending; exact for polynomials of degree <= 2*order - 1.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  int order() const { return static_cast<int>(nodes.size()); }

  /// Same rule mapped to [a,b], weights scaled by (b-a)/2.
  GaussLegendre scaled(double a, double b) const;
};

GaussLegendre gauss_legendre(int order);

}  // namespace drumlab
