#include "drumlab/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace drumlab {

namespace {

// Legendre P_n(x) and P_n'(x) by upward recurrence.
void legendre(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

GaussLegendre gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("quadrature order must be >= 1");
  GaussLegendre rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  if (order == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = 2.0;
    return rule;
  }
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-like initial guess for the i-th root (descending).
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double p, dp;
    for (int it = 0; it < 100; ++it) {
      legendre(order, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    legendre(order, x, p, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[order - 1 - i] = x;
    rule.weights[order - 1 - i] = w;
    rule.nodes[i] = -x;
    rule.weights[i] = w;
  }
  if (order % 2 == 1) rule.nodes[half - 1] = 0.0;
  return rule;
}

GaussLegendre GaussLegendre::scaled(double a, double b) const {
  GaussLegendre out;
  const double mid = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  out.nodes.reserve(nodes.size());
  out.weights.reserve(weights.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    out.nodes.push_back(mid + hw * nodes[i]);
    out.weights.push_back(hw * weights[i]);
  }
  return out;
}

}  // namespace drumlab
