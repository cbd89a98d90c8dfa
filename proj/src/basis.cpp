#include "drumlab/basis.hpp"

#include <algorithm>
#include <cmath>

#include "drumlab/quadrature.hpp"

namespace drumlab {

const char* bc_name(BoundaryCondition bc) {
  return bc == BoundaryCondition::dirichlet ? "dirichlet" : "neumann";
}

std::string MultiIndex::str() const {
  std::string out;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(indices[i]);
  }
  return out;
}

std::size_t BasisSpec::size() const {
  std::size_t n = 1;
  for (int i = 0; i < domain.dimension; ++i) n *= axis_count();
  return n;
}

void BasisSpec::validate(const MultiIndex& n) const {
  if (n.dimension() != domain.dimension)
    throw ConfigError("state " + n.str() + " has wrong dimension for a " +
                      std::to_string(domain.dimension) + "-D domain");
  const int lo = bc == BoundaryCondition::dirichlet ? 1 : 0;
  for (int idx : n.indices) {
    if (idx < lo || idx > cutoff)
      throw ConfigError("state " + n.str() + " is outside the " +
                        std::string(bc_name(bc)) + " basis with cutoff " +
                        std::to_string(cutoff));
  }
}

double mode_value_1d(BoundaryCondition bc, double half_side, int n, double x) {
  const double L = half_side;
  if (bc == BoundaryCondition::dirichlet)
    return std::sin(n * M_PI * (x + L) / (2.0 * L)) / std::sqrt(L);
  if (n == 0) return 1.0 / std::sqrt(2.0 * L);
  const double phase = (M_PI / 4.0) * (1.0 - (n % 2 == 0 ? 1.0 : -1.0));
  return std::cos(n * M_PI * x / (2.0 * L) - phase) / std::sqrt(L);
}

double mode_value(const BasisSpec& spec, const MultiIndex& n,
                  std::span<const double> point) {
  spec.validate(n);
  if (point.size() != n.indices.size())
    throw std::invalid_argument("point dimension does not match the state");
  double prod = 1.0;
  for (std::size_t i = 0; i < point.size(); ++i)
    prod *= mode_value_1d(spec.bc, spec.domain.half_side, n.indices[i], point[i]);
  return prod;
}

double mode_energy(const BasisSpec& spec, const MultiIndex& n) {
  spec.validate(n);
  double sq = 0.0;
  for (int idx : n.indices) sq += static_cast<double>(idx) * idx;
  const double L = spec.domain.half_side;
  return M_PI * M_PI / (4.0 * L * L) * sq;
}

double energy_gap(const BasisSpec& spec, const MultiIndex& n, const MultiIndex& k) {
  return mode_energy(spec, n) - mode_energy(spec, k);
}

bool nearly_degenerate(double eps_n, double eps_k) {
  return std::abs(eps_n - eps_k) <= 1e-9 * std::max(1.0, eps_n);
}

std::vector<MultiIndex> enumerate_states(const BasisSpec& spec) {
  if (spec.cutoff < 1) throw ConfigError("basis cutoff must be >= 1");
  const int d = spec.domain.dimension;
  const int lo = spec.bc == BoundaryCondition::dirichlet ? 1 : 0;

  std::vector<MultiIndex> states;
  states.reserve(spec.size());
  std::vector<int> idx(d, lo);
  while (true) {
    states.emplace_back(idx);
    int axis = d - 1;
    while (axis >= 0 && ++idx[axis] > spec.cutoff) idx[axis--] = lo;
    if (axis < 0) break;
  }

  auto index_square = [](const MultiIndex& m) {
    long long s = 0;
    for (int i : m.indices) s += static_cast<long long>(i) * i;
    return s;
  };
  std::sort(states.begin(), states.end(),
            [&](const MultiIndex& a, const MultiIndex& b) {
              const long long ea = index_square(a), eb = index_square(b);
              if (ea != eb) return ea < eb;
              return a.indices < b.indices;
            });
  return states;
}

int default_quadrature_order(int cutoff) {
  return std::max(64, 2 * cutoff + 16);
}

double matrix_element(const BasisSpec& spec, const MultiIndex& n,
                      const MultiIndex& k, const ScalarField& g,
                      int quad_order) {
  spec.validate(n);
  spec.validate(k);
  const int d = spec.domain.dimension;
  const double L = spec.domain.half_side;
  const int q = quad_order > 0 ? quad_order : default_quadrature_order(spec.cutoff);
  const GaussLegendre rule = gauss_legendre(q).scaled(-L, L);

  // Per-axis mode values at the nodes.
  std::vector<std::vector<double>> vn(d), vk(d);
  for (int axis = 0; axis < d; ++axis) {
    vn[axis].resize(q);
    vk[axis].resize(q);
    for (int i = 0; i < q; ++i) {
      vn[axis][i] = mode_value_1d(spec.bc, L, n.indices[axis], rule.nodes[i]);
      vk[axis][i] = mode_value_1d(spec.bc, L, k.indices[axis], rule.nodes[i]);
    }
  }

  std::vector<int> idx(d, 0);
  std::vector<double> x(d);
  double sum = 0.0;
  while (true) {
    double w = 1.0;
    for (int axis = 0; axis < d; ++axis) {
      x[axis] = rule.nodes[idx[axis]];
      w *= rule.weights[idx[axis]] * vn[axis][idx[axis]] * vk[axis][idx[axis]];
    }
    sum += w * g(x);
    int axis = d - 1;
    while (axis >= 0 && ++idx[axis] == q) idx[axis--] = 0;
    if (axis < 0) break;
  }
  return sum;
}

double matrix_element(const BasisSpec& spec, const MultiIndex& n,
                      const MultiIndex& k, const EffectiveDensity& s,
                      int quad_order) {
  return matrix_element(
      spec, n, k, [&s](std::span<const double> x) { return s(x); }, quad_order);
}

double mean_density_approximation(const EffectiveDensity& s, int quad_order) {
  return area_integral(s, quad_order) / s.domain().volume();
}

}  // namespace drumlab
