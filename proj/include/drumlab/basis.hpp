#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "drumlab/geometry.hpp"

namespace drumlab {

enum class BoundaryCondition { dirichlet, neumann };

const char* bc_name(BoundaryCondition bc);

/// Quantum numbers (n_1,...,n_d) of a cube mode. Dirichlet indices start at
/// 1, Neumann at 0.
struct MultiIndex {
  std::vector<int> indices;

  MultiIndex() = default;
  MultiIndex(std::initializer_list<int> init) : indices(init) {}
  explicit MultiIndex(std::vector<int> idx) : indices(std::move(idx)) {}

  int dimension() const { return static_cast<int>(indices.size()); }
  bool operator==(const MultiIndex&) const = default;
  std::string str() const;  // "1,2"
};

/// Truncated cube eigenbasis: every per-axis index <= cutoff.
struct BasisSpec {
  CubeDomain domain;
  BoundaryCondition bc = BoundaryCondition::dirichlet;
  int cutoff = 40;

  /// Indices available per axis: 1..cutoff (Dirichlet) or 0..cutoff (Neumann).
  int axis_count() const {
    return bc == BoundaryCondition::dirichlet ? cutoff : cutoff + 1;
  }
  std::size_t size() const;

  /// Throws ConfigError for out-of-range or wrong-dimension indices.
  void validate(const MultiIndex& n) const;
};

/// 1-D mode on [-L,L]:
///   Dirichlet (n >= 1): sin(n pi (x+L) / 2L) / sqrt(L)
///   Neumann   (n >= 1): cos(n pi x / 2L - (pi/4)(1-(-1)^n)) / sqrt(L)
///   Neumann   (n == 0): 1 / sqrt(2L)
double mode_value_1d(BoundaryCondition bc, double half_side, int n, double x);

double mode_value(const BasisSpec& spec, const MultiIndex& n,
                  std::span<const double> point);

/// eps_n = (pi^2 / 4L^2) * sum n_i^2.
double mode_energy(const BasisSpec& spec, const MultiIndex& n);

/// omega_nk = eps_n - eps_k.
double energy_gap(const BasisSpec& spec, const MultiIndex& n, const MultiIndex& k);

/// Levels closer than 1e-9 * max(1, eps_n) are treated as degenerate.
bool nearly_degenerate(double eps_n, double eps_k);

/// All valid indices sorted by (energy, lexicographic index): a stable total
/// order putting degenerate levels next to each other.
std::vector<MultiIndex> enumerate_states(const BasisSpec& spec);

/// Per-axis Gauss-Legendre order that keeps integrands oscillating at the
/// basis cutoff resolved: max(64, 2*cutoff + 16).
int default_quadrature_order(int cutoff);

using ScalarField = std::function<double(std::span<const double>)>;

/// <n|g|k> by tensor-product Gauss-Legendre in a fixed node order. This is
/// the serial reference kernel; the solver's OpenMP assembly must agree
/// with it.
double matrix_element(const BasisSpec& spec, const MultiIndex& n,
                      const MultiIndex& k, const ScalarField& g,
                      int quad_order);

double matrix_element(const BasisSpec& spec, const MultiIndex& n,
                      const MultiIndex& k, const EffectiveDensity& s,
                      int quad_order);

/// Large-index limit of <n|SigmaBar|n>: the cube average of SigmaBar.
double mean_density_approximation(const EffectiveDensity& s, int quad_order = 64);

}  // namespace drumlab
