#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "drumlab/basis.hpp"

namespace drumlab {

enum class BcSelect { dirichlet, neumann, both };

/// Flat `key = value` problem description with `#` comments. Recognized
/// keys: dimension, half_side, map, density, bc, cutoff, quadrature,
/// n_min, n_max. Every field has a default.
struct ProblemConfig {
  int dimension = 2;
  double half_side = 1.0;
  std::string map_text = "identity";
  std::string density_text = "1";
  BcSelect bc = BcSelect::both;
  int cutoff = 40;
  int quadrature = 0;  // 0 = auto: max(64, 2*cutoff + 16)
  int n_min = 1;
  int n_max = 200;     // clamped to the reliable range where a solver is involved

  static ProblemConfig parse(std::string_view text);
  static ProblemConfig from_file(const std::filesystem::path& path);

  CubeDomain domain() const { return CubeDomain{dimension, half_side}; }
  ConformalMap map() const { return ConformalMap::parse(map_text, half_side); }
  DensityExpr density() const { return DensityExpr::parse(density_text); }
  EffectiveDensity effective_density() const {
    return EffectiveDensity(domain(), map(), density());
  }
  BasisSpec basis(BoundaryCondition bound) const {
    return BasisSpec{domain(), bound, cutoff};
  }
  int quad_order() const {
    return quadrature > 0 ? quadrature : default_quadrature_order(cutoff);
  }
};

/// Shortest round-trip decimal rendering; the CSV byte-determinism contract.
std::string format_double(double v);

}  // namespace drumlab
