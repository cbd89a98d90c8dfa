#pragma once

#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "drumlab/exprdsl.hpp"

namespace drumlab {

/// Reference domain: d-cube of side 2L centered at the origin.
struct CubeDomain {
  int dimension = 2;
  double half_side = 1.0;

  double volume() const;   // (2L)^d
  double surface() const;  // 2d * (2L)^(d-1)
};

/// Conformal map w = f(z) from the reference square [-L,L]^2 to a target
/// shape, built by composing primitive stages left to right. Immutable;
/// evaluation is pure.
class ConformalMap {
 public:
  struct Identity {};
  struct Affine {
    std::complex<double> a;  // a != 0
    std::complex<double> b;
  };
  struct PolySeries {
    std::vector<std::complex<double>> coeffs;  // w = sum_k c_k z^k, k >= 1
  };
  /// Schwarz-Christoffel map of [-L,L]^2 onto the unit disk, evaluated
  /// through Jacobi elliptic functions with modulus 1/sqrt(2).
  struct SquareToDisk {
    double half_side = 1.0;
  };
  using Stage = std::variant<Identity, Affine, PolySeries, SquareToDisk>;

  ConformalMap() = default;  // identity
  explicit ConformalMap(std::vector<Stage> stages);

  /// Textual form: `identity`, `affine(a_re,a_im,b_re,b_im)`,
  /// `poly(c1_re,c1_im; c2_re,c2_im; ...)`, `square_to_disk`, composed
  /// left-to-right with `|`. `half_side` fixes the source square of any
  /// square_to_disk stage.
  static ConformalMap parse(std::string_view text, double half_side);

  std::complex<double> map(std::complex<double> z) const;

  /// Chain-rule product of stage derivatives. Throws CornerSingularityError
  /// when a square_to_disk stage is evaluated at a corner of its source
  /// square, where f' vanishes.
  std::complex<double> derivative(std::complex<double> z) const;

  /// Sigma = |f'(z)|^2.
  double conformal_density(std::complex<double> z) const;

  bool is_identity() const { return stages_.empty(); }
  const std::vector<Stage>& stages() const { return stages_; }
  std::string str() const;

 private:
  std::vector<Stage> stages_;
};

/// Effective density SigmaBar(x) = Sigma(x) * rho(f(x)) on the reference
/// cube: the single scalar field the solver, perturbation series and Weyl
/// formulas consume. For non-identity maps the domain must be 2-D.
class EffectiveDensity {
 public:
  EffectiveDensity(CubeDomain domain, ConformalMap map, DensityExpr rho);

  /// SigmaBar at an interior point; positive by contract (EvalError
  /// otherwise).
  double operator()(std::span<const double> coords) const;
  double value(double x, double y) const;

  /// SigmaBar on the boundary, where isolated zeros are legitimate: map
  /// derivatives vanish at square corners and at target cusps. Negative or
  /// non-finite values are still errors.
  double boundary_value(double x, double y) const;

  const CubeDomain& domain() const { return domain_; }
  const ConformalMap& map() const { return map_; }
  const DensityExpr& rho() const { return rho_; }
  std::string str() const;

  static EffectiveDensity uniform(CubeDomain domain);

 private:
  double raw_value(std::span<const double> coords) const;

  CubeDomain domain_;
  ConformalMap map_;
  DensityExpr rho_;
};

/// Abar = integral of SigmaBar over the cube, tensor-product Gauss-Legendre
/// with `order` nodes per axis.
double area_integral(const EffectiveDensity& s, int order = 64);

/// Lbar = integral of sqrt(SigmaBar) over the four edges of the reference
/// square (d = 2 only). Gauss nodes are interior, so map corners are never
/// touched.
double boundary_integral(const EffectiveDensity& s, int order = 64);

struct IsoperimetricReport {
  double ratio;         // Lbar / Abar
  double circle_ratio;  // circumference/area of the disk with area Abar
  bool conformal_admissible;
};

/// A density whose (Lbar, Abar) fall below the disk's isoperimetric ratio
/// cannot come from any conformal map. Equality counts as admissible.
IsoperimetricReport isoperimetric_check(double lbar, double abar);

}  // namespace drumlab
