#include "drumlab/weyl.hpp"

#include <cmath>
#include <stdexcept>

namespace drumlab {

namespace {

// Surface term of the cube counting function (positive magnitude).
double surface_term(const CubeDomain& domain, double energy) {
  const int d = domain.dimension;
  const double side = 2.0 * domain.half_side;
  return std::pow(4.0 * M_PI, -0.5 * d) * std::pow(side, d - 1) * d *
         std::sqrt(M_PI) / std::tgamma(0.5 * d + 0.5) *
         std::pow(energy, 0.5 * (d - 1));
}

double volume_term(const CubeDomain& domain, double energy) {
  const int d = domain.dimension;
  const double side = 2.0 * domain.half_side;
  return std::pow(4.0 * M_PI, -0.5 * d) * std::pow(side, d) /
         std::tgamma(0.5 * d + 1.0) * std::pow(energy, 0.5 * d);
}

void check_counting_args(const CubeDomain& domain, double energy) {
  if (domain.dimension < 1) throw std::invalid_argument("dimension must be >= 1");
  if (energy < 0.0) throw std::invalid_argument("energy must be >= 0");
}

}  // namespace

double counting_dirichlet(const CubeDomain& domain, double energy) {
  check_counting_args(domain, energy);
  return volume_term(domain, energy) - surface_term(domain, energy);
}

double counting_neumann(const CubeDomain& domain, double energy) {
  check_counting_args(domain, energy);
  return volume_term(domain, energy) + surface_term(domain, energy);
}

WeylEstimate weyl_energy_general(const CubeDomain& domain, double sigma_integral,
                                 BoundaryCondition bc, double n_modes) {
  if (sigma_integral <= 0.0)
    throw EvalError("nonpositive density integral in weyl_energy_general");
  if (n_modes < 1.0)
    throw std::invalid_argument("weyl_energy_general requires N >= 1");
  const int d = domain.dimension;
  const double L = domain.half_side;

  WeylEstimate est;
  est.bc = bc;
  est.n_modes = n_modes;
  est.leading = M_PI / (L * L) * std::pow(2.0 * L, d) *
                std::pow(std::tgamma(0.5 * d + 1.0) * n_modes, 2.0 / d) /
                sigma_integral;
  const double bracket = std::pow(std::tgamma(0.5 * d + 1.0),
                                  static_cast<double>(d - 1) / d) /
                         std::tgamma(0.5 * (d + 1)) *
                         std::pow(n_modes, -1.0 / d);
  const double sign = bc == BoundaryCondition::dirichlet ? 1.0 : -1.0;
  est.corrected = est.leading * (1.0 + sign * bracket);
  est.terms_used = {"volume", "surface"};
  return est;
}

WeylEstimate weyl_energy_general(const EffectiveDensity& s, BoundaryCondition bc,
                                 double n_modes, int quad_order) {
  return weyl_energy_general(s.domain(), area_integral(s, quad_order), bc,
                             n_modes);
}

WeylEstimate weyl_energy_2d(double abar, BoundaryCondition bc, double n_modes) {
  if (abar <= 0.0) throw EvalError("nonpositive Abar");
  if (n_modes < 1.0) throw std::invalid_argument("weyl_energy_2d requires N >= 1");
  WeylEstimate est;
  est.bc = bc;
  est.n_modes = n_modes;
  est.leading = 4.0 * M_PI * n_modes / abar;
  const double sign = bc == BoundaryCondition::dirichlet ? 1.0 : -1.0;
  est.corrected = est.leading + sign * 8.0 * std::sqrt(M_PI * n_modes) / abar;
  est.terms_used = {"volume", "surface"};
  return est;
}

WeylEstimate weyl_conjecture_2d(double lbar, double abar, BoundaryCondition bc,
                                double n_modes) {
  if (abar <= 0.0 || lbar <= 0.0) throw EvalError("nonpositive Abar or Lbar");
  if (n_modes < 1.0)
    throw std::invalid_argument("weyl_conjecture_2d requires N >= 1");
  WeylEstimate est;
  est.bc = bc;
  est.n_modes = n_modes;
  est.leading = 4.0 * M_PI * n_modes / abar;
  const double sign = bc == BoundaryCondition::dirichlet ? 1.0 : -1.0;
  est.corrected = est.leading + sign * (lbar / abar) * std::sqrt(est.leading);
  est.terms_used = {"volume", "boundary-integral"};
  return est;
}

double invert_counting(const CubeDomain& domain, BoundaryCondition bc,
                       double n_modes) {
  if (n_modes < 1.0) throw std::invalid_argument("invert_counting requires N >= 1");
  const auto counting = bc == BoundaryCondition::dirichlet ? counting_dirichlet
                                                           : counting_neumann;
  // Start from the homogeneous leading-order inverse and double until the
  // target is bracketed.
  const int d = domain.dimension;
  double hi = 4.0 * M_PI *
              std::pow(std::tgamma(0.5 * d + 1.0) * n_modes / domain.volume(),
                       2.0 / d);
  hi = std::max(hi, 1.0);
  while (counting(domain, hi) < n_modes) {
    hi *= 2.0;
    if (hi > 1e12)
      throw SolverError("invert_counting: no root below the 1e12 energy cap");
  }
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (counting(domain, mid) < n_modes)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-12 * hi) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace drumlab
