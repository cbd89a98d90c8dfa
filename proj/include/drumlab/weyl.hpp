#pragma once

#include <string>
#include <vector>

#include "drumlab/basis.hpp"

namespace drumlab {

/// Two-term asymptotic estimate for the N-th eigenvalue.
struct WeylEstimate {
  BoundaryCondition bc = BoundaryCondition::dirichlet;
  double n_modes = 0.0;   // N (fractional values allowed)
  double leading = 0.0;   // volume term
  double corrected = 0.0; // leading * (1 +/- surface bracket)
  std::vector<std::string> terms_used;
};

/// Smooth two-term counting function for the homogeneous d-cube, Dirichlet:
/// volume term minus surface term. The integer staircase lives in the
/// solver; these are the asymptotic approximants.
double counting_dirichlet(const CubeDomain& domain, double energy);

/// Neumann counting: same volume term, surface term added instead (the
/// extra states have one quantum number vanishing).
double counting_neumann(const CubeDomain& domain, double energy);

/// Generalized Weyl law for a d-cube filled with density SigmaBar:
///   leading   = (pi / L^2) (2L)^d (Gamma(d/2+1) N)^(2/d) / integral(SigmaBar)
///   corrected = leading * [1 +/- Gamma(d/2+1)^((d-1)/d) / Gamma((d+1)/2) * N^(-1/d)]
/// with + for Dirichlet and - for Neumann.
WeylEstimate weyl_energy_general(const CubeDomain& domain, double sigma_integral,
                                 BoundaryCondition bc, double n_modes);
WeylEstimate weyl_energy_general(const EffectiveDensity& s, BoundaryCondition bc,
                                 double n_modes, int quad_order = 64);

/// d = 2 specialization: 4 pi N / Abar +/- 8 sqrt(pi N) / Abar.
WeylEstimate weyl_energy_2d(double abar, BoundaryCondition bc, double n_modes);

/// Weyl-conjecture form with the boundary integral Lbar in place of the
/// square's perimeter: 4 pi N / Abar +/- (Lbar/Abar) sqrt(4 pi N / Abar).
/// Reduces to weyl_energy_2d when Lbar = 4 sqrt(Abar).
WeylEstimate weyl_conjecture_2d(double lbar, double abar, BoundaryCondition bc,
                                double n_modes);

/// Solves counting(E) = n_modes for E by bisection (monotone beyond the
/// small-E dip); round-trips with the counting functions to ~1e-9 relative.
double invert_counting(const CubeDomain& domain, BoundaryCondition bc,
                       double n_modes);

}  // namespace drumlab
