#pragma once

#include <vector>

#include "drumlab/basis.hpp"

namespace drumlab {

/// Perturbative expansion of one eigenvalue in sigma = SigmaBar - 1:
///   E^(0) = eps_n
///   E^(1) = -eps_n <n|s|n>
///   E^(2) =  eps_n <n|s|n>^2 + eps_n^2 sum_{k!=n} <n|s|k>^2 / w_nk
///   E^(3) = -eps_n <n|s|n>^3 + eps_n^3 <n|s|n> sum_k <n|s|k>^2 / w_nk^2
///           - 3 eps_n^2 <n|s|n> sum_k <n|s|k>^2 / w_nk
///           - eps_n^3 sum_{k!=n} sum_{m!=n} <n|s|k><k|s|m><m|s|n> / (w_nk w_nm)
/// with w_nk = eps_n - eps_k. For constant sigma the orders reproduce the
/// geometric series eps_n (1 - c + c^2 - c^3).
struct PerturbationResult {
  MultiIndex state;
  bool degenerate = false;

  /// E^(0), E^(1) and, for nondegenerate states, E^(2), E^(3).
  std::vector<double> orders;
  /// partial_sums[k] = sum of orders[0..k].
  std::vector<double> partial_sums;

  /// Degenerate states get first-order theory only: the corrections from
  /// diagonalizing sigma on the degenerate subspace, sorted ascending.
  /// orders[1] is then the correction whose subspace eigenvector overlaps
  /// the requested state most.
  std::vector<double> degenerate_first_order;

  /// eps_n / <n|SigmaBar|n>: the geometric-series resummation.
  double resummed = 0.0;

  /// Set when the high-energy decade of the internal sum still contributes
  /// more than 1e-6 of E^(2): k_cutoff is too small to trust the result.
  bool sum_convergence_warning = false;
};

/// Internal sums run over all states with per-axis indices up to k_cutoff
/// (default 3x the largest index of n). The state must lie inside that
/// truncation.
PerturbationResult perturb_energy(const BasisSpec& spec,
                                  const EffectiveDensity& s,
                                  const MultiIndex& n, int k_cutoff = 0);

/// eps_n / <n|SigmaBar|n> with the diagonal element from quadrature. Exact
/// for constant densities.
double resummed_energy(const BasisSpec& spec, const EffectiveDensity& s,
                       const MultiIndex& n, int quad_order = 0);

}  // namespace drumlab
