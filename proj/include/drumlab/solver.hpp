#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

#include "drumlab/basis.hpp"

namespace drumlab {

/// Galerkin discretization of  -Laplacian psi = E SigmaBar psi  in the cube
/// eigenbasis: diagonal stiffness eps_n against the dense symmetric mass
/// B_nk = <n|SigmaBar|k>.
struct GalerkinProblem {
  BasisSpec spec;
  std::vector<MultiIndex> states;  // enumeration order = row/column order
  Eigen::VectorXd stiffness;       // eps_n
  Eigen::MatrixXd mass;            // symmetric positive definite
  int quadrature_order = 0;
  std::string density_hash;
};

struct SpectrumResult {
  BoundaryCondition bc = BoundaryCondition::dirichlet;
  std::vector<double> eigenvalues;  // ascending
  int basis_cutoff = 0;
  int quadrature_order = 0;
  std::string density_hash;

  /// Only the lowest quarter of the computed spectrum is trusted by the
  /// diagnostics; variational accuracy decays toward the cutoff.
  std::size_t reliable_count = 0;

  /// 1-based access, E_1 = lowest.
  double eigenvalue(std::size_t n) const;
};

struct AssemblyOptions {
  int quad_order = 0;          // 0: max(64, 2*cutoff + 16)
  bool parallel = true;        // OpenMP kernels; false = serial reference
  std::size_t basis_cap = 4096;
};

/// Builds stiffness and mass. The mass assembly is the hot kernel: per-axis
/// mode tables contracted against the density grid, OpenMP-parallel over
/// matrix entries with a fixed summation order per entry.
GalerkinProblem assemble(const BasisSpec& spec, const EffectiveDensity& s,
                         const AssemblyOptions& opts = {});

/// Serial reference assembly via basis::matrix_element, kept for testing the
/// parallel kernels and for the benchmark.
Eigen::MatrixXd assemble_mass_reference(const BasisSpec& spec,
                                        const EffectiveDensity& s,
                                        int quad_order);

/// Generic field matrix <i|g|j> over an enumerated state list, same kernels
/// as assemble(); used by the perturbation series for sigma = SigmaBar - 1.
Eigen::MatrixXd field_matrix(const BasisSpec& spec, const EffectiveDensity& s,
                             int quad_order, bool parallel = true);

/// Lowest `count` eigenvalues of the generalized problem via Cholesky of the
/// mass matrix and a dense symmetric eigensolve. Rayleigh-Ritz: each value
/// is an upper bound to the corresponding continuous eigenvalue.
SpectrumResult solve_spectrum(const GalerkinProblem& p, std::size_t count = 0);

/// Counting staircase N(E) = #{k : E_k <= E}. E beyond the reliable range
/// is refused (SolverError).
std::size_t staircase(const SpectrumResult& r, double energy);

/// Xi_N = log10 | 1 - Abar (E_N^D + E_N^N) / (8 pi N) |, floored at -16.
double xi_diagnostic(const SpectrumResult& dirichlet,
                     const SpectrumResult& neumann, double abar,
                     std::size_t n);

/// delta_N = (E_N^D - E_N^N) / 2.
double delta_diagnostic(const SpectrumResult& dirichlet,
                        const SpectrumResult& neumann, std::size_t n);

struct PpwReport {
  double ratio;  // E2/E1
  double bound;  // (j_{1,1}/j_{0,1})^2
  bool violates;
};

/// Payne-Polya-Weinberger audit of a Dirichlet spectrum. A ratio above the
/// disk bound certifies that SigmaBar is not a conformal density.
PpwReport ppw_audit(const SpectrumResult& dirichlet);

}  // namespace drumlab
