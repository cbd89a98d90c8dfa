// Times the OpenMP mass-matrix assembly against the serial reference kernel
// at a few basis sizes. The two paths must agree; the reference exists so
// that tests (and this table) can prove it.

#include <omp.h>

#include <cstdio>
#include <string>

#include "drumlab/solver.hpp"

using namespace drumlab;

int main(int argc, char** argv) {
  const double sizes_arg = argc > 1 ? std::stod(argv[1]) : 0.0;
  const CubeDomain domain{2, 1.0};
  const EffectiveDensity density(
      domain, ConformalMap(),
      DensityExpr::parse("1+0.3*cos(pi*x/2)*cos(pi*y/2)"));

  std::printf("%8s %8s %8s %12s %12s %10s %12s\n", "cutoff", "states", "quad",
              "serial[s]", "openmp[s]", "speedup", "max|diff|");
  for (int cutoff : {4, 8, 12, 16}) {
    if (sizes_arg > 0 && cutoff > sizes_arg) break;
    const BasisSpec spec{domain, BoundaryCondition::dirichlet, cutoff};
    const int quad = default_quadrature_order(cutoff);

    const double t0 = omp_get_wtime();
    const Eigen::MatrixXd serial = assemble_mass_reference(spec, density, quad);
    const double t1 = omp_get_wtime();
    const Eigen::MatrixXd parallel = field_matrix(spec, density, quad, true);
    const double t2 = omp_get_wtime();

    const double diff = (serial - parallel).cwiseAbs().maxCoeff();
    std::printf("%8d %8zu %8d %12.4f %12.4f %9.1fx %12.3e\n", cutoff,
                spec.size(), quad, t1 - t0, t2 - t1,
                (t1 - t0) / std::max(t2 - t1, 1e-9), diff);
  }
  std::printf("\nthreads: %d (cap with DRUMLAB_THREADS)\n",
              omp_get_max_threads());
  return 0;
}
