#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "drumlab/solver.hpp"

using namespace drumlab;

namespace {

const CubeDomain kSquare{2, 1.0};
const CubeDomain kPiSquare{2, M_PI / 2.0};

EffectiveDensity constant_density(const CubeDomain& domain, double c) {
  return EffectiveDensity(domain, ConformalMap(),
                          DensityExpr::parse(std::to_string(c)));
}

EffectiveDensity cardioid_density(double scale = std::sqrt(2.0 / 3.0)) {
  return EffectiveDensity(
      kSquare,
      ConformalMap::parse("square_to_disk | poly(" + std::to_string(scale) +
                              ",0; " + std::to_string(scale / 2) + ",0)",
                          1.0),
      DensityExpr::parse("1/(1+4*(u^2+v^2))"));
}

EffectiveDensity cosine_bump(double eps) {
  return EffectiveDensity(
      kSquare, ConformalMap(),
      DensityExpr::parse("1+" + std::to_string(eps) +
                         "*cos(pi*x/2)*cos(pi*y/2)"));
}

}  // namespace

TEST_CASE("uniform density gives the identity mass matrix") {
  const BasisSpec spec{kSquare, BoundaryCondition::dirichlet, 5};
  const GalerkinProblem p = assemble(spec, EffectiveDensity::uniform(kSquare));
  CHECK((p.mass - Eigen::MatrixXd::Identity(25, 25)).cwiseAbs().maxCoeff() < 1e-12);

  const GalerkinProblem pc = assemble(spec, constant_density(kSquare, 2.5));
  CHECK((pc.mass - 2.5 * Eigen::MatrixXd::Identity(25, 25)).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("1-D mass matrix matches the closed-form diagonal element") {
  const CubeDomain line{1, 1.0};
  const BasisSpec spec{line, BoundaryCondition::dirichlet, 6};
  const EffectiveDensity s(line, ConformalMap(), DensityExpr::parse("1+x^2"));
  const GalerkinProblem p = assemble(spec, s);
  CHECK(p.mass(0, 0) ==
        doctest::Approx(1.0 + 1.0 / 3.0 - 2.0 / (M_PI * M_PI)).epsilon(1e-12));
}

TEST_CASE("parallel kernels agree with the serial reference") {
  const int quad = 32;
  // d = 2, nontrivial map + density
  {
    const BasisSpec spec{kSquare, BoundaryCondition::dirichlet, 6};
    const EffectiveDensity s = cardioid_density();
    const Eigen::MatrixXd ref = assemble_mass_reference(spec, s, quad);
    const Eigen::MatrixXd par = field_matrix(spec, s, quad, true);
    CHECK((ref - par).cwiseAbs().maxCoeff() < 1e-12);
  }
  // d = 1
  {
    const CubeDomain line{1, 1.0};
    const BasisSpec spec{line, BoundaryCondition::neumann, 7};
    const EffectiveDensity s(line, ConformalMap(), DensityExpr::parse("1+0.5*x^2"));
    const Eigen::MatrixXd ref = assemble_mass_reference(spec, s, quad);
    const Eigen::MatrixXd par = field_matrix(spec, s, quad, true);
    CHECK((ref - par).cwiseAbs().maxCoeff() < 1e-13);
  }
  // d = 3
  {
    const CubeDomain cube{3, 1.0};
    const BasisSpec spec{cube, BoundaryCondition::dirichlet, 2};
    const EffectiveDensity s(cube, ConformalMap(), DensityExpr::parse("1+0.2*x*y"));
    const Eigen::MatrixXd ref = assemble_mass_reference(spec, s, 16);
    const Eigen::MatrixXd par = field_matrix(spec, s, 16, true);
    CHECK((ref - par).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("assembly is deterministic across thread counts") {
  const BasisSpec spec{kSquare, BoundaryCondition::dirichlet, 8};
  const EffectiveDensity s = cosine_bump(0.3);
  const int max_threads = omp_get_max_threads();

  omp_set_num_threads(1);
  const Eigen::MatrixXd m1 = field_matrix(spec, s, 48, true);
  omp_set_num_threads(std::max(2, max_threads));
  const Eigen::MatrixXd m2 = field_matrix(spec, s, 48, true);
  omp_set_num_threads(max_threads);

  REQUIRE(m1.size() == m2.size());
  CHECK(std::memcmp(m1.data(), m2.data(), sizeof(double) * m1.size()) == 0);
}

TEST_CASE("homogeneous pi-square spectrum is the integer lattice") {
  const BasisSpec spec{kPiSquare, BoundaryCondition::dirichlet, 8};
  const GalerkinProblem p = assemble(spec, EffectiveDensity::uniform(kPiSquare));
  const SpectrumResult r = solve_spectrum(p);
  const double expected[] = {2, 5, 5, 8, 10, 10, 13, 13, 17, 17, 18};
  for (std::size_t i = 0; i < std::size(expected); ++i)
    CHECK(r.eigenvalues[i] == doctest::Approx(expected[i]).epsilon(1e-10));

  // Constant scaling halves every eigenvalue.
  const GalerkinProblem p2 = assemble(spec, constant_density(kPiSquare, 2.0));
  const SpectrumResult r2 = solve_spectrum(p2);
  for (std::size_t i = 0; i < std::size(expected); ++i)
    CHECK(r2.eigenvalues[i] == doctest::Approx(expected[i] / 2.0).epsilon(1e-10));
}

TEST_CASE("density scaling acts exactly at the linear-algebra level") {
  const BasisSpec spec{kSquare, BoundaryCondition::dirichlet, 6};
  const EffectiveDensity base = cosine_bump(0.4);
  const EffectiveDensity scaled(
      kSquare, ConformalMap(),
      DensityExpr::parse("3*(1+0.4*cos(pi*x/2)*cos(pi*y/2))"));
  const SpectrumResult rb = solve_spectrum(assemble(spec, base));
  const SpectrumResult rs = solve_spectrum(assemble(spec, scaled));
  for (std::size_t i = 0; i < rb.eigenvalues.size(); ++i)
    CHECK(rs.eigenvalues[i] ==
          doctest::Approx(rb.eigenvalues[i] / 3.0).epsilon(1e-12));
}

TEST_CASE("Rayleigh-Ritz eigenvalues decrease with cutoff") {
  const EffectiveDensity s = cardioid_density();
  const SpectrumResult coarse = solve_spectrum(
      assemble(BasisSpec{kSquare, BoundaryCondition::dirichlet, 8}, s));
  const SpectrumResult fine = solve_spectrum(
      assemble(BasisSpec{kSquare, BoundaryCondition::dirichlet, 16}, s));
  for (std::size_t i = 0; i < coarse.reliable_count; ++i)
    CHECK(fine.eigenvalues[i] <= coarse.eigenvalues[i] + 1e-10);
}

TEST_CASE("Neumann spectrum keeps the exact zero mode") {
  for (const EffectiveDensity& s :
       {cosine_bump(0.5), cardioid_density(), constant_density(kSquare, 3.0)}) {
    const SpectrumResult r = solve_spectrum(
        assemble(BasisSpec{kSquare, BoundaryCondition::neumann, 8}, s));
    CHECK(std::abs(r.eigenvalue(1)) <= 1e-8 * r.eigenvalue(2));
  }
}

TEST_CASE("staircase") {
  const BasisSpec spec{kPiSquare, BoundaryCondition::dirichlet, 24};
  const SpectrumResult r =
      solve_spectrum(assemble(spec, EffectiveDensity::uniform(kPiSquare)));
  REQUIRE(r.reliable_count >= 100);
  CHECK(staircase(r, 10.0) == 6);
  CHECK(staircase(r, 1.0) == 0);  // below E_1 = 2
  CHECK(staircase(r, 100.0) == 69);
  CHECK(staircase(r, 2.0) == 1);
  CHECK_THROWS_AS((void)staircase(r, 1e9), SolverError);
}

TEST_CASE("xi and delta diagnostics") {
  // Perfect agreement hits the -16 floor.
  SpectrumResult d, n;
  d.bc = BoundaryCondition::dirichlet;
  n.bc = BoundaryCondition::neumann;
  const double abar = 4.0;
  d.eigenvalues = {8 * M_PI / abar, 16 * M_PI / abar};
  n.eigenvalues = {0.0, 0.0};
  d.reliable_count = n.reliable_count = 2;
  // E_D + E_N = 8 pi N / Abar for N = 1.
  CHECK(xi_diagnostic(d, n, abar, 1) == -16.0);
  CHECK(delta_diagnostic(d, n, 1) == doctest::Approx(4 * M_PI / abar));
  CHECK_THROWS_AS((void)xi_diagnostic(d, n, abar, 3), SolverError);

  // Homogeneous square: Dirichlet dominates Neumann level by level.
  const SpectrumResult rd = solve_spectrum(
      assemble(BasisSpec{kSquare, BoundaryCondition::dirichlet, 12},
               EffectiveDensity::uniform(kSquare)));
  const SpectrumResult rn = solve_spectrum(
      assemble(BasisSpec{kSquare, BoundaryCondition::neumann, 12},
               EffectiveDensity::uniform(kSquare)));
  for (std::size_t k = 1; k <= rd.reliable_count; ++k)
    CHECK(delta_diagnostic(rd, rn, k) > 0.0);

  const double xi1 = xi_diagnostic(rd, rn, 4.0, 1);
  const double expected =
      std::log10(std::abs(1.0 - 4.0 * (rd.eigenvalue(1) + rn.eigenvalue(1)) /
                                    (8.0 * M_PI)));
  CHECK(xi1 == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("PPW audit") {
  const SpectrumResult homog = solve_spectrum(
      assemble(BasisSpec{kPiSquare, BoundaryCondition::dirichlet, 8},
               EffectiveDensity::uniform(kPiSquare)));
  const PpwReport rep = ppw_audit(homog);
  CHECK(rep.ratio == doctest::Approx(2.5).epsilon(1e-10));
  CHECK(rep.bound == doctest::Approx(2.539).epsilon(1e-3));
  CHECK_FALSE(rep.violates);

  // A homogeneous drum in disguise: map-only density stays within the bound.
  const EffectiveDensity disguised(
      kSquare, ConformalMap::parse("square_to_disk | poly(1,0; 0.5,0)", 1.0),
      DensityExpr());
  const PpwReport drum = ppw_audit(solve_spectrum(
      assemble(BasisSpec{kSquare, BoundaryCondition::dirichlet, 16}, disguised)));
  CHECK_FALSE(drum.violates);

  // The genuinely inhomogeneous cardioid violates it.
  const PpwReport violating = ppw_audit(solve_spectrum(
      assemble(BasisSpec{kSquare, BoundaryCondition::dirichlet, 16},
               cardioid_density())));
  CHECK(violating.ratio == doctest::Approx(2.78).epsilon(0.05));
  CHECK(violating.violates);

  SpectrumResult tiny;
  tiny.bc = BoundaryCondition::dirichlet;
  tiny.eigenvalues = {1.0};
  CHECK_THROWS_AS((void)ppw_audit(tiny), SolverError);
}

TEST_CASE("resummation agrees with the solver to first order") {
  const BasisSpec spec{kSquare, BoundaryCondition::dirichlet, 10};
  auto residual = [&](double eps) {
    const EffectiveDensity s = cosine_bump(eps);
    const SpectrumResult r = solve_spectrum(assemble(spec, s));
    const double diag =
        matrix_element(spec, MultiIndex{1, 1}, MultiIndex{1, 1}, s, 64);
    const double resummed = mode_energy(spec, MultiIndex{1, 1}) / diag;
    return std::abs(resummed - r.eigenvalue(1));
  };
  const double r1 = residual(0.2);
  const double r2 = residual(0.1);
  CHECK(r1 / r2 > 2.5);  // O(eps^2) residual shrinks ~4x per halving
  CHECK(r1 / r2 < 6.0);
  CHECK(residual(0.05) < 5e-3 * mode_energy(spec, MultiIndex{1, 1}));
}

TEST_CASE("failure modes") {
  // Basis cap.
  AssemblyOptions opts;
  opts.basis_cap = 100;
  CHECK_THROWS_AS((void)assemble(BasisSpec{kSquare, BoundaryCondition::dirichlet, 11},
                                 EffectiveDensity::uniform(kSquare), opts),
                  SolverError);

  // Rank-deficient mass from an under-resolved quadrature.
  AssemblyOptions bad;
  bad.quad_order = 2;
  const CubeDomain line{1, 1.0};
  const GalerkinProblem p = assemble(BasisSpec{line, BoundaryCondition::dirichlet, 6},
                                     EffectiveDensity::uniform(line), bad);
  CHECK_THROWS_AS((void)solve_spectrum(p), SolverError);

  // Domain mismatch between basis and density.
  CHECK_THROWS_AS((void)assemble(BasisSpec{kPiSquare, BoundaryCondition::dirichlet, 4},
                                 EffectiveDensity::uniform(kSquare)),
                  ConfigError);
}

TEST_CASE("spectrum metadata") {
  const BasisSpec spec{kSquare, BoundaryCondition::dirichlet, 6};
  const SpectrumResult r =
      solve_spectrum(assemble(spec, EffectiveDensity::uniform(kSquare)));
  CHECK(r.reliable_count == 36 / 4);
  CHECK(r.basis_cutoff == 6);
  CHECK(r.density_hash.size() == 16);
  CHECK_THROWS_AS((void)r.eigenvalue(0), SolverError);
  CHECK_THROWS_AS((void)r.eigenvalue(37), SolverError);
  CHECK(std::is_sorted(r.eigenvalues.begin(), r.eigenvalues.end()));
}
