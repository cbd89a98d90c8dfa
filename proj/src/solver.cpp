#include "drumlab/solver.hpp"

#include <cmath>
#include <cstdint>

#include "drumlab/quadrature.hpp"

namespace drumlab {

namespace {

// Per-axis mode values at the quadrature nodes: table[i][a] = psi_i(x_a).
std::vector<std::vector<double>> mode_table(const BasisSpec& spec,
                                            const GaussLegendre& rule) {
  const int lo = spec.bc == BoundaryCondition::dirichlet ? 1 : 0;
  const int count = spec.axis_count();
  std::vector<std::vector<double>> table(count);
  for (int i = 0; i < count; ++i) {
    table[i].resize(rule.order());
    for (int a = 0; a < rule.order(); ++a)
      table[i][a] =
          mode_value_1d(spec.bc, spec.domain.half_side, lo + i, rule.nodes[a]);
  }
  return table;
}

// Density values on the tensor grid; evaluating here also enforces the
// positivity invariant at every interior node.
std::vector<double> density_grid(const EffectiveDensity& s,
                                 const GaussLegendre& rule, int d) {
  const int q = rule.order();
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= q;
  std::vector<double> grid(total);

  if (d == 1) {
    for (int a = 0; a < q; ++a) {
      const double x[1] = {rule.nodes[a]};
      grid[a] = s(std::span<const double>(x, 1));
    }
  } else if (d == 2) {
    // Exceptions may not cross the parallel region; marshal them out.
    std::exception_ptr error;
#pragma omp parallel for schedule(static)
    for (int a = 0; a < q; ++a) {
      try {
        for (int b = 0; b < q; ++b)
          grid[a * q + b] = s.value(rule.nodes[a], rule.nodes[b]);
      } catch (...) {
#pragma omp critical
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
  } else {
    std::vector<int> idx(d, 0);
    std::vector<double> x(d);
    for (std::size_t flat = 0; flat < total; ++flat) {
      for (int i = 0; i < d; ++i) x[i] = rule.nodes[idx[i]];
      grid[flat] = s(x);
      int axis = d - 1;
      while (axis >= 0 && ++idx[axis] == q) idx[axis--] = 0;
    }
  }
  return grid;
}

// Symmetric pair id for per-axis index pairs (i <= j).
inline std::size_t pair_id(std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  return j * (j + 1) / 2 + i;
}

// d = 1: B_nk = sum_a psi_n(x_a) psi_k(x_a) SigmaBar(x_a) w_a.
Eigen::MatrixXd mass_1d(const BasisSpec& spec,
                        const std::vector<MultiIndex>& states,
                        const GaussLegendre& rule,
                        const std::vector<double>& grid,
                        const std::vector<std::vector<double>>& modes,
                        bool parallel) {
  const int lo = spec.bc == BoundaryCondition::dirichlet ? 1 : 0;
  const auto nstates = static_cast<std::ptrdiff_t>(states.size());
  const int q = rule.order();
  Eigen::MatrixXd mass(nstates, nstates);

#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t r = 0; r < nstates; ++r) {
    const int i = states[r].indices[0] - lo;
    for (std::ptrdiff_t c = r; c < nstates; ++c) {
      const int j = states[c].indices[0] - lo;
      double sum = 0.0;
      for (int a = 0; a < q; ++a)
        sum += modes[i][a] * modes[j][a] * grid[a] * rule.weights[a];
      mass(r, c) = sum;
      mass(c, r) = sum;
    }
  }
  return mass;
}

// d = 2: factor the tensor contraction through the x axis,
//   U[a][p]   = psi_i(x_a) psi_j(x_a) w_a        for the axis pair p=(i,j)
//   W[b][p]   = sum_a U[a][p] SigmaBar(x_a, y_b)
//   B[nm][kl] = sum_b W[b][(n,k)] U[b][(m,l)]
// Pair tables are stored one pair per column so the inner dots run over
// contiguous memory. Every entry is a fixed-order dot product, so the
// result is independent of the thread count.
Eigen::MatrixXd mass_2d(const BasisSpec& spec,
                        const std::vector<MultiIndex>& states,
                        const GaussLegendre& rule,
                        const std::vector<double>& grid,
                        const std::vector<std::vector<double>>& modes,
                        bool parallel) {
  const int lo = spec.bc == BoundaryCondition::dirichlet ? 1 : 0;
  const int count = spec.axis_count();
  const int q = rule.order();
  const std::size_t npairs = pair_id(count - 1, count - 1) + 1;

  Eigen::MatrixXd pair_table(q, npairs);   // U
  Eigen::MatrixXd contracted(q, npairs);   // W
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                       Eigen::RowMajor>>
      sigma(grid.data(), q, q);

#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t j = 0; j < count; ++j) {
    for (std::ptrdiff_t i = 0; i <= j; ++i) {
      const std::size_t p = pair_id(i, j);
      for (int a = 0; a < q; ++a)
        pair_table(a, p) = modes[i][a] * modes[j][a] * rule.weights[a];
      contracted.col(p).noalias() = sigma.transpose() * pair_table.col(p);
    }
  }

  const auto nstates = static_cast<std::ptrdiff_t>(states.size());
  Eigen::MatrixXd mass(nstates, nstates);
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
  for (std::ptrdiff_t r = 0; r < nstates; ++r) {
    const std::size_t rx = states[r].indices[0] - lo;
    const std::size_t ry = states[r].indices[1] - lo;
    for (std::ptrdiff_t c = r; c < nstates; ++c) {
      const std::size_t p1 = pair_id(rx, states[c].indices[0] - lo);
      const std::size_t p2 = pair_id(ry, states[c].indices[1] - lo);
      const double v = contracted.col(p1).dot(pair_table.col(p2));
      mass(r, c) = v;
      mass(c, r) = v;
    }
  }
  return mass;
}

// d >= 3: per-entry tensor sums over the cached grid, parallel over entries.
Eigen::MatrixXd mass_nd(const BasisSpec& spec,
                        const std::vector<MultiIndex>& states,
                        const GaussLegendre& rule,
                        const std::vector<double>& grid,
                        const std::vector<std::vector<double>>& modes,
                        bool parallel) {
  const int lo = spec.bc == BoundaryCondition::dirichlet ? 1 : 0;
  const int d = spec.domain.dimension;
  const int q = rule.order();
  const auto nstates = static_cast<std::ptrdiff_t>(states.size());
  Eigen::MatrixXd mass(nstates, nstates);

#pragma omp parallel for schedule(dynamic, 4) if (parallel)
  for (std::ptrdiff_t r = 0; r < nstates; ++r) {
    std::vector<int> idx(d);
    for (std::ptrdiff_t c = r; c < nstates; ++c) {
      std::fill(idx.begin(), idx.end(), 0);
      double sum = 0.0;
      for (std::size_t flat = 0; flat < grid.size(); ++flat) {
        double w = 1.0;
        for (int axis = 0; axis < d; ++axis) {
          const int a = idx[axis];
          w *= rule.weights[a] * modes[states[r].indices[axis] - lo][a] *
               modes[states[c].indices[axis] - lo][a];
        }
        sum += w * grid[flat];
        int axis = d - 1;
        while (axis >= 0 && ++idx[axis] == q) idx[axis--] = 0;
      }
      mass(r, c) = sum;
      mass(c, r) = sum;
    }
  }
  return mass;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf, 16);
}

}  // namespace

double SpectrumResult::eigenvalue(std::size_t n) const {
  if (n < 1 || n > eigenvalues.size())
    throw SolverError("eigenvalue index " + std::to_string(n) +
                      " out of range (1.." + std::to_string(eigenvalues.size()) + ")");
  return eigenvalues[n - 1];
}

Eigen::MatrixXd field_matrix(const BasisSpec& spec, const EffectiveDensity& s,
                             int quad_order, bool parallel) {
  const int d = spec.domain.dimension;
  const int q = quad_order > 0 ? quad_order : default_quadrature_order(spec.cutoff);
  const double L = spec.domain.half_side;
  const GaussLegendre rule = gauss_legendre(q).scaled(-L, L);
  const auto modes = mode_table(spec, rule);
  const auto grid = density_grid(s, rule, d);
  const auto states = enumerate_states(spec);

  Eigen::MatrixXd mass;
  if (d == 1)
    mass = mass_1d(spec, states, rule, grid, modes, parallel);
  else if (d == 2)
    mass = mass_2d(spec, states, rule, grid, modes, parallel);
  else
    mass = mass_nd(spec, states, rule, grid, modes, parallel);
  return mass;
}

GalerkinProblem assemble(const BasisSpec& spec, const EffectiveDensity& s,
                         const AssemblyOptions& opts) {
  if (spec.domain.dimension != s.domain().dimension ||
      spec.domain.half_side != s.domain().half_side)
    throw ConfigError("basis and density disagree on the domain");
  if (spec.size() > opts.basis_cap)
    throw SolverError("basis size " + std::to_string(spec.size()) +
                      " exceeds the cap of " + std::to_string(opts.basis_cap));

  GalerkinProblem p;
  p.spec = spec;
  p.states = enumerate_states(spec);
  p.quadrature_order =
      opts.quad_order > 0 ? opts.quad_order : default_quadrature_order(spec.cutoff);
  p.mass = field_matrix(spec, s, p.quadrature_order, opts.parallel);
  // Enforce exact symmetry; the kernels already write mirrored entries.
  p.mass = ((p.mass + p.mass.transpose()) * 0.5).eval();

  p.stiffness.resize(static_cast<std::ptrdiff_t>(p.states.size()));
  for (std::size_t i = 0; i < p.states.size(); ++i)
    p.stiffness(static_cast<std::ptrdiff_t>(i)) = mode_energy(spec, p.states[i]);

  p.density_hash = fnv1a_hex(s.str() + ";bc=" + bc_name(spec.bc) +
                             ";cutoff=" + std::to_string(spec.cutoff) +
                             ";quad=" + std::to_string(p.quadrature_order));
  return p;
}

Eigen::MatrixXd assemble_mass_reference(const BasisSpec& spec,
                                        const EffectiveDensity& s,
                                        int quad_order) {
  const auto states = enumerate_states(spec);
  const auto n = static_cast<std::ptrdiff_t>(states.size());
  Eigen::MatrixXd mass(n, n);
  for (std::ptrdiff_t r = 0; r < n; ++r)
    for (std::ptrdiff_t c = r; c < n; ++c) {
      const double v = matrix_element(spec, states[r], states[c], s, quad_order);
      mass(r, c) = v;
      mass(c, r) = v;
    }
  return mass;
}

SpectrumResult solve_spectrum(const GalerkinProblem& p, std::size_t count) {
  const auto n = p.mass.rows();
  if (count == 0) count = static_cast<std::size_t>(n);
  if (count > static_cast<std::size_t>(n))
    throw SolverError("requested more eigenvalues than basis states");

  // B = R R^T, then solve the standard symmetric problem for
  // R^{-1} diag(eps) R^{-T}; the stiffness may carry a zero row (Neumann
  // constant mode), the mass is the PD factor.
  Eigen::LLT<Eigen::MatrixXd> llt(p.mass);
  if (llt.info() != Eigen::Success)
    throw SolverError("mass matrix is not positive definite "
                      "(under-resolved quadrature or invalid density)");
  Eigen::MatrixXd transformed =
      llt.matrixL().solve(Eigen::MatrixXd(p.stiffness.asDiagonal()));
  transformed = llt.matrixL().solve(transformed.transpose().eval());
  transformed = ((transformed + transformed.transpose()) * 0.5).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(transformed,
                                                    Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw SolverError("symmetric eigensolver failed to converge");

  SpectrumResult r;
  r.bc = p.spec.bc;
  r.basis_cutoff = p.spec.cutoff;
  r.quadrature_order = p.quadrature_order;
  r.density_hash = p.density_hash;
  r.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + count);
  r.reliable_count = static_cast<std::size_t>(n) / 4;
  return r;
}

std::size_t staircase(const SpectrumResult& r, double energy) {
  if (r.reliable_count == 0 || r.eigenvalues.empty())
    throw SolverError("spectrum has no reliable eigenvalues");
  const double last_reliable = r.eigenvalues[r.reliable_count - 1];
  // Ties at step edges are resolved upward through the same relative
  // threshold the degeneracy rule uses; eigensolver roundoff must not
  // drop levels sitting exactly at E.
  const double tol = 1e-9 * std::max(1.0, std::abs(energy));
  if (energy > last_reliable + tol)
    throw SolverError("staircase energy " + std::to_string(energy) +
                      " beyond the reliable range (<= " +
                      std::to_string(last_reliable) + ")");
  std::size_t count = 0;
  for (double e : r.eigenvalues) {
    if (e <= energy + tol)
      ++count;
    else
      break;
  }
  return count;
}

namespace {

void check_reliable(const SpectrumResult& r, std::size_t n, const char* who) {
  if (n < 1 || n > r.reliable_count)
    throw SolverError(std::string(who) + ": index " + std::to_string(n) +
                      " beyond the reliable range (1.." +
                      std::to_string(r.reliable_count) + ")");
}

}  // namespace

double xi_diagnostic(const SpectrumResult& dirichlet,
                     const SpectrumResult& neumann, double abar,
                     std::size_t n) {
  check_reliable(dirichlet, n, "xi_diagnostic");
  check_reliable(neumann, n, "xi_diagnostic");
  const double mean = dirichlet.eigenvalue(n) + neumann.eigenvalue(n);
  const double dev = std::abs(1.0 - abar * mean / (8.0 * M_PI * n));
  if (dev <= 0.0) return -16.0;
  return std::max(std::log10(dev), -16.0);
}

double delta_diagnostic(const SpectrumResult& dirichlet,
                        const SpectrumResult& neumann, std::size_t n) {
  check_reliable(dirichlet, n, "delta_diagnostic");
  check_reliable(neumann, n, "delta_diagnostic");
  return 0.5 * (dirichlet.eigenvalue(n) - neumann.eigenvalue(n));
}

PpwReport ppw_audit(const SpectrumResult& dirichlet) {
  if (dirichlet.bc != BoundaryCondition::dirichlet)
    throw SolverError("ppw_audit requires a Dirichlet spectrum");
  if (dirichlet.eigenvalues.size() < 2)
    throw SolverError("ppw_audit requires at least two eigenvalues");
  constexpr double j01 = 2.404825557695773;  // first zero of J0
  constexpr double j11 = 3.831705970207512;  // first zero of J1
  PpwReport rep;
  rep.ratio = dirichlet.eigenvalue(2) / dirichlet.eigenvalue(1);
  rep.bound = (j11 / j01) * (j11 / j01);
  rep.violates = rep.ratio > rep.bound + 1e-6;
  return rep;
}

}  // namespace drumlab
