#include <CLI11.hpp>
#include <omp.h>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "drumlab/config.hpp"
#include "drumlab/perturbation.hpp"
#include "drumlab/solver.hpp"
#include "drumlab/weyl.hpp"

namespace fs = std::filesystem;
using namespace drumlab;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
};

ProblemConfig load_config(const CommonArgs& args) {
  if (args.config_path.empty()) return ProblemConfig{};
  return ProblemConfig::from_file(args.config_path);
}

// Relative output paths resolve against the config file location.
fs::path resolve_out(const CommonArgs& args) {
  fs::path out(args.out_dir);
  if (out.is_relative() && !args.config_path.empty())
    out = fs::path(args.config_path).parent_path() / out;
  fs::create_directories(out);
  return out;
}

std::ofstream open_csv(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file '" + path.string() + "'");
  return f;
}

SpectrumResult run_solver(const ProblemConfig& cfg, BoundaryCondition bc) {
  AssemblyOptions opts;
  opts.quad_order = cfg.quad_order();
  const GalerkinProblem problem =
      assemble(cfg.basis(bc), cfg.effective_density(), opts);
  return solve_spectrum(problem);
}

int geometry_order(const ProblemConfig& cfg) {
  return std::max(64, cfg.quadrature);
}

int cmd_spectrum(const CommonArgs& args) {
  const ProblemConfig cfg = load_config(args);
  const fs::path out = resolve_out(args);

  auto write = [&](BoundaryCondition bc, const char* filename) {
    const SpectrumResult r = run_solver(cfg, bc);
    std::ofstream f = open_csv(out / filename);
    f << "N,E\n";
    for (std::size_t n = 1; n <= r.reliable_count; ++n)
      f << n << "," << format_double(r.eigenvalue(n)) << "\n";
  };
  if (cfg.bc != BcSelect::neumann)
    write(BoundaryCondition::dirichlet, "spectrum_dirichlet.csv");
  if (cfg.bc != BcSelect::dirichlet)
    write(BoundaryCondition::neumann, "spectrum_neumann.csv");
  return 0;
}

int cmd_weyl(const CommonArgs& args) {
  const ProblemConfig cfg = load_config(args);
  if (cfg.dimension != 2)
    throw ConfigError("the weyl command requires dimension = 2");
  const fs::path out = resolve_out(args);

  const EffectiveDensity density = cfg.effective_density();
  const double abar = area_integral(density, geometry_order(cfg));
  const double lbar = boundary_integral(density, geometry_order(cfg));
  const CubeDomain domain = cfg.domain();

  std::ofstream f = open_csv(out / "weyl.csv");
  f << "N,E_leading,E_weylsigma_D,E_weylsigma_N,E_conjecture_D,E_conjecture_N\n";
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    const auto gd =
        weyl_energy_general(domain, abar, BoundaryCondition::dirichlet, n);
    const auto gn =
        weyl_energy_general(domain, abar, BoundaryCondition::neumann, n);
    const auto cd = weyl_conjecture_2d(lbar, abar, BoundaryCondition::dirichlet, n);
    const auto cn = weyl_conjecture_2d(lbar, abar, BoundaryCondition::neumann, n);
    f << n << "," << format_double(gd.leading) << ","
      << format_double(gd.corrected) << "," << format_double(gn.corrected)
      << "," << format_double(cd.corrected) << ","
      << format_double(cn.corrected) << "\n";
  }
  return 0;
}

int cmd_audit(const CommonArgs& args) {
  const ProblemConfig cfg = load_config(args);
  if (cfg.dimension != 2)
    throw ConfigError("the audit command requires dimension = 2");
  const fs::path out = resolve_out(args);

  const EffectiveDensity density = cfg.effective_density();
  const double abar = area_integral(density, geometry_order(cfg));
  const double lbar = boundary_integral(density, geometry_order(cfg));

  const SpectrumResult rd = run_solver(cfg, BoundaryCondition::dirichlet);
  const SpectrumResult rn = run_solver(cfg, BoundaryCondition::neumann);
  const std::size_t n_hi = std::min<std::size_t>(
      cfg.n_max, std::min(rd.reliable_count, rn.reliable_count));

  std::ofstream f = open_csv(out / "audit.csv");
  f << "N,E_D,E_N,xi,delta,delta_pred_conjecture,delta_pred_weylsigma\n";
  for (std::size_t n = cfg.n_min; n <= n_hi; ++n) {
    const double pred_conj = (lbar / abar) * std::sqrt(4.0 * M_PI * n / abar);
    const double pred_ws = 8.0 * std::sqrt(M_PI * n) / abar;
    f << n << "," << format_double(rd.eigenvalue(n)) << ","
      << format_double(rn.eigenvalue(n)) << ","
      << format_double(xi_diagnostic(rd, rn, abar, n)) << ","
      << format_double(delta_diagnostic(rd, rn, n)) << ","
      << format_double(pred_conj) << "," << format_double(pred_ws) << "\n";
  }

  const PpwReport ppw = ppw_audit(rd);
  std::cout.setf(std::ios::fixed);
  std::cout.precision(4);
  std::cout << "PPW ratio E2/E1 = " << ppw.ratio << ", disk bound = " << ppw.bound
            << ": "
            << (ppw.violates
                    ? "VIOLATES the bound: not a conformal density"
                    : "within bound")
            << "\n";
  const IsoperimetricReport iso = isoperimetric_check(lbar, abar);
  std::cout << "isoperimetric Lbar/Abar = " << iso.ratio
            << ", disk ratio = " << iso.circle_ratio << ": "
            << (iso.conformal_admissible
                    ? "admissible as a conformal density"
                    : "NOT attainable by any conformal map")
            << "\n";
  std::cout << "Abar = " << abar << ", Lbar = " << lbar << "\n";
  return 0;
}

int cmd_perturb(const CommonArgs& args, const std::string& state_text) {
  const ProblemConfig cfg = load_config(args);
  const BoundaryCondition bc = cfg.bc == BcSelect::neumann
                                   ? BoundaryCondition::neumann
                                   : BoundaryCondition::dirichlet;

  MultiIndex state;
  if (state_text.empty()) {
    state.indices.assign(cfg.dimension, 1);
  } else {
    std::size_t pos = 0;
    while (pos <= state_text.size()) {
      const std::size_t comma = state_text.find(',', pos);
      const std::string part = state_text.substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos);
      int value = 0;
      auto res = std::from_chars(part.data(), part.data() + part.size(), value);
      if (res.ec != std::errc{} || res.ptr != part.data() + part.size())
        throw ConfigError("bad --state component '" + part + "'");
      state.indices.push_back(value);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }

  const BasisSpec spec = cfg.basis(bc);
  spec.validate(state);
  const EffectiveDensity density = cfg.effective_density();

  const PerturbationResult pert = perturb_energy(spec, density, state);

  // Reference eigenvalue: the solver value at the state's rank in the
  // unperturbed ordering.
  const SpectrumResult ref = run_solver(cfg, bc);
  const std::vector<MultiIndex> states = enumerate_states(spec);
  std::size_t rank = 0;
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i] == state) {
      rank = i + 1;
      break;
    }
  const double solver_value = ref.eigenvalue(rank);

  std::cout << "state (" << state.str() << "), " << bc_name(bc)
            << ", cutoff " << cfg.cutoff << "\n";
  static const char* labels[] = {"E(0)", "E(1)", "E(2)", "E(3)"};
  for (std::size_t k = 0; k < pert.orders.size(); ++k)
    std::cout << labels[k] << " = " << format_double(pert.orders[k])
              << "   partial sum = " << format_double(pert.partial_sums[k])
              << "\n";
  if (pert.degenerate) {
    std::cout << "warning: degenerate level; orders >= 2 unavailable "
                 "(first-order theory only)\n";
    std::cout << "first-order splits:";
    for (double s : pert.degenerate_first_order)
      std::cout << " " << format_double(s);
    std::cout << "\n";
  }
  if (pert.sum_convergence_warning)
    std::cout << "warning: internal sum not converged; raise k_cutoff\n";
  std::cout << "resummed  = " << format_double(pert.resummed) << "\n";
  std::cout << "solver    = " << format_double(solver_value) << " (E_" << rank
            << ")\n";
  std::cout << "residual partial_sum - solver = "
            << format_double(pert.partial_sums.back() - solver_value) << "\n";
  std::cout << "residual resummed - solver    = "
            << format_double(pert.resummed - solver_value) << "\n";
  return 0;
}

void apply_thread_cap() {
  const char* env = std::getenv("DRUMLAB_THREADS");
  if (!env) return;
  int threads = 0;
  auto res = std::from_chars(env, env + std::string_view(env).size(), threads);
  if (res.ec == std::errc{} && threads > 0) omp_set_num_threads(threads);
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap();

  CLI::App app{"drumlab: spectra of inhomogeneous membranes and Weyl-law "
               "diagnostics"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string state_text;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "problem description file");
    sub->add_option("--out", args.out_dir,
                    "output directory (relative paths resolve against the "
                    "config file)");
  };
  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "compute eigenvalue spectra, write spectrum_*.csv");
  add_common(spectrum);
  CLI::App* weyl = app.add_subcommand(
      "weyl", "tabulate Weyl-law estimates, write weyl.csv");
  add_common(weyl);
  CLI::App* audit = app.add_subcommand(
      "audit", "spectral diagnostics (xi, delta, PPW), write audit.csv");
  add_common(audit);
  CLI::App* perturb = app.add_subcommand(
      "perturb", "perturbative expansion report for one state");
  add_common(perturb);
  perturb->add_option("--state", state_text,
                      "quantum numbers, e.g. --state 1,2 (default all ones)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (spectrum->parsed()) return cmd_spectrum(args);
    if (weyl->parsed()) return cmd_weyl(args);
    if (audit->parsed()) return cmd_audit(args);
    return cmd_perturb(args, state_text);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
