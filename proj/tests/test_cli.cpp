#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "drumlab/config.hpp"

namespace fs = std::filesystem;
using namespace drumlab;

namespace {

std::string drumlab_bin() {
  const char* bin = std::getenv("DRUMLAB_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "DRUMLAB_BIN must point at the drumlab binary");
  return bin;
}

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

RunResult run(const std::string& args, const fs::path& dir) {
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = drumlab_bin() + " " + args + " > " + out.string() +
                          " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  auto slurp = [](const fs::path& p) {
    std::ifstream f(p);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  return {WEXITSTATUS(status), slurp(out), slurp(err)};
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("drumlab_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing") {
  const ProblemConfig defaults = ProblemConfig::parse("");
  CHECK(defaults.dimension == 2);
  CHECK(defaults.half_side == 1.0);
  CHECK(defaults.map_text == "identity");
  CHECK(defaults.density_text == "1");
  CHECK(defaults.bc == BcSelect::both);
  CHECK(defaults.cutoff == 40);
  CHECK(defaults.quad_order() == 96);  // max(64, 2*40+16)
  CHECK(defaults.n_min == 1);
  CHECK(defaults.n_max == 200);

  const ProblemConfig cfg = ProblemConfig::parse(
      "# comment\n"
      "dimension = 2\n"
      "half_side = 1.5   # trailing comment\n"
      "map = square_to_disk | poly(1,0; 0.5,0)\n"
      "density = 1/(1+4*(u^2+v^2))\n"
      "bc = dirichlet\n"
      "cutoff = 12\n"
      "quadrature = 48\n"
      "n_min = 2\n"
      "n_max = 30\n");
  CHECK(cfg.half_side == 1.5);
  CHECK(cfg.bc == BcSelect::dirichlet);
  CHECK(cfg.quad_order() == 48);
  CHECK(cfg.map().stages().size() == 2);

  CHECK_THROWS_AS((void)ProblemConfig::parse("unknown_key = 3\n"), ConfigError);
  CHECK_THROWS_AS((void)ProblemConfig::parse("cutoff = many\n"), ConfigError);
  CHECK_THROWS_AS((void)ProblemConfig::parse("just a line\n"), ConfigError);
  CHECK_THROWS_AS((void)ProblemConfig::parse("bc = robin\n"), ConfigError);
  CHECK_THROWS_AS((void)ProblemConfig::parse("n_min = 5\nn_max = 2\n"), ConfigError);
}

TEST_CASE("format_double shortest round-trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(4.0) == "4");
  CHECK(format_double(M_PI) == "3.141592653589793");
}

TEST_CASE("spectrum command writes the homogeneous ground level") {
  const fs::path dir = fresh_dir("spectrum");
  write_file(dir / "prob.conf", "cutoff = 12\n");
  const RunResult r =
      run("spectrum --config " + (dir / "prob.conf").string(), dir);
  REQUIRE(r.exit_code == 0);

  // Output lands next to the config (relative --out default ".").
  const std::string csv = slurp(dir / "spectrum_dirichlet.csv");
  CHECK(csv.substr(0, 4) == "N,E\n");
  // First row: E_1 = pi^2/2 for the homogeneous unit-half-side square.
  CHECK(csv.find("1,4.934802200544") == 4);

  const std::string neumann = slurp(dir / "spectrum_neumann.csv");
  CHECK(neumann.find("1,") == 4);  // zero mode first

  // A quarter of the basis is reported.
  int rows = -1;  // header
  for (char c : csv)
    if (c == '\n') ++rows;
  CHECK(rows == 144 / 4);
}

TEST_CASE("spectrum handles 1-D problems") {
  const fs::path dir = fresh_dir("d1");
  write_file(dir / "prob.conf",
             "dimension = 1\ncutoff = 16\ndensity = 1+0.1*x^2\nbc = dirichlet\n");
  const RunResult r =
      run("spectrum --config " + (dir / "prob.conf").string(), dir);
  REQUIRE(r.exit_code == 0);
  const std::string csv = slurp(dir / "spectrum_dirichlet.csv");
  // E_1 just below the homogeneous pi^2/4 (density > 1 lowers eigenvalues).
  CHECK(csv.find("1,2.4") == 4);
}

TEST_CASE("spectrum respects bc selection and --out") {
  const fs::path dir = fresh_dir("bcsel");
  write_file(dir / "prob.conf", "cutoff = 8\nbc = dirichlet\n");
  const RunResult r = run(
      "spectrum --config " + (dir / "prob.conf").string() + " --out sub", dir);
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(dir / "sub" / "spectrum_dirichlet.csv"));
  CHECK_FALSE(fs::exists(dir / "sub" / "spectrum_neumann.csv"));
}

TEST_CASE("byte-identical reruns") {
  const fs::path dir = fresh_dir("determinism");
  write_file(dir / "prob.conf",
             "cutoff = 10\n"
             "map = square_to_disk | poly(0.8164965809277261,0; "
             "0.40824829046386307,0)\n"
             "density = 1/(1+4*(u^2+v^2))\n"
             "n_max = 20\n");
  REQUIRE(run("spectrum --config " + (dir / "prob.conf").string() + " --out a",
              dir).exit_code == 0);
  REQUIRE(run("spectrum --config " + (dir / "prob.conf").string() + " --out b",
              dir).exit_code == 0);
  CHECK(slurp(dir / "a" / "spectrum_dirichlet.csv") ==
        slurp(dir / "b" / "spectrum_dirichlet.csv"));
  CHECK(slurp(dir / "a" / "spectrum_neumann.csv") ==
        slurp(dir / "b" / "spectrum_neumann.csv"));
}

TEST_CASE("weyl command") {
  const fs::path dir = fresh_dir("weyl");
  write_file(dir / "prob.conf", "half_side = 1\nn_max = 100\ncutoff = 4\n");
  const RunResult r = run("weyl --config " + (dir / "prob.conf").string(), dir);
  REQUIRE(r.exit_code == 0);
  const std::string csv = slurp(dir / "weyl.csv");
  CHECK(csv.rfind("N,E_leading,E_weylsigma_D,E_weylsigma_N,E_conjecture_D,"
                  "E_conjecture_N\n", 0) == 0);
  // Sigma = 1, 2L = 2: at N = 100 the leading term is 100 pi; the square
  // has Lbar/sqrt(Abar) = 4, so conjecture and weylsigma columns agree.
  CHECK(csv.find("\n100,314.15926535") != std::string::npos);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    std::istringstream fields(line);
    std::string f;
    std::vector<std::string> cols;
    while (std::getline(fields, f, ',')) cols.push_back(f);
    REQUIRE(cols.size() == 6);
    CHECK(cols[1] != cols[2]);  // corrected differs from leading
    CHECK(std::abs(std::stod(cols[2]) - std::stod(cols[4])) <
          1e-9 * std::stod(cols[2]));
    CHECK(std::abs(std::stod(cols[3]) - std::stod(cols[5])) <
          1e-9 * std::abs(std::stod(cols[3])) + 1e-12);
  }
}

TEST_CASE("audit command reports PPW and admissibility") {
  const fs::path dir = fresh_dir("audit");
  write_file(dir / "prob.conf",
             "cutoff = 12\n"
             "map = square_to_disk | poly(0.8164965809277261,0; "
             "0.40824829046386307,0)\n"
             "density = 1/(1+4*(u^2+v^2))\n"
             "n_max = 30\n");
  const RunResult r = run("audit --config " + (dir / "prob.conf").string(), dir);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("VIOLATES") != std::string::npos);
  CHECK(r.out.find("NOT attainable") != std::string::npos);
  const std::string csv = slurp(dir / "audit.csv");
  CHECK(csv.rfind("N,E_D,E_N,xi,delta,delta_pred_conjecture,"
                  "delta_pred_weylsigma\n", 0) == 0);
  int rows = -1;
  for (char c : csv)
    if (c == '\n') ++rows;
  CHECK(rows == 30);

  // The homogeneous square stays within the PPW bound.
  const fs::path dir2 = fresh_dir("audit2");
  write_file(dir2 / "prob.conf", "cutoff = 8\nn_max = 10\n");
  const RunResult r2 = run("audit --config " + (dir2 / "prob.conf").string(), dir2);
  REQUIRE(r2.exit_code == 0);
  CHECK(r2.out.find("within bound") != std::string::npos);
  CHECK(r2.out.find("admissible") != std::string::npos);
}

TEST_CASE("perturb command") {
  const fs::path dir = fresh_dir("perturb");
  write_file(dir / "prob.conf",
             "cutoff = 10\ndensity = 1+0.1*cos(pi*x/2)*cos(pi*y/2)\n");
  const RunResult r = run(
      "perturb --config " + (dir / "prob.conf").string() + " --state 1,1", dir);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("E(0)") != std::string::npos);
  CHECK(r.out.find("E(3)") != std::string::npos);
  CHECK(r.out.find("resummed") != std::string::npos);
  CHECK(r.out.find("solver") != std::string::npos);

  // Degenerate state: partial report, still exit 0.
  const fs::path dir2 = fresh_dir("perturb_deg");
  write_file(dir2 / "prob.conf", "cutoff = 10\ndensity = 1+0.1*x*y\n");
  const RunResult rd = run(
      "perturb --config " + (dir2 / "prob.conf").string() + " --state 1,2", dir2);
  REQUIRE(rd.exit_code == 0);
  CHECK(rd.out.find("degenerate") != std::string::npos);
  CHECK(rd.out.find("first-order splits:") != std::string::npos);

  // Unknown state: exit 2.
  const RunResult bad = run(
      "perturb --config " + (dir2 / "prob.conf").string() + " --state 0,1", dir2);
  CHECK(bad.exit_code == 2);
  const RunResult bad2 = run(
      "perturb --config " + (dir2 / "prob.conf").string() + " --state 1,2,3", dir2);
  CHECK(bad2.exit_code == 2);
}

TEST_CASE("error exit codes") {
  const fs::path dir = fresh_dir("errors");

  // Unparsable density: exit 2, stderr carries the byte offset.
  write_file(dir / "bad_density.conf", "density = 1/(\n");
  const RunResult r1 =
      run("spectrum --config " + (dir / "bad_density.conf").string(), dir);
  CHECK(r1.exit_code == 2);
  CHECK(r1.err.find("byte") != std::string::npos);

  // Unknown config key: exit 2.
  write_file(dir / "bad_key.conf", "frequency = 3\n");
  CHECK(run("spectrum --config " + (dir / "bad_key.conf").string(), dir)
            .exit_code == 2);

  // Missing config file: exit 2.
  CHECK(run("spectrum --config " + (dir / "nope.conf").string(), dir).exit_code == 2);

  // Numeric failure: nonpositive density is exit 3.
  write_file(dir / "neg.conf", "density = x-10\ncutoff = 4\n");
  const RunResult r3 = run("spectrum --config " + (dir / "neg.conf").string(), dir);
  CHECK(r3.exit_code == 3);

  // weyl/audit insist on d = 2.
  write_file(dir / "d3.conf", "dimension = 3\ncutoff = 2\n");
  CHECK(run("weyl --config " + (dir / "d3.conf").string(), dir).exit_code == 2);

  // No subcommand: usage error.
  CHECK(run("", dir).exit_code == 2);
}
