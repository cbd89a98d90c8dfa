#include "drumlab/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace drumlab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view v, int line, const char* key) {
  int out = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                      "' needs an integer, got '" + std::string(v) + "'");
  return out;
}

double parse_real(std::string_view v, int line, const char* key) {
  double out = 0.0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                      "' needs a number, got '" + std::string(v) + "'");
  return out;
}

}  // namespace

ProblemConfig ProblemConfig::parse(std::string_view text) {
  ProblemConfig cfg;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));

    if (key == "dimension") {
      cfg.dimension = parse_int(value, line_no, key.c_str());
      if (cfg.dimension < 1)
        throw ConfigError("line " + std::to_string(line_no) + ": dimension must be >= 1");
    } else if (key == "half_side") {
      cfg.half_side = parse_real(value, line_no, key.c_str());
      if (cfg.half_side <= 0.0)
        throw ConfigError("line " + std::to_string(line_no) + ": half_side must be > 0");
    } else if (key == "map") {
      cfg.map_text = std::string(value);
    } else if (key == "density") {
      cfg.density_text = std::string(value);
    } else if (key == "bc") {
      if (value == "dirichlet") cfg.bc = BcSelect::dirichlet;
      else if (value == "neumann") cfg.bc = BcSelect::neumann;
      else if (value == "both") cfg.bc = BcSelect::both;
      else
        throw ConfigError("line " + std::to_string(line_no) +
                          ": bc must be dirichlet, neumann or both");
    } else if (key == "cutoff") {
      cfg.cutoff = parse_int(value, line_no, key.c_str());
      if (cfg.cutoff < 1)
        throw ConfigError("line " + std::to_string(line_no) + ": cutoff must be >= 1");
    } else if (key == "quadrature") {
      if (value == "auto") cfg.quadrature = 0;
      else {
        cfg.quadrature = parse_int(value, line_no, key.c_str());
        if (cfg.quadrature < 2)
          throw ConfigError("line " + std::to_string(line_no) +
                            ": quadrature must be >= 2 or auto");
      }
    } else if (key == "n_min") {
      cfg.n_min = parse_int(value, line_no, key.c_str());
      if (cfg.n_min < 1)
        throw ConfigError("line " + std::to_string(line_no) + ": n_min must be >= 1");
    } else if (key == "n_max") {
      cfg.n_max = parse_int(value, line_no, key.c_str());
      if (cfg.n_max < 1)
        throw ConfigError("line " + std::to_string(line_no) + ": n_max must be >= 1");
    } else {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" +
                        key + "'");
    }
  }
  if (cfg.n_max < cfg.n_min)
    throw ConfigError("n_max must be >= n_min");
  return cfg;
}

ProblemConfig ProblemConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace drumlab
