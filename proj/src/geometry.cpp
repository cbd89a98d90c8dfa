#include "drumlab/geometry.hpp"

#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/jacobi_elliptic.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <utility>

#include "drumlab/quadrature.hpp"

namespace drumlab {

namespace {

constexpr double kModulus2 = 0.5;  // m = k^2 for k = 1/sqrt(2)

// Keep boost in plain double: the default long-double promotion ties the
// Landen recursion's termination to x87 80-bit arithmetic, which is not
// portable (and never converges under valgrind's FP emulation).
using DoublePolicy =
    boost::math::policies::policy<boost::math::policies::promote_double<false>>;

double elliptic_K() {
  static const double K =
      boost::math::ellint_1(1.0 / std::sqrt(2.0), DoublePolicy());
  return K;
}

struct JacobiTriple {
  std::complex<double> sn, cn, dn;
};

// Jacobi sn/cn/dn for complex argument with m = 1/2, assembled from the
// real-argument functions on the real and imaginary parts. dn is rebuilt
// from sqrt(1 - m sn^2): boost's dn loses accuracy in a small window
// around u = K, while the identity is exact for real arguments.
JacobiTriple jacobi_complex(std::complex<double> u) {
  const double k = 1.0 / std::sqrt(2.0);  // self-dual: k' = k
  double c, d_unused, c1, d1_unused;
  const double s =
      boost::math::jacobi_elliptic(k, u.real(), &c, &d_unused, DoublePolicy());
  const double s1 =
      boost::math::jacobi_elliptic(k, u.imag(), &c1, &d1_unused, DoublePolicy());
  const double d = std::sqrt(1.0 - kModulus2 * s * s);
  const double d1 = std::sqrt(1.0 - kModulus2 * s1 * s1);

  const double den = c1 * c1 + kModulus2 * (s * s1) * (s * s1);
  if (den == 0.0)
    throw EvalError("square_to_disk: elliptic function pole reached "
                    "(point outside the source square)");
  JacobiTriple out;
  out.sn = std::complex<double>(s * d1, c * d * s1 * c1) / den;
  out.cn = std::complex<double>(c * c1, -s * d * s1 * d1) / den;
  out.dn = std::complex<double>(d * c1 * d1, -kModulus2 * s * c * s1) / den;
  return out;
}

const std::complex<double> kRot45 = std::polar(1.0, M_PI / 4.0);

// Argument of the elliptic functions for the square-to-disk map of
// [-L,L]^2: u(z) = K - (K/(sqrt(2) L)) e^{i pi/4} z. Then
//   f(z)  = e^{-i pi/4} cn(u(z))      (center -> 0, edge midpoints -> ±1, ±i)
//   f'(z) = (K/(sqrt(2) L)) sn(u(z)) dn(u(z)).
std::complex<double> disk_argument(std::complex<double> z, double L) {
  const double K = elliptic_K();
  return K - (K / (std::sqrt(2.0) * L)) * kRot45 * z;
}

std::complex<double> square_to_disk_map(std::complex<double> z, double L) {
  const JacobiTriple j = jacobi_complex(disk_argument(z, L));
  return std::conj(kRot45) * j.cn;
}

std::complex<double> square_to_disk_derivative(std::complex<double> z, double L) {
  const double tol = 1e-12 * std::max(1.0, L);
  if (std::abs(std::abs(z.real()) - L) < tol &&
      std::abs(std::abs(z.imag()) - L) < tol)
    throw CornerSingularityError(
        "square_to_disk derivative vanishes at the source-square corners");
  const JacobiTriple j = jacobi_complex(disk_argument(z, L));
  return (elliptic_K() / (std::sqrt(2.0) * L)) * j.sn * j.dn;
}

std::string format_num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

double CubeDomain::volume() const {
  return std::pow(2.0 * half_side, dimension);
}

double CubeDomain::surface() const {
  return 2.0 * dimension * std::pow(2.0 * half_side, dimension - 1);
}

ConformalMap::ConformalMap(std::vector<Stage> stages) : stages_(std::move(stages)) {
  for (const Stage& st : stages_) {
    if (const auto* a = std::get_if<Affine>(&st)) {
      if (a->a == std::complex<double>(0.0, 0.0))
        throw ConfigError("affine map requires a != 0");
    } else if (const auto* p = std::get_if<PolySeries>(&st)) {
      if (p->coeffs.empty())
        throw ConfigError("poly map requires at least one coefficient");
    }
  }
}

std::complex<double> ConformalMap::map(std::complex<double> z) const {
  std::complex<double> w = z;
  for (const Stage& st : stages_) {
    if (std::holds_alternative<Identity>(st)) {
      continue;
    } else if (const auto* a = std::get_if<Affine>(&st)) {
      w = a->a * w + a->b;
    } else if (const auto* p = std::get_if<PolySeries>(&st)) {
      // Horner on sum_k c_k w^k = w * (c_1 + w * (c_2 + ...)).
      std::complex<double> acc(0.0, 0.0);
      for (auto it = p->coeffs.rbegin(); it != p->coeffs.rend(); ++it)
        acc = acc * w + *it;
      w = acc * w;
    } else {
      w = square_to_disk_map(w, std::get<SquareToDisk>(st).half_side);
    }
  }
  return w;
}

std::complex<double> ConformalMap::derivative(std::complex<double> z) const {
  std::complex<double> w = z;
  std::complex<double> deriv(1.0, 0.0);
  for (const Stage& st : stages_) {
    if (std::holds_alternative<Identity>(st)) {
      continue;
    } else if (const auto* a = std::get_if<Affine>(&st)) {
      deriv *= a->a;
      w = a->a * w + a->b;
    } else if (const auto* p = std::get_if<PolySeries>(&st)) {
      std::complex<double> dacc(0.0, 0.0);
      for (std::size_t k = p->coeffs.size(); k >= 1; --k)
        dacc = dacc * w + static_cast<double>(k) * p->coeffs[k - 1];
      deriv *= dacc;
      std::complex<double> acc(0.0, 0.0);
      for (auto it = p->coeffs.rbegin(); it != p->coeffs.rend(); ++it)
        acc = acc * w + *it;
      w = acc * w;
    } else {
      const double L = std::get<SquareToDisk>(st).half_side;
      deriv *= square_to_disk_derivative(w, L);
      w = square_to_disk_map(w, L);
    }
  }
  return deriv;
}

double ConformalMap::conformal_density(std::complex<double> z) const {
  return std::norm(derivative(z));
}

ConformalMap ConformalMap::parse(std::string_view text, double half_side) {
  std::vector<Stage> stages;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto parse_number = [&]() -> double {
    skip_ws();
    const std::size_t start = pos;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
    while (pos < text.size() &&
           (std::isdigit(static_cast<unsigned char>(text[pos])) ||
            text[pos] == '.' || text[pos] == 'e' || text[pos] == 'E' ||
            ((text[pos] == '+' || text[pos] == '-') &&
             (text[pos - 1] == 'e' || text[pos - 1] == 'E'))))
      ++pos;
    double value = 0.0;
    auto res = std::from_chars(text.data() + start, text.data() + pos, value);
    if (res.ec != std::errc{} || res.ptr != text.data() + pos || pos == start)
      throw ParseError("malformed number in map description", start, "numeric literal");
    return value;
  };
  auto expect = [&](char c, const char* what) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c)
      throw ParseError("malformed map description", pos, what);
    ++pos;
  };

  while (true) {
    skip_ws();
    const std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    const std::string_view name = text.substr(start, pos - start);
    if (name == "identity") {
      stages.emplace_back(Identity{});
    } else if (name == "square_to_disk") {
      stages.emplace_back(SquareToDisk{half_side});
    } else if (name == "affine") {
      expect('(', "'('");
      Affine a;
      const double are = parse_number();
      expect(',', "','");
      const double aim = parse_number();
      expect(',', "','");
      const double bre = parse_number();
      expect(',', "','");
      const double bim = parse_number();
      expect(')', "')'");
      a.a = {are, aim};
      a.b = {bre, bim};
      stages.emplace_back(a);
    } else if (name == "poly") {
      expect('(', "'('");
      PolySeries p;
      while (true) {
        const double re = parse_number();
        expect(',', "','");
        const double im = parse_number();
        p.coeffs.emplace_back(re, im);
        skip_ws();
        if (pos < text.size() && text[pos] == ';') {
          ++pos;
          continue;
        }
        break;
      }
      expect(')', "')'");
      stages.emplace_back(std::move(p));
    } else {
      throw ParseError("unknown map primitive '" + std::string(name) + "'",
                       start, "identity, affine, poly or square_to_disk");
    }
    skip_ws();
    if (pos < text.size() && text[pos] == '|') {
      ++pos;
      continue;
    }
    if (pos < text.size())
      throw ParseError("trailing characters in map description", pos,
                       "'|' or end of input");
    break;
  }

  // A lone identity keeps the canonical empty-stage form.
  if (stages.size() == 1 && std::holds_alternative<Identity>(stages[0]))
    stages.clear();
  return ConformalMap(std::move(stages));
}

std::string ConformalMap::str() const {
  if (stages_.empty()) return "identity";
  std::string out;
  bool first = true;
  for (const Stage& st : stages_) {
    if (!first) out += " | ";
    first = false;
    if (std::holds_alternative<Identity>(st)) {
      out += "identity";
    } else if (const auto* a = std::get_if<Affine>(&st)) {
      out += "affine(" + format_num(a->a.real()) + "," + format_num(a->a.imag()) +
             "," + format_num(a->b.real()) + "," + format_num(a->b.imag()) + ")";
    } else if (const auto* p = std::get_if<PolySeries>(&st)) {
      out += "poly(";
      for (std::size_t k = 0; k < p->coeffs.size(); ++k) {
        if (k) out += "; ";
        out += format_num(p->coeffs[k].real()) + "," + format_num(p->coeffs[k].imag());
      }
      out += ")";
    } else {
      out += "square_to_disk";
    }
  }
  return out;
}

EffectiveDensity::EffectiveDensity(CubeDomain domain, ConformalMap map,
                                   DensityExpr rho)
    : domain_(domain), map_(std::move(map)), rho_(std::move(rho)) {
  if (domain_.dimension < 1)
    throw ConfigError("domain dimension must be >= 1");
  if (domain_.half_side <= 0.0)
    throw ConfigError("domain half_side must be > 0");
  if (!map_.is_identity() && domain_.dimension != 2)
    throw ConfigError("conformal maps require a 2-D domain");
}

EffectiveDensity EffectiveDensity::uniform(CubeDomain domain) {
  return EffectiveDensity(domain, ConformalMap(), DensityExpr());
}

double EffectiveDensity::raw_value(std::span<const double> coords) const {
  if (static_cast<int>(coords.size()) != domain_.dimension)
    throw std::invalid_argument("point dimension does not match the domain");
  if (map_.is_identity()) return rho_.eval(coords);
  const std::complex<double> z(coords[0], coords[1]);
  const double sigma = map_.conformal_density(z);
  const std::complex<double> w = map_.map(z);
  const double uv[2] = {w.real(), w.imag()};
  return sigma * rho_.eval(std::span<const double>(uv, 2));
}

double EffectiveDensity::operator()(std::span<const double> coords) const {
  const double value = raw_value(coords);
  if (!std::isfinite(value) || value <= 0.0)
    throw EvalError("effective density is not positive at an interior point");
  return value;
}

double EffectiveDensity::value(double x, double y) const {
  const double c[2] = {x, y};
  return (*this)(std::span<const double>(c, 2));
}

double EffectiveDensity::boundary_value(double x, double y) const {
  const double c[2] = {x, y};
  const double value = raw_value(std::span<const double>(c, 2));
  if (!std::isfinite(value) || value < 0.0)
    throw EvalError("effective density is negative on the boundary");
  return value;
}

std::string EffectiveDensity::str() const {
  return "d=" + std::to_string(domain_.dimension) +
         ";L=" + format_num(domain_.half_side) + ";map=" + map_.str() +
         ";rho=" + rho_.str();
}

double area_integral(const EffectiveDensity& s, int order) {
  if (order < 2) throw std::invalid_argument("quadrature order must be >= 2");
  const int d = s.domain().dimension;
  const double L = s.domain().half_side;
  const GaussLegendre rule = gauss_legendre(order).scaled(-L, L);

  double points = 1.0;
  for (int i = 0; i < d; ++i) points *= order;
  if (points > 2e8)
    throw std::invalid_argument("tensor quadrature grid too large");

  std::vector<int> idx(d, 0);
  std::vector<double> x(d);
  double sum = 0.0;
  while (true) {
    double w = 1.0;
    for (int i = 0; i < d; ++i) {
      x[i] = rule.nodes[idx[i]];
      w *= rule.weights[idx[i]];
    }
    sum += w * s(x);
    int axis = d - 1;
    while (axis >= 0 && ++idx[axis] == order) idx[axis--] = 0;
    if (axis < 0) break;
  }
  return sum;
}

double boundary_integral(const EffectiveDensity& s, int order) {
  if (s.domain().dimension != 2)
    throw ConfigError("boundary_integral requires a 2-D domain");
  if (order < 2) throw std::invalid_argument("quadrature order must be >= 2");
  const double L = s.domain().half_side;
  const GaussLegendre rule = gauss_legendre(order).scaled(-L, L);

  double sum = 0.0;
  for (int edge = 0; edge < 4; ++edge) {
    for (int i = 0; i < order; ++i) {
      const double t = rule.nodes[i];
      double x, y;
      switch (edge) {
        case 0: x = L;  y = t;  break;
        case 1: x = -L; y = t;  break;
        case 2: x = t;  y = L;  break;
        default: x = t; y = -L; break;
      }
      sum += rule.weights[i] * std::sqrt(s.boundary_value(x, y));
    }
  }
  return sum;
}

IsoperimetricReport isoperimetric_check(double lbar, double abar) {
  if (lbar <= 0.0 || abar <= 0.0)
    throw std::invalid_argument("isoperimetric_check requires positive inputs");
  IsoperimetricReport rep;
  rep.ratio = lbar / abar;
  // Circumference-to-area ratio of the disk with area Abar: 2 sqrt(pi/Abar).
  rep.circle_ratio = 2.0 * std::sqrt(M_PI / abar);
  rep.conformal_admissible = !(rep.ratio < rep.circle_ratio);
  return rep;
}

}  // namespace drumlab
