#pragma once

// Inner functions on the unit disk: finite Blaschke products and the
// single-atom singular inner function exp(-s (xi + z) / (xi - z)).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <numbers>
#include <regex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mslab/errors.hpp"

namespace mslab {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Maps an angle into [0, 2pi).
inline double normalize_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

/// Distance between two angles measured along the circle, in [0, pi].
inline double angular_distance(double a, double b) {
  const double d = normalize_angle(a - b);
  return std::min(d, kTwoPi - d);
}

/// Point on the unit circle stored by its angle, so |zeta| = 1 is exact up to
/// the rounding of cos/sin.
class BoundaryPoint {
 public:
  BoundaryPoint() = default;
  explicit BoundaryPoint(double theta) : theta_(normalize_angle(theta)) {}

  double theta() const { return theta_; }
  cplx point() const { return std::polar(1.0, theta_); }

  friend bool operator==(const BoundaryPoint&, const BoundaryPoint&) = default;

 private:
  double theta_ = 0.0;
};

/// Value and first two complex derivatives at a point.
struct Jet {
  cplx value;
  cplx first;
  cplx second;

  Jet operator*(const Jet& o) const {
    return {value * o.value, first * o.value + value * o.first,
            second * o.value + 2.0 * first * o.first + value * o.second};
  }
};

struct BoundaryDerivatives {
  cplx value;
  cplx first;
  cplx second;
  double abs_first;  // |u'(zeta)|, the angular derivative
};

struct SpectrumDescription {
  std::vector<cplx> interior_points;           // with multiplicity
  std::vector<BoundaryPoint> boundary_points;  // sigma(u) on the circle
};

struct FiniteBlaschke {
  std::vector<cplx> zeros;
  cplx factor{1.0, 0.0};
};

struct SingularSingleAtom {
  double xi_angle = 0.0;
  double mass = 1.0;
};

class InnerFunction {
 public:
  static constexpr double kZeroMargin = 1e-12;

  static InnerFunction blaschke(std::vector<cplx> zeros,
                                cplx factor = cplx{1.0, 0.0}) {
    if (zeros.empty())
      throw ArgumentError("Blaschke product needs at least one zero");
    for (const auto& a : zeros) {
      if (!(std::abs(a) < 1.0 - kZeroMargin))
        throw ArgumentError("Blaschke zero too close to (or outside) the unit circle");
    }
    if (!(std::abs(std::abs(factor) - 1.0) <= 1e-12))
      throw ArgumentError("Blaschke factor must be unimodular");
    return InnerFunction(FiniteBlaschke{std::move(zeros), factor});
  }

  static InnerFunction singular(double xi_angle, double mass) {
    if (!(mass > 0.0) || !std::isfinite(mass))
      throw ArgumentError("singular mass must be positive");
    if (!std::isfinite(xi_angle)) throw ArgumentError("atom angle must be finite");
    return InnerFunction(SingularSingleAtom{normalize_angle(xi_angle), mass});
  }

  bool is_blaschke() const { return std::holds_alternative<FiniteBlaschke>(data_); }
  bool is_singular() const { return std::holds_alternative<SingularSingleAtom>(data_); }
  const FiniteBlaschke& as_blaschke() const { return std::get<FiniteBlaschke>(data_); }
  const SingularSingleAtom& as_singular() const { return std::get<SingularSingleAtom>(data_); }

  /// Degree for Blaschke products, 0 for the singular family (infinite-dimensional K_u).
  std::size_t degree() const { return is_blaschke() ? as_blaschke().zeros.size() : 0; }

  cplx operator()(cplx z) const { return value(z); }

  cplx value(cplx z) const {
    check_domain(z);
    if (is_blaschke()) {
      const auto& b = as_blaschke();
      cplx p = b.factor;
      for (const auto& a : b.zeros) p *= (z - a) / (1.0 - std::conj(a) * z);
      return p;
    }
    const auto& s = as_singular();
    const cplx xi = std::polar(1.0, s.xi_angle);
    return std::exp(-s.mass * (xi + z) / (xi - z));
  }

  /// u, u', u'' at any admissible point of the closed disk. Blaschke products
  /// use Leibniz accumulation over the factors, which stays valid at zeros.
  Jet jet(cplx z) const {
    check_domain(z);
    if (is_blaschke()) {
      const auto& b = as_blaschke();
      Jet acc{b.factor, 0.0, 0.0};
      for (const auto& a : b.zeros) {
        const cplx ac = std::conj(a);
        const cplx den = 1.0 - ac * z;
        const double w = 1.0 - std::norm(a);
        acc = acc * Jet{(z - a) / den, w / (den * den), 2.0 * ac * w / (den * den * den)};
      }
      return acc;
    }
    const auto& s = as_singular();
    const cplx xi = std::polar(1.0, s.xi_angle);
    const cplx d = xi - z;
    const cplx u = std::exp(-s.mass * (xi + z) / d);
    const cplx g = -2.0 * s.mass * xi / (d * d);
    const cplx gp = -4.0 * s.mass * xi / (d * d * d);
    return {u, g * u, (gp + g * g) * u};
  }

  /// Closed-form boundary derivatives. For Blaschke products the derivatives
  /// come from the logarithmic derivative sum(1/(z-a) + conj(a)/(1-conj(a)z))
  /// and |u'| from the Poisson sum sum (1-|a|^2)/|zeta-a|^2.
  BoundaryDerivatives boundary_derivatives(const BoundaryPoint& zeta) const {
    const cplx z = zeta.point();
    check_domain(z);
    if (is_blaschke()) {
      const auto& b = as_blaschke();
      const cplx u = value(z);
      cplx g = 0.0, gp = 0.0;
      double poisson = 0.0;
      for (const auto& a : b.zeros) {
        const cplx ac = std::conj(a);
        const cplx za = z - a;
        const cplx den = 1.0 - ac * z;
        g += 1.0 / za + ac / den;
        gp += -1.0 / (za * za) + (ac * ac) / (den * den);
        poisson += (1.0 - std::norm(a)) / std::norm(za);
      }
      if (std::abs(std::abs(g * u) - poisson) > 1e-10 * poisson)
        throw InternalError("logarithmic derivative disagrees with the Poisson sum");
      return {u, g * u, (gp + g * g) * u, poisson};
    }
    const Jet j = jet(z);
    const auto& s = as_singular();
    const double chord2 = std::norm(z - std::polar(1.0, s.xi_angle));
    return {j.value, j.first, j.second, 2.0 * s.mass / chord2};
  }

  SpectrumDescription spectrum() const {
    SpectrumDescription out;
    if (is_blaschke()) {
      out.interior_points = as_blaschke().zeros;
    } else {
      out.boundary_points.emplace_back(as_singular().xi_angle);
    }
    return out;
  }

  /// Chordal distance from zeta to the boundary spectrum; +inf when it is empty.
  double dist_to_boundary_spectrum(const BoundaryPoint& zeta) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& eta : spectrum().boundary_points)
      best = std::min(best, std::abs(zeta.point() - eta.point()));
    return best;
  }

  /// Canonical spec string accepted by parse_inner().
  std::string to_spec() const;

 private:
  explicit InnerFunction(FiniteBlaschke b) : data_(std::move(b)) {}
  explicit InnerFunction(SingularSingleAtom s) : data_(s) {}

  void check_domain(cplx z) const {
    if (!(std::abs(z) <= 1.0 + 1e-12)) throw DomainError("evaluation point outside the closed disk");
    if (is_singular()) {
      const cplx xi = std::polar(1.0, as_singular().xi_angle);
      if (std::abs(z - xi) < 1e-14) throw DomainError("evaluation at the boundary spectrum point");
    }
  }

  std::variant<FiniteBlaschke, SingularSingleAtom> data_;
};

namespace detail {

inline std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string complex_to_spec(cplx c) {
  std::string out = fmt17(c.real());
  if (c.imag() != 0.0) {
    if (c.imag() >= 0.0) out += '+';
    out += fmt17(c.imag()) + "i";
  }
  return out;
}

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline double parse_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ArgumentError("cannot parse number '" + s + "'");
  }
  if (used != s.size()) throw ArgumentError("cannot parse number '" + s + "'");
  return v;
}

}  // namespace detail

/// Parses "re", "re+imi", "re-imi", "imi", "i", "-i".
inline cplx parse_complex(std::string_view text) {
  static const std::regex real_only(R"(^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$)");
  static const std::regex imag_only(R"(^([+-]?)((\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)?i$)");
  static const std::regex both(
      R"(^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)([+-])((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?i$)");
  const std::string s = detail::trim(text);
  std::smatch m;
  if (std::regex_match(s, real_only)) return {detail::parse_real(s), 0.0};
  if (std::regex_match(s, m, imag_only)) {
    const double mag = m[2].matched ? detail::parse_real(m[2].str()) : 1.0;
    return {0.0, m[1].str() == "-" ? -mag : mag};
  }
  if (std::regex_match(s, m, both)) {
    const double re = detail::parse_real(m[1].str());
    const double mag = m[3].matched ? detail::parse_real(m[3].str()) : 1.0;
    return {re, m[2].str() == "-" ? -mag : mag};
  }
  throw ArgumentError("cannot parse complex number '" + s + "'");
}

/// Grammar:
///   blaschke:<c>[,<c>...][;factor=<c>]
///   singular:xi=<radians>,s=<mass>
inline InnerFunction parse_inner(std::string_view spec) {
  const std::string s = detail::trim(spec);
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw ArgumentError("inner spec needs a 'family:' prefix");
  const std::string family = s.substr(0, colon);
  const std::string body = s.substr(colon + 1);

  auto split = [](const std::string& str, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
      const auto pos = str.find(sep, start);
      parts.push_back(detail::trim(str.substr(start, pos - start)));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    return parts;
  };

  if (family == "blaschke") {
    std::string zeros_part = body;
    cplx factor{1.0, 0.0};
    if (const auto semi = body.find(';'); semi != std::string::npos) {
      zeros_part = body.substr(0, semi);
      const std::string opt = detail::trim(body.substr(semi + 1));
      if (opt.rfind("factor=", 0) != 0) throw ArgumentError("unknown Blaschke option '" + opt + "'");
      factor = parse_complex(opt.substr(7));
    }
    std::vector<cplx> zeros;
    for (const auto& tok : split(zeros_part, ',')) {
      if (tok.empty()) throw ArgumentError("empty Blaschke zero");
      zeros.push_back(parse_complex(tok));
    }
    return InnerFunction::blaschke(std::move(zeros), factor);
  }
  if (family == "singular") {
    double xi = 0.0, mass = 0.0;
    bool have_xi = false, have_s = false;
    for (const auto& tok : split(body, ',')) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) throw ArgumentError("expected key=value in '" + tok + "'");
      const std::string key = detail::trim(tok.substr(0, eq));
      const double v = detail::parse_real(detail::trim(tok.substr(eq + 1)));
      if (key == "xi") {
        xi = v;
        have_xi = true;
      } else if (key == "s") {
        mass = v;
        have_s = true;
      } else {
        throw ArgumentError("unknown singular option '" + key + "'");
      }
    }
    if (!have_xi || !have_s) throw ArgumentError("singular spec needs xi= and s=");
    return InnerFunction::singular(xi, mass);
  }
  throw ArgumentError("unknown inner family '" + family + "'");
}

inline std::string InnerFunction::to_spec() const {
  if (is_blaschke()) {
    const auto& b = as_blaschke();
    std::string out = "blaschke:";
    for (std::size_t k = 0; k < b.zeros.size(); ++k) {
      if (k) out += ',';
      out += detail::complex_to_spec(b.zeros[k]);
    }
    if (b.factor != cplx{1.0, 0.0}) out += ";factor=" + detail::complex_to_spec(b.factor);
    return out;
  }
  const auto& s = as_singular();
  return "singular:xi=" + detail::fmt17(s.xi_angle) + ",s=" + detail::fmt17(s.mass);
}

}  // namespace mslab
