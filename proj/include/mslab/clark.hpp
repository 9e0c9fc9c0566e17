#pragma once

// Clark measures sigma_alpha for the implemented inner families. Atoms are the
// solutions of u(zeta) = alpha on the circle, with mass 1/|u'(zeta)|.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mslab/errors.hpp"
#include "mslab/inner.hpp"

namespace mslab {

struct ClarkAtom {
  BoundaryPoint point;
  double mass = 0.0;
  long branch = 0;  // phase branch index k of the atom
};

struct ClarkMeasure {
  cplx alpha{1.0, 0.0};
  std::vector<ClarkAtom> atoms;  // ascending angle in [0, 2pi)
  std::optional<std::size_t> ell;
  std::optional<long> window;  // singular family only

  std::size_t size() const { return atoms.size(); }

  double total_mass() const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.mass;
    return s;
  }
};

struct PhaseValue {
  double phase;
  double derivative;
};

/// Continuous branch Phi of arg u(e^{i theta}), strictly increasing.
///
/// Blaschke products: each factor contributes theta + 2 arg(1 - a e^{-i theta}),
/// where the arg is principal and continuous because Re(1 - a e^{-i theta}) > 0.
/// The branch is pinned so that Phi(0) equals the principal argument of u(1).
///
/// Singular atom: Phi(theta) = -s cot((theta - theta_xi)/2) on
/// (theta_xi, theta_xi + 2pi), i.e. u(e^{i theta}) = exp(i Phi(theta)).
inline PhaseValue continuous_phase(const InnerFunction& u, double theta) {
  if (u.is_blaschke()) {
    const auto& b = u.as_blaschke();
    auto raw = [&](double t) {
      const cplx e = std::polar(1.0, -t);
      double p = 0.0;
      for (const auto& a : b.zeros) p += t + 2.0 * std::arg(1.0 - a * e);
      return p;
    };
    const double phase = std::arg(u.value(cplx{1.0, 0.0})) + raw(theta) - raw(0.0);
    const cplx z = std::polar(1.0, theta);
    double d = 0.0;
    for (const auto& a : b.zeros) d += (1.0 - std::norm(a)) / std::norm(z - a);
    return {phase, d};
  }
  const auto& s = u.as_singular();
  const double phi = normalize_angle(theta - s.xi_angle);
  if (phi == 0.0) throw DomainError("phase requested at the boundary spectrum point");
  const double half = 0.5 * phi;
  const double sn = std::sin(half);
  return {-s.mass * std::cos(half) / sn, 0.5 * s.mass / (sn * sn)};
}

namespace detail {

inline void sort_and_locate(ClarkMeasure& mu, const std::optional<BoundaryPoint>& base,
                            const InnerFunction& u) {
  std::sort(mu.atoms.begin(), mu.atoms.end(), [](const ClarkAtom& a, const ClarkAtom& b) {
    return a.point.theta() < b.point.theta();
  });
  for (std::size_t i = 1; i < mu.atoms.size(); ++i) {
    if (!(mu.atoms[i].point.theta() > mu.atoms[i - 1].point.theta()))
      throw InternalError("duplicate Clark atom angle");
  }
  if (!base) return;
  for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
    if (angular_distance(mu.atoms[i].point.theta(), base->theta()) < 1e-9) {
      mu.atoms[i].point = *base;
      mu.atoms[i].mass = 1.0 / u.boundary_derivatives(*base).abs_first;
      mu.ell = i;
      return;
    }
  }
}

}  // namespace detail

/// All n atoms of sigma_alpha for a degree-n Blaschke product. Roots of
/// Phi(theta) = arg(alpha) + 2 pi k are bracketed on 64 n samples, bisected to
/// width 1e-3 and finished with safeguarded Newton.
inline ClarkMeasure clark_atoms_blaschke(const InnerFunction& u, cplx alpha,
                                         std::optional<BoundaryPoint> base = std::nullopt) {
  if (!u.is_blaschke()) throw ArgumentError("clark_atoms_blaschke needs a Blaschke product");
  if (std::abs(std::abs(alpha) - 1.0) > 1e-10) throw ArgumentError("alpha must be unimodular");
  const std::size_t n = u.degree();
  const std::size_t samples = 64 * n;

  std::vector<double> grid(samples + 1), phase(samples + 1);
  for (std::size_t j = 0; j <= samples; ++j) {
    grid[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(samples);
    phase[j] = continuous_phase(u, grid[j]).phase;
  }
  const double phi0 = phase.front();
  double offset = std::fmod(std::arg(alpha) - phi0, kTwoPi);
  if (offset < 0.0) offset += kTwoPi;

  ClarkMeasure mu;
  mu.alpha = alpha;
  mu.atoms.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double target = phi0 + offset + kTwoPi * static_cast<double>(k);
    auto it = std::upper_bound(phase.begin(), phase.end(), target);
    std::size_t j = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - phase.begin() - 1, 0));
    j = std::min(j, samples - 1);
    double lo = grid[j], hi = grid[j + 1];
    auto residual = [&](double t) { return continuous_phase(u, t).phase - target; };

    while (hi - lo > 1e-3) {
      const double mid = 0.5 * (lo + hi);
      (residual(mid) > 0.0 ? hi : lo) = mid;
    }
    double t = 0.5 * (lo + hi);
    for (int iter = 0; iter < 100; ++iter) {
      const PhaseValue pv = continuous_phase(u, t);
      const double r = pv.phase - target;
      if (std::abs(r) < 1e-13) {
        t -= r / pv.derivative;
        break;
      }
      (r > 0.0 ? hi : lo) = t;
      double next = t - r / pv.derivative;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (next == t) break;
      t = next;
    }
    const BoundaryPoint p(t);
    const double uprime = u.boundary_derivatives(p).abs_first;
    if (std::abs(u.value(p.point()) - alpha) > 1e-10)
      throw InternalError("Clark atom residual above 1e-10");
    mu.atoms.push_back({p, 1.0 / uprime, static_cast<long>(k)});
  }
  detail::sort_and_locate(mu, base, u);
  return mu;
}

/// Atoms with branch index |k| <= window for the singular atom at xi:
/// theta_k = theta_xi + 2 arccot(-(tau + 2 pi k)/s), arccot valued in (0, pi).
/// When a base point is given, tau = Phi(base) so that the base is the k = 0 atom.
inline ClarkMeasure clark_atoms_singular(const InnerFunction& u, cplx alpha, long window,
                                         std::optional<BoundaryPoint> base = std::nullopt) {
  if (!u.is_singular()) throw ArgumentError("clark_atoms_singular needs a singular inner function");
  if (window < 0) throw ArgumentError("window must be nonnegative");
  if (std::abs(std::abs(alpha) - 1.0) > 1e-10) throw ArgumentError("alpha must be unimodular");
  const auto& s = u.as_singular();
  const double tau = base ? continuous_phase(u, base->theta()).phase : std::arg(alpha);

  ClarkMeasure mu;
  mu.alpha = alpha;
  mu.window = window;
  mu.atoms.reserve(static_cast<std::size_t>(2 * window + 1));
  for (long k = -window; k <= window; ++k) {
    const double phi = 2.0 * std::atan2(1.0, -(tau + kTwoPi * static_cast<double>(k)) / s.mass);
    const double sn = std::sin(0.5 * phi);
    mu.atoms.push_back({BoundaryPoint(s.xi_angle + phi), 2.0 * sn * sn / s.mass, k});
  }
  detail::sort_and_locate(mu, base, u);
  return mu;
}

/// Clark measure for alpha = u(zeta) with zeta marked as atom ell.
inline ClarkMeasure clark_measure(const InnerFunction& u, const BoundaryPoint& zeta, long window = 0) {
  const cplx alpha = u.value(zeta.point());
  ClarkMeasure mu = u.is_blaschke() ? clark_atoms_blaschke(u, alpha, zeta)
                                    : clark_atoms_singular(u, alpha, window, zeta);
  if (!mu.ell) throw InternalError("base point not found among Clark atoms");
  return mu;
}

struct HerglotzCheck {
  double partial_sum;
  double expected;
  double gap;  // expected - partial_sum
};

/// Compares the total atom mass with (1 - |u(0)|^2) / |alpha - u(0)|^2, the
/// Herglotz identity evaluated at the origin.
inline HerglotzCheck herglotz_mass_check(const InnerFunction& u, cplx alpha, const ClarkMeasure& mu) {
  if (std::abs(mu.alpha - alpha) > 1e-10) throw ArgumentError("measure was built for a different alpha");
  for (const auto& atom : mu.atoms) {
    if (std::abs(u.value(atom.point.point()) - alpha) > 1e-8)
      throw ArgumentError("measure atoms do not solve u = alpha for this inner function");
  }
  const cplx u0 = u.value(cplx{0.0, 0.0});
  const double expected = (1.0 - std::norm(u0)) / std::norm(alpha - u0);
  const double partial = mu.total_mass();
  return {partial, expected, expected - partial};
}

struct NeighborRatios {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  std::size_t count = 0;
};

/// Ratios mass(zeta) / |zeta - zeta_pm| against both angular neighbours.
/// Blaschke atoms wrap around the circle. Singular atoms are ordered by branch
/// index, and only atoms with both branch neighbours inside the window count,
/// so the pair straddling the spectrum point is never compared.
inline NeighborRatios neighbor_ratios(const ClarkMeasure& mu) {
  const std::size_t n = mu.atoms.size();
  std::vector<const ClarkAtom*> order;
  for (const auto& a : mu.atoms) order.push_back(&a);
  if (mu.window) {
    std::sort(order.begin(), order.end(), [](const ClarkAtom* a, const ClarkAtom* b) { return a->branch < b->branch; });
  } else {
    std::sort(order.begin(), order.end(),
              [](const ClarkAtom* a, const ClarkAtom* b) { return a->point.theta() < b->point.theta(); });
  }

  if (n < 2) throw ArgumentError("neighbour ratios need at least two atoms");
  NeighborRatios r{std::numeric_limits<double>::infinity(), 0.0, 0};
  const auto record = [&r](const ClarkAtom& a, const ClarkAtom& b) {
    const double q = a.mass / std::abs(a.point.point() - b.point.point());
    r.min_ratio = std::min(r.min_ratio, q);
    r.max_ratio = std::max(r.max_ratio, q);
    ++r.count;
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (mu.window) {
      if (i == 0 || i + 1 == n) continue;
      record(*order[i], *order[i - 1]);
      record(*order[i], *order[i + 1]);
    } else {
      record(*order[i], *order[(i + n - 1) % n]);
      record(*order[i], *order[(i + 1) % n]);
    }
  }
  if (r.count == 0) throw ArgumentError("window too small for neighbour ratios");
  return r;
}

}  // namespace mslab
