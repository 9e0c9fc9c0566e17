#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "mslab/errors.hpp"
#include "mslab/inner.hpp"

namespace mslab {

/// Equispaced rule on the circle for the normalized arc-length measure:
/// theta_m = offset + 2 pi m / M, weights 1/M.
class CircleQuadrature {
 public:
  CircleQuadrature(std::size_t nodes, double offset) : nodes_(nodes), offset_(offset) {
    if (nodes_ == 0) throw ArgumentError("quadrature needs at least one node");
  }

  /// Nodes shifted by half a spacing from zeta, so no node coincides with it.
  static CircleQuadrature avoiding(const BoundaryPoint& zeta, std::size_t nodes) {
    return CircleQuadrature(nodes, zeta.theta() + std::numbers::pi / static_cast<double>(nodes));
  }

  std::size_t size() const { return nodes_; }
  double offset() const { return offset_; }
  double spacing() const { return kTwoPi / static_cast<double>(nodes_); }
  double weight() const { return 1.0 / static_cast<double>(nodes_); }
  double angle(std::size_t m) const { return offset_ + spacing() * static_cast<double>(m); }
  cplx node(std::size_t m) const { return std::polar(1.0, angle(m)); }

  /// Throws if a node lies within a quarter spacing of one of the given points.
  void require_clearance(std::span<const BoundaryPoint> points) const {
    for (const auto& p : points) {
      const double rel = normalize_angle(p.theta() - offset_) / spacing();
      const double frac = rel - std::floor(rel);
      if (std::min(frac, 1.0 - frac) < 0.25)
        throw QuadratureError("quadrature node too close to a boundary spectrum point; re-offset the rule");
    }
  }

 private:
  std::size_t nodes_;
  double offset_;
};

/// Pairwise (cascade) summation; the reduction order depends only on size.
template <class T>
T pairwise_sum(std::span<const T> values) {
  if (values.size() <= 8) {
    T acc{};
    for (const auto& v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

/// <f, g> = (1/M) sum f(z_m) conj(g(z_m)).
template <class F, class G>
cplx inner_product(F&& f, G&& g, const CircleQuadrature& q) {
  std::vector<cplx> terms(q.size());
  for (std::size_t m = 0; m < q.size(); ++m) {
    const cplx z = q.node(m);
    terms[m] = f(z) * std::conj(g(z));
  }
  return pairwise_sum(std::span<const cplx>(terms)) * q.weight();
}

/// Gauss-Legendre rule mapped to [0, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(std::size_t n) : nodes(n), weights(n) {
    if (n == 0) throw ArgumentError("Gauss-Legendre needs at least one node");
    // Returns (P_n(x), P_n'(x)) from the three-term recurrence.
    auto legendre = [n](double x) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double pk = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      return std::pair{p1, static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0)};
    };
    for (std::size_t i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                          (static_cast<double>(n) + 0.5));
      for (int it = 0; it < 100; ++it) {
        const auto [p, dp] = legendre(x);
        const double dx = p / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      const double dp = legendre(x).second;
      nodes[n - 1 - i] = 0.5 * (x + 1.0);
      weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

}  // namespace mslab
