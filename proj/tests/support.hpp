#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "mslab/mslab.hpp"

namespace mslab::testing {

inline constexpr double kPi = std::numbers::pi;

inline InnerFunction z_squared() { return InnerFunction::blaschke({0.0, 0.0}); }
inline InnerFunction half_zero() { return InnerFunction::blaschke({0.5}); }
inline InnerFunction singular_example() { return InnerFunction::singular(0.0, 1.0); }

/// Distinct zeros with radius 0.8 sqrt(U) and uniform angle.
inline InnerFunction random_blaschke(std::uint64_t seed, std::size_t degree) {
  Lcg64 rng(seed);
  std::vector<cplx> zeros;
  while (zeros.size() < degree) {
    const double r = 0.8 * std::sqrt(rng.uniform());
    const cplx a = std::polar(r, kTwoPi * rng.uniform());
    bool distinct = true;
    for (const cplx& b : zeros) distinct = distinct && std::abs(a - b) > 1e-3;
    if (distinct) zeros.push_back(a);
  }
  return InnerFunction::blaschke(zeros);
}

/// f'(z) by a central difference along the circle through z = zeta.
template <class F>
cplx circle_derivative(F&& f, const BoundaryPoint& zeta, double h = 1e-5) {
  const cplx zp = std::polar(1.0, zeta.theta() + h);
  const cplx zm = std::polar(1.0, zeta.theta() - h);
  return (f(zp) - f(zm)) / (zp - zm);
}

inline double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace mslab::testing

namespace mslab::testing {

/// Seeded fixtures shared by the unit and acceptance suites.
inline InnerFunction degree4_fixture() { return random_blaschke(2024, 4); }
inline InnerFunction degree6_fixture() { return random_blaschke(2026, 6); }

}  // namespace mslab::testing
