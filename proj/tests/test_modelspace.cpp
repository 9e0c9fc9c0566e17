#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace mslab;
using namespace mslab::testing;

namespace {

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

const CircleQuadrature kQuad(4096, 0.1234);

}  // namespace

TEST(BoundaryKernel, MonomialSquareAtOne) {
  const auto k = KernelFunction::boundary(z_squared(), BoundaryPoint(0.0));
  for (cplx z : {cplx{0.0, 0.0}, cplx{0.3, -0.4}, std::polar(1.0, 2.0), cplx{-1.0, 0.0}})
    EXPECT_LT(std::abs(k(z) - (1.0 + z)), 1e-15);
  EXPECT_NEAR(k(1.0).real(), 2.0, 1e-15);
  EXPECT_NEAR(k.norm_sq(), 2.0, 1e-15);
  EXPECT_LT(std::abs(k.derivative(1.0) - 1.0), 1e-15);
  EXPECT_LT(std::abs(k.derivative(cplx{0.2, 0.1}) - 1.0), 1e-15);
}

TEST(BoundaryKernel, DegreeOneAtMinusOne) {
  const auto k = KernelFunction::boundary(half_zero(), BoundaryPoint(kPi));
  for (cplx z : {cplx{0.0, 0.0}, cplx{0.5, 0.5}, std::polar(1.0, 1.0)})
    EXPECT_LT(std::abs(k(z) - 1.0 / (2.0 - z)), 1e-15);
  // 1/(2 - z) = sum z^n / 2^{n+1}, so ||k||^2 = sum 4^{-n} / 4.
  double series = 0.0;
  for (int n = 60; n >= 0; --n) series += std::pow(4.0, -n) / 4.0;
  EXPECT_NEAR(k.norm_sq(), series, 1e-15);
  EXPECT_NEAR(k.norm_sq(), 1.0 / 3.0, 1e-15);
}

TEST(BoundaryKernel, DerivativeAtBaseMatchesFiniteDifference) {
  for (const auto& u : {random_blaschke(41, 4), singular_example(), InnerFunction::singular(2.0, 0.4)}) {
    const BoundaryPoint zeta(3.9);
    const auto k = KernelFunction::boundary(u, zeta);
    EXPECT_NEAR(std::abs(k(zeta.point())), u.boundary_derivatives(zeta).abs_first,
                1e-10 * u.boundary_derivatives(zeta).abs_first);
    // Symmetric chords straddle the removable point and use the closed form.
    const cplx fd = circle_derivative(k, zeta, 1e-4);
    EXPECT_LT(rel_err(k.derivative(zeta.point()), fd), 1e-6);
    const BoundaryPoint other(1.1);
    EXPECT_LT(rel_err(k.derivative(other.point()), circle_derivative(k, other)), 1e-6);
  }
}

TEST(BoundaryKernel, RejectsSpectrum) {
  EXPECT_THROW(KernelFunction::boundary(singular_example(), BoundaryPoint(0.0)), DomainError);
}

TEST(InteriorKernel, ReproducesPointValues) {
  const auto u = z_squared();
  const auto kw = KernelFunction::interior(u, 0.3);
  const cplx ip = inner_product([](cplx z) { return 1.0 + z; }, kw, kQuad);
  EXPECT_LT(std::abs(ip - 1.3), 1e-14);

  const auto v = random_blaschke(8, 3);
  const cplx w{0.2, -0.5};
  const auto kv = KernelFunction::interior(v, w);
  const auto kx = KernelFunction::interior(v, cplx{-0.1, 0.3});
  EXPECT_LT(std::abs(inner_product(kx, kv, kQuad) - kx(w)), 1e-12);
  EXPECT_NEAR(kv.norm_sq(), inner_product(kv, kv, kQuad).real(), 1e-12);
}

TEST(InnerProduct, Monomials) {
  EXPECT_LT(std::abs(inner_product([](cplx z) { return 1.0 + z; }, [](cplx z) { return 1.0 - z; }, kQuad)), 1e-14);
}

TEST(InnerProduct, BoundaryKernelNorm) {
  const auto k = KernelFunction::boundary(z_squared(), BoundaryPoint(0.0));
  EXPECT_NEAR(inner_product(k, k, CircleQuadrature::avoiding(BoundaryPoint(0.0), 4096)).real(), 2.0, 1e-13);
}

TEST(Quadrature, WeightsAndNodes) {
  const CircleQuadrature q(256, 0.5);
  EXPECT_NEAR(q.weight() * static_cast<double>(q.size()), 1.0, 1e-15);
  EXPECT_NEAR(q.angle(1) - q.angle(0), kTwoPi / 256, 1e-15);
  const auto a = CircleQuadrature::avoiding(BoundaryPoint(1.0), 512);
  EXPECT_NEAR(a.angle(0) - 1.0, 0.5 * a.spacing(), 1e-15);
  EXPECT_THROW(CircleQuadrature(0, 0.0), ArgumentError);
}

TEST(Quadrature, ClearanceFromSpectrum) {
  const CircleQuadrature q(256, 0.0);
  const std::vector<BoundaryPoint> on_node{BoundaryPoint(q.angle(3) + 1e-9)};
  const std::vector<BoundaryPoint> between{BoundaryPoint(q.angle(3) + 0.5 * q.spacing())};
  EXPECT_THROW(q.require_clearance(on_node), QuadratureError);
  EXPECT_NO_THROW(q.require_clearance(between));
}

TEST(Quadrature, GaussLegendreExactForPolynomials) {
  const GaussLegendre gl(8);
  for (int p = 0; p <= 15; ++p) {
    double s = 0.0;
    for (std::size_t i = 0; i < 8; ++i) s += gl.weights[i] * std::pow(gl.nodes[i], p);
    EXPECT_NEAR(s, 1.0 / (p + 1), 1e-14) << p;
  }
  const GaussLegendre one(1);
  EXPECT_NEAR(one.nodes[0], 0.5, 1e-15);
  EXPECT_NEAR(one.weights[0], 1.0, 1e-15);
}

TEST(Quadrature, PairwiseSumIsExactOnIntegers) {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  EXPECT_EQ(pairwise_sum(std::span<const double>(v)), 499500.0);
}

TEST(ClarkBasis, MonomialSquare) {
  const auto u = z_squared();
  const auto b = OrthonormalBasis::clark(u, clark_atoms_blaschke(u, 1.0));
  EXPECT_FALSE(b.is_truncated());
  ASSERT_EQ(b.size(), 2);
  const double r = 1.0 / std::sqrt(2.0);
  for (cplx z : {cplx{0.1, 0.7}, cplx{-0.5, 0.0}, std::polar(1.0, 0.3)}) {
    const auto v = b.values(z);
    EXPECT_LT(std::abs(v(0) - r * (1.0 + z)), 1e-14);
    EXPECT_LT(std::abs(v(1) - r * (1.0 - z)), 1e-14);
  }
  EXPECT_LT(max_abs(gram_matrix(b, kQuad) - Eigen::MatrixXcd::Identity(2, 2)), 1e-12);
}

TEST(ClarkBasis, DegreeOne) {
  const auto u = half_zero();
  const auto b = OrthonormalBasis::clark(u, clark_atoms_blaschke(u, -1.0));
  for (cplx z : {cplx{0.0, 0.0}, cplx{0.4, -0.2}})
    EXPECT_LT(std::abs(b.value(0, z) - std::sqrt(3.0) / (2.0 - z)), 1e-14);
}

TEST(ClarkBasis, SingularWindowIsTruncated) {
  const auto u = singular_example();
  const auto b = OrthonormalBasis::clark(u, clark_measure(u, BoundaryPoint(kPi), 3));
  EXPECT_TRUE(b.is_truncated());
  EXPECT_EQ(b.size(), 7);
  // Kernels at distinct atoms are orthogonal, so b_i vanishes at every other atom.
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    for (Eigen::Index j = 0; j < b.size(); ++j) {
      const auto& kj = b.kernels()[static_cast<std::size_t>(j)];
      const cplx v = b.value(i, kj.base());
      if (i == j)
        EXPECT_NEAR(std::abs(v), kj.norm(), 1e-10 * kj.norm());
      else
        EXPECT_LT(std::abs(v), 1e-10);
    }
  }
}

TEST(TakenakaMalmquist, ClosedForms) {
  const auto b0 = OrthonormalBasis::takenaka_malmquist(z_squared());
  const auto b1 = OrthonormalBasis::takenaka_malmquist(half_zero());
  const auto b2 = OrthonormalBasis::takenaka_malmquist(InnerFunction::blaschke({0.0, 0.5}));
  const double c = std::sqrt(3.0) / 2.0;
  for (cplx z : {cplx{0.3, 0.2}, std::polar(1.0, 2.5)}) {
    EXPECT_LT(std::abs(b0.value(0, z) - 1.0), 1e-15);
    EXPECT_LT(std::abs(b0.value(1, z) - z), 1e-15);
    EXPECT_LT(std::abs(b1.value(0, z) - c / (1.0 - 0.5 * z)), 1e-15);
    EXPECT_LT(std::abs(b2.value(1, z) - c * z / (1.0 - 0.5 * z)), 1e-15);
  }
  const auto g = gram_matrix(b2, kQuad);
  EXPECT_LT(std::abs(g(0, 1)), 1e-12);
  EXPECT_THROW(OrthonormalBasis::takenaka_malmquist(singular_example()), ArgumentError);
}

TEST(BasisProperties, GramIsIdentity) {
  for (std::uint64_t seed = 50; seed < 55; ++seed) {
    const auto u = random_blaschke(seed, 2 + seed % 5);
    const Eigen::Index n = static_cast<Eigen::Index>(u.degree());
    const auto clark = OrthonormalBasis::clark(u, clark_atoms_blaschke(u, std::polar(1.0, 0.9)));
    const auto tm = OrthonormalBasis::takenaka_malmquist(u);
    EXPECT_LT(max_abs(gram_matrix(clark, kQuad) - Eigen::MatrixXcd::Identity(n, n)), 1e-10);
    EXPECT_LT(max_abs(gram_matrix(tm, kQuad) - Eigen::MatrixXcd::Identity(n, n)), 1e-10);
  }
}

TEST(BasisProperties, ClarkInterpolation) {
  const auto u = random_blaschke(60, 5);
  const auto b = OrthonormalBasis::clark(u, clark_atoms_blaschke(u, std::polar(1.0, 2.0)));
  for (Eigen::Index j = 0; j < b.size(); ++j) {
    const auto& kj = b.kernels()[static_cast<std::size_t>(j)];
    const auto v = b.values(kj.base());
    for (Eigen::Index i = 0; i < b.size(); ++i)
      EXPECT_NEAR(std::abs(v(i) - (i == j ? kj.norm() : 0.0)), 0.0, 1e-9);
  }
}

TEST(BasisProperties, DerivativesMatchFiniteDifferences) {
  const auto u = random_blaschke(61, 4);
  for (const auto& b : {OrthonormalBasis::clark(u, clark_atoms_blaschke(u, 1.0)),
                        OrthonormalBasis::takenaka_malmquist(u)}) {
    const BoundaryPoint zeta(0.77);
    const auto d = b.derivatives(zeta.point());
    for (Eigen::Index i = 0; i < b.size(); ++i) {
      const cplx fd = circle_derivative([&](cplx z) { return b.value(i, z); }, zeta);
      EXPECT_LT(rel_err(d(i), fd), 1e-6);
    }
  }
}

TEST(BasisProperties, ParsevalAndRouteAgreement) {
  const auto u = random_blaschke(62, 6);
  const auto clark = OrthonormalBasis::clark(u, clark_atoms_blaschke(u, std::polar(1.0, 0.2)));
  const auto tm = OrthonormalBasis::takenaka_malmquist(u);
  const cplx w{0.4, 0.3};
  const auto kw = KernelFunction::interior(u, w);
  const KuVector a = expand(clark, kw, kQuad);
  const KuVector b = expand(tm, kw, kQuad);
  const KuVector c = clark_coefficients(clark, kw);
  const double quad_norm = std::sqrt(inner_product(kw, kw, kQuad).real());
  EXPECT_NEAR(a.norm(), quad_norm, 1e-10);
  EXPECT_NEAR(b.norm(), quad_norm, 1e-10);
  EXPECT_NEAR(a.norm(), kw.norm(), 1e-10);
  EXPECT_LT((a.coefficients - c.coefficients).norm(), 1e-10);
  EXPECT_LT(std::abs(clark.synthesize(a.coefficients, cplx{0.1, 0.1}) - kw(cplx{0.1, 0.1})), 1e-10);
  EXPECT_LT(std::abs(tm.synthesize(b.coefficients, cplx{0.1, 0.1}) - kw(cplx{0.1, 0.1})), 1e-10);
}
