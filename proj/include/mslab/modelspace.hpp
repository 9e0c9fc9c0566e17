#pragma once

// Reproducing kernels of K_u, the Clark and Takenaka-Malmquist orthonormal
// bases, and expansion of functions in them.

#include <cmath>
#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mslab/clark.hpp"
#include "mslab/errors.hpp"
#include "mslab/inner.hpp"
#include "mslab/quadrature.hpp"

namespace mslab {

/// Distance below which a boundary kernel is evaluated by its first-order
/// Taylor expansion around its own base point.
inline constexpr double kRemovableRadius = 1e-8;

/// k_w(z) = (1 - conj(u(w)) u(z)) / (1 - conj(w) z) for w in the disk or on
/// the circle off sigma(u).
class KernelFunction {
 public:
  static KernelFunction boundary(const InnerFunction& u, const BoundaryPoint& zeta) {
    if (u.is_singular() && u.dist_to_boundary_spectrum(zeta) == 0.0)
      throw DomainError("boundary kernel requested at the boundary spectrum");
    const BoundaryDerivatives d = u.boundary_derivatives(zeta);
    KernelFunction k(u, zeta.point(), true);
    k.u_base_ = d.value;
    k.norm_sq_ = d.abs_first;
    k.base_derivative_ = 0.5 * zeta.point() * std::conj(d.value) * d.second;
    return k;
  }

  static KernelFunction interior(const InnerFunction& u, cplx w) {
    if (!(std::abs(w) < 1.0)) throw DomainError("interior kernel needs |w| < 1");
    KernelFunction k(u, w, false);
    k.u_base_ = u.value(w);
    k.norm_sq_ = (1.0 - std::norm(k.u_base_)) / (1.0 - std::norm(w));
    return k;
  }

  cplx base() const { return base_; }
  bool on_boundary() const { return on_boundary_; }

  /// ||k_w||^2 = k_w(w); equals |u'(zeta)| for boundary base points.
  double norm_sq() const { return norm_sq_; }
  double norm() const { return std::sqrt(norm_sq_); }

  cplx operator()(cplx z) const { return value_with(z, u_->value(z)); }

  /// Evaluation when u(z) is already known.
  cplx value_with(cplx z, cplx uz) const {
    if (on_boundary_ && std::abs(z - base_) < kRemovableRadius)
      return norm_sq_ + base_derivative_ * (z - base_);
    return (1.0 - std::conj(u_base_) * uz) / (1.0 - std::conj(base_) * z);
  }

  /// k_w'(z) by the quotient rule; at a boundary base point itself,
  /// k_zeta'(zeta) = zeta conj(u(zeta)) u''(zeta) / 2.
  cplx derivative(cplx z) const {
    if (on_boundary_ && std::abs(z - base_) < kRemovableRadius) return base_derivative_;
    const Jet j = u_->jet(z);
    return derivative_with(z, j.value, j.first);
  }

  cplx derivative_with(cplx z, cplx uz, cplx uprime_z) const {
    if (on_boundary_ && std::abs(z - base_) < kRemovableRadius) return base_derivative_;
    const cplx wc = std::conj(base_);
    const cplx den = 1.0 - wc * z;
    const cplx num = 1.0 - std::conj(u_base_) * uz;
    return (-std::conj(u_base_) * uprime_z * den + wc * num) / (den * den);
  }

 private:
  KernelFunction(const InnerFunction& u, cplx base, bool on_boundary)
      : u_(std::make_shared<const InnerFunction>(u)), base_(base), on_boundary_(on_boundary) {}

  std::shared_ptr<const InnerFunction> u_;
  cplx base_;
  bool on_boundary_;
  cplx u_base_{};
  double norm_sq_ = 0.0;
  cplx base_derivative_{};
};

enum class BasisKind { Clark, TakenakaMalmquist };

inline const char* to_string(BasisKind k) {
  return k == BasisKind::Clark ? "clark" : "takenaka-malmquist";
}

/// Orthonormal system in K_u. Complete for finite Blaschke products; for the
/// singular family the Clark system is a finite window and spans a subspace.
class OrthonormalBasis {
 public:
  /// Normalized boundary kernels at the atoms of mu.
  static OrthonormalBasis clark(const InnerFunction& u, ClarkMeasure mu) {
    OrthonormalBasis b(u, BasisKind::Clark);
    b.kernels_.reserve(mu.atoms.size());
    for (const auto& atom : mu.atoms) b.kernels_.push_back(KernelFunction::boundary(u, atom.point));
    b.truncated_ = u.is_singular();
    b.measure_ = std::move(mu);
    return b;
  }

  /// b_k(z) = sqrt(1 - |a_k|^2) / (1 - conj(a_k) z) prod_{j<k} (z - a_j)/(1 - conj(a_j) z).
  static OrthonormalBasis takenaka_malmquist(const InnerFunction& u) {
    if (!u.is_blaschke()) throw ArgumentError("Takenaka-Malmquist basis needs a Blaschke product");
    return OrthonormalBasis(u, BasisKind::TakenakaMalmquist);
  }

  BasisKind kind() const { return kind_; }
  const InnerFunction& inner() const { return u_; }
  bool is_truncated() const { return truncated_; }
  const std::optional<ClarkMeasure>& measure() const { return measure_; }
  std::optional<std::size_t> ell() const { return measure_ ? measure_->ell : std::nullopt; }
  const std::vector<KernelFunction>& kernels() const { return kernels_; }

  Eigen::Index size() const {
    return static_cast<Eigen::Index>(kind_ == BasisKind::Clark ? kernels_.size() : u_.degree());
  }

  /// All basis elements at z.
  Eigen::VectorXcd values(cplx z) const {
    Eigen::VectorXcd out(size());
    if (kind_ == BasisKind::Clark) {
      const cplx uz = u_.value(z);
      for (Eigen::Index i = 0; i < out.size(); ++i) {
        const auto& k = kernels_[static_cast<std::size_t>(i)];
        out(i) = k.value_with(z, uz) / k.norm();
      }
      return out;
    }
    const auto& zeros = u_.as_blaschke().zeros;
    cplx prefix = 1.0;
    for (std::size_t k = 0; k < zeros.size(); ++k) {
      const cplx ac = std::conj(zeros[k]);
      const cplx den = 1.0 - ac * z;
      out(static_cast<Eigen::Index>(k)) = std::sqrt(1.0 - std::norm(zeros[k])) / den * prefix;
      prefix *= (z - zeros[k]) / den;
    }
    return out;
  }

  /// All basis element derivatives at z.
  Eigen::VectorXcd derivatives(cplx z) const {
    Eigen::VectorXcd out(size());
    if (kind_ == BasisKind::Clark) {
      const Jet j = u_.jet(z);
      for (Eigen::Index i = 0; i < out.size(); ++i) {
        const auto& k = kernels_[static_cast<std::size_t>(i)];
        out(i) = k.derivative_with(z, j.value, j.first) / k.norm();
      }
      return out;
    }
    const auto& zeros = u_.as_blaschke().zeros;
    Jet prefix{1.0, 0.0, 0.0};
    for (std::size_t k = 0; k < zeros.size(); ++k) {
      const cplx ac = std::conj(zeros[k]);
      const cplx den = 1.0 - ac * z;
      const double w = 1.0 - std::norm(zeros[k]);
      const double c = std::sqrt(w);
      const Jet head{c / den, c * ac / (den * den), 0.0};
      out(static_cast<Eigen::Index>(k)) = (prefix * head).first;
      prefix = prefix * Jet{(z - zeros[k]) / den, w / (den * den), 0.0};
    }
    return out;
  }

  cplx value(Eigen::Index i, cplx z) const { return values(z)(i); }
  cplx derivative(Eigen::Index i, cplx z) const { return derivatives(z)(i); }

  /// f(z) = sum gamma_i b_i(z).
  cplx synthesize(const Eigen::VectorXcd& coeffs, cplx z) const {
    return values(z).cwiseProduct(coeffs).sum();
  }
  cplx synthesize_derivative(const Eigen::VectorXcd& coeffs, cplx z) const {
    return derivatives(z).cwiseProduct(coeffs).sum();
  }

 private:
  OrthonormalBasis(const InnerFunction& u, BasisKind kind) : u_(u), kind_(kind) {}

  InnerFunction u_;
  BasisKind kind_;
  bool truncated_ = false;
  std::vector<KernelFunction> kernels_;
  std::optional<ClarkMeasure> measure_;
};

/// Element of K_u given by its coefficients in an orthonormal basis.
struct KuVector {
  Eigen::VectorXcd coefficients;

  /// Parseval norm.
  double norm() const { return coefficients.norm(); }
};

/// Coefficients <f, b_i> by circle quadrature.
template <class F>
KuVector expand(const OrthonormalBasis& basis, F&& f, const CircleQuadrature& q) {
  Eigen::VectorXcd acc(basis.size());
  std::vector<cplx> terms(q.size());
  Eigen::MatrixXcd samples(static_cast<Eigen::Index>(q.size()), basis.size());
  for (std::size_t m = 0; m < q.size(); ++m) {
    const cplx z = q.node(m);
    samples.row(static_cast<Eigen::Index>(m)) = f(z) * basis.values(z).conjugate().transpose();
  }
  for (Eigen::Index i = 0; i < basis.size(); ++i) {
    for (std::size_t m = 0; m < q.size(); ++m) terms[m] = samples(static_cast<Eigen::Index>(m), i);
    acc(i) = pairwise_sum(std::span<const cplx>(terms)) * q.weight();
  }
  return {acc};
}

/// Clark coefficients by the reproducing property: <f, k_i>/||k_i|| = f(zeta_i)/||k_i||.
template <class F>
KuVector clark_coefficients(const OrthonormalBasis& basis, F&& f) {
  if (basis.kind() != BasisKind::Clark) throw ArgumentError("clark_coefficients needs a Clark basis");
  Eigen::VectorXcd c(basis.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const auto& k = basis.kernels()[static_cast<std::size_t>(i)];
    c(i) = f(k.base()) / k.norm();
  }
  return {c};
}

/// Gram matrix G_ij = <b_j, b_i> by quadrature.
inline Eigen::MatrixXcd gram_matrix(const OrthonormalBasis& basis, const CircleQuadrature& q) {
  const Eigen::Index n = basis.size();
  Eigen::MatrixXcd samples(static_cast<Eigen::Index>(q.size()), n);
  for (std::size_t m = 0; m < q.size(); ++m)
    samples.row(static_cast<Eigen::Index>(m)) = basis.values(q.node(m)).transpose();
  Eigen::MatrixXcd g(n, n);
  std::vector<cplx> terms(q.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (std::size_t m = 0; m < q.size(); ++m) {
        const auto mm = static_cast<Eigen::Index>(m);
        terms[m] = samples(mm, j) * std::conj(samples(mm, i));
      }
      g(i, j) = pairwise_sum(std::span<const cplx>(terms)) * q.weight();
    }
  }
  return g;
}

}  // namespace mslab
