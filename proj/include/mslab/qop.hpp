#pragma once

// The boundary difference quotient Q f = (f - f(zeta)) / (z - zeta) on K_u as
// a matrix: analytically in the Clark basis, and by quadrature in any basis.

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mslab/clark.hpp"
#include "mslab/errors.hpp"
#include "mslab/inner.hpp"
#include "mslab/modelspace.hpp"
#include "mslab/quadrature.hpp"

namespace mslab {

enum class Provenance { LemmaAnalytic, Quadrature };

inline const char* to_string(Provenance p) {
  return p == Provenance::LemmaAnalytic ? "lemma-analytic" : "quadrature";
}

struct OperatorMatrix {
  Eigen::MatrixXcd entries;
  BasisKind basis = BasisKind::Clark;
  std::optional<std::size_t> ell;
  Provenance provenance = Provenance::LemmaAnalytic;
  double zeta_theta = 0.0;

  Eigen::Index size() const { return entries.rows(); }
};

/// Clark-basis matrix of Q: nonzeros only on the diagonal, row ell and
/// column ell. Stored as three vectors; the corner lives in diag(ell).
class ArrowheadOperator {
 public:
  ArrowheadOperator(Eigen::VectorXcd diag, Eigen::VectorXcd row, Eigen::VectorXcd col, Eigen::Index ell)
      : diag_(std::move(diag)), row_(std::move(row)), col_(std::move(col)), ell_(ell) {
    row_(ell_) = 0.0;
    col_(ell_) = 0.0;
  }

  Eigen::Index size() const { return diag_.size(); }
  Eigen::Index ell() const { return ell_; }
  const Eigen::VectorXcd& diagonal() const { return diag_; }
  const Eigen::VectorXcd& row() const { return row_; }
  const Eigen::VectorXcd& column() const { return col_; }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const {
    Eigen::VectorXcd y = diag_.cwiseProduct(x) + col_ * x(ell_);
    y(ell_) += row_.cwiseProduct(x).sum();
    return y;
  }

  Eigen::VectorXcd apply_adjoint(const Eigen::VectorXcd& x) const {
    Eigen::VectorXcd y = diag_.conjugate().cwiseProduct(x) + row_.conjugate() * x(ell_);
    y(ell_) += col_.dot(x);
    return y;
  }

  Eigen::MatrixXcd to_dense() const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(size(), size());
    m.diagonal() = diag_;
    m.row(ell_) += row_.transpose();
    m.col(ell_) += col_;
    return m;
  }

  /// Principal compression to the given indices (ell must be among them).
  ArrowheadOperator restrict_to(const std::vector<Eigen::Index>& keep) const {
    const auto n = static_cast<Eigen::Index>(keep.size());
    Eigen::VectorXcd d(n), r(n), c(n);
    Eigen::Index new_ell = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index k = keep[static_cast<std::size_t>(i)];
      d(i) = diag_(k);
      r(i) = row_(k);
      c(i) = col_(k);
      if (k == ell_) new_ell = i;
    }
    if (new_ell < 0) throw ArgumentError("compression must keep the distinguished index");
    return ArrowheadOperator(d, r, c, new_ell);
  }

 private:
  Eigen::VectorXcd diag_, row_, col_;
  Eigen::Index ell_;
};

/// Lemma entries in a Clark basis whose measure marks zeta as atom ell:
///   q_ii     = 1 / (zeta_i - zeta)                      (i != ell)
///   q_i,ell  = (||k_zeta|| / ||k_i||) / (zeta - zeta_i) (i != ell)
///   q_ell,j  = k_j'(zeta) / (||k_j|| ||k_zeta||)
///   q_ell,ell = k_zeta'(zeta) / ||k_zeta||^2
inline ArrowheadOperator q_arrowhead_clark(const OrthonormalBasis& basis) {
  if (basis.kind() != BasisKind::Clark) throw ArgumentError("lemma matrix needs a Clark basis");
  const auto ell_opt = basis.ell();
  if (!ell_opt) throw ArgumentError("base point is not an atom of the Clark measure");
  const auto ell = static_cast<Eigen::Index>(*ell_opt);
  const auto& kernels = basis.kernels();
  const Eigen::Index n = basis.size();
  const KernelFunction& kz = kernels[static_cast<std::size_t>(ell)];
  const cplx zeta = kz.base();
  const Jet uj = basis.inner().jet(zeta);

  Eigen::VectorXcd diag(n), row(n), col(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const KernelFunction& ki = kernels[static_cast<std::size_t>(i)];
    if (i == ell) {
      diag(i) = kz.derivative(zeta) / kz.norm_sq();
      row(i) = col(i) = 0.0;
      continue;
    }
    const cplx zi = ki.base();
    diag(i) = 1.0 / (zi - zeta);
    col(i) = (kz.norm() / ki.norm()) / (zeta - zi);
    row(i) = ki.derivative_with(zeta, uj.value, uj.first) / (ki.norm() * kz.norm());
  }
  return ArrowheadOperator(diag, row, col, ell);
}

/// Clark-basis matrix of Q for (u, zeta). The window (branch indices |k| <= K)
/// applies to the singular family; Blaschke products always use all atoms.
inline OperatorMatrix q_matrix_clark(const InnerFunction& u, const BoundaryPoint& zeta, long window = 0) {
  const OrthonormalBasis basis = OrthonormalBasis::clark(u, clark_measure(u, zeta, window));
  const ArrowheadOperator a = q_arrowhead_clark(basis);
  return {a.to_dense(), BasisKind::Clark, static_cast<std::size_t>(a.ell()), Provenance::LemmaAnalytic,
          zeta.theta()};
}

inline OperatorMatrix q_matrix_clark(const OrthonormalBasis& basis, const BoundaryPoint& zeta) {
  const ArrowheadOperator a = q_arrowhead_clark(basis);
  if (std::abs(basis.kernels()[static_cast<std::size_t>(a.ell())].base() - zeta.point()) > 1e-12)
    throw ArgumentError("Clark basis was built for a different base point");
  return {a.to_dense(), BasisKind::Clark, static_cast<std::size_t>(a.ell()), Provenance::LemmaAnalytic,
          zeta.theta()};
}

/// z -> (f(z) - f(zeta)) / (z - zeta), with f'(zeta) inside the removable radius.
template <class F, class DF>
auto difference_quotient(F f, DF df, cplx zeta) {
  return [f = std::move(f), df = std::move(df), zeta, fz = f(zeta)](cplx z) -> cplx {
    if (std::abs(z - zeta) < kRemovableRadius) return df(zeta);
    return (f(z) - fz) / (z - zeta);
  };
}

namespace detail {

inline void require_clear_nodes(const InnerFunction& u, const BoundaryPoint& zeta, const CircleQuadrature& q) {
  for (std::size_t m = 0; m < q.size(); ++m) {
    if (std::abs(q.node(m) - zeta.point()) < kRemovableRadius)
      throw QuadratureError("quadrature node collides with zeta; offset the rule");
  }
  q.require_clearance(u.spectrum().boundary_points);
}

/// (1/M) sum_m conj(B(m, i)) F(m, j)
inline Eigen::MatrixXcd project(const Eigen::MatrixXcd& basis_values, const Eigen::MatrixXcd& images,
                                const CircleQuadrature& q) {
  return (basis_values.adjoint() * images) * q.weight();
}

}  // namespace detail

/// Entries <Q b_j, b_i> from pointwise difference quotients on the nodes.
inline OperatorMatrix q_matrix_quadrature(const InnerFunction& u, const BoundaryPoint& zeta,
                                          const OrthonormalBasis& basis, const CircleQuadrature& q) {
  detail::require_clear_nodes(u, zeta, q);
  const cplx z0 = zeta.point();
  const Eigen::VectorXcd at_zeta = basis.values(z0);
  const auto m_nodes = static_cast<Eigen::Index>(q.size());
  Eigen::MatrixXcd values(m_nodes, basis.size()), images(m_nodes, basis.size());
  for (Eigen::Index m = 0; m < m_nodes; ++m) {
    const cplx z = q.node(static_cast<std::size_t>(m));
    const Eigen::VectorXcd v = basis.values(z);
    values.row(m) = v.transpose();
    images.row(m) = ((v - at_zeta) / (z - z0)).transpose();
  }
  return {detail::project(values, images, q), basis.kind(), basis.ell(), Provenance::Quadrature, zeta.theta()};
}

/// Matrix of the restricted backward shift X_u f = (f - f(0)) / z.
inline OperatorMatrix x_matrix(const InnerFunction& u, const OrthonormalBasis& basis, const CircleQuadrature& q) {
  if (!u.is_blaschke()) throw ArgumentError("x_matrix needs a finite Blaschke product");
  const Eigen::VectorXcd at_zero = basis.values(cplx{0.0, 0.0});
  const auto m_nodes = static_cast<Eigen::Index>(q.size());
  Eigen::MatrixXcd values(m_nodes, basis.size()), images(m_nodes, basis.size());
  for (Eigen::Index m = 0; m < m_nodes; ++m) {
    const cplx z = q.node(static_cast<std::size_t>(m));
    const Eigen::VectorXcd v = basis.values(z);
    values.row(m) = v.transpose();
    images.row(m) = ((v - at_zero) / z).transpose();
  }
  return {detail::project(values, images, q), basis.kind(), basis.ell(), Provenance::Quadrature,
          std::numeric_limits<double>::quiet_NaN()};
}

/// (I - zeta X)^{-1} X.
inline Eigen::MatrixXcd q_from_backward_shift(const Eigen::MatrixXcd& x, const BoundaryPoint& zeta) {
  const Eigen::Index n = x.rows();
  const Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(n, n) - zeta.point() * x;
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(a);
  if (!lu.isInvertible()) throw InternalError("I - zeta X is singular although zeta avoids sigma(u)");
  return lu.solve(x);
}

/// R = I + zeta Q, the inverse of I - zeta X_u.
inline OperatorMatrix resolvent_matrix(const OperatorMatrix& q, const BoundaryPoint& zeta) {
  OperatorMatrix r = q;
  r.entries = Eigen::MatrixXcd::Identity(q.size(), q.size()) + zeta.point() * q.entries;
  return r;
}

}  // namespace mslab
