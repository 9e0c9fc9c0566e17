#pragma once

// Singular values of dense and arrowhead matrices, and membership checks for
// the predicted spectrum conj(eta) / (1 - zeta conj(eta)).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "mslab/errors.hpp"
#include "mslab/inner.hpp"
#include "mslab/qop.hpp"
#include "mslab/rng.hpp"

namespace mslab {

namespace detail {

inline Eigen::VectorXd singular_values(const Eigen::MatrixXcd& a) {
  if (!a.allFinite()) throw NumericError("matrix has non-finite entries");
  if (a.rows() <= 32) return Eigen::JacobiSVD<Eigen::MatrixXcd>(a).singularValues();
  return Eigen::BDCSVD<Eigen::MatrixXcd>(a).singularValues();
}

}  // namespace detail

/// sigma_max by a full singular value decomposition.
inline double largest_singular_value(const Eigen::MatrixXcd& a, double /*tol*/ = 1e-13) {
  if (a.size() == 0) return 0.0;
  return detail::singular_values(a)(0);
}

inline double largest_singular_value(const OperatorMatrix& a, double tol = 1e-13) {
  return largest_singular_value(a.entries, tol);
}

inline double smallest_singular_value(const Eigen::MatrixXcd& a, double /*tol*/ = 1e-13) {
  if (a.size() == 0) return 0.0;
  const Eigen::VectorXd s = detail::singular_values(a);
  return s(s.size() - 1);
}

inline double smallest_singular_value(const OperatorMatrix& a, double tol = 1e-13) {
  return smallest_singular_value(a.entries, tol);
}

struct PowerIterationOptions {
  double tol = 1e-13;
  std::uint64_t seed = 0x5eed;
  int max_iterations = 200000;
};

/// sigma_max of an arrowhead operator by power iteration on A^H A. Stops once
/// the Rayleigh quotient settles to tol (relative) and the eigen-residual is
/// below sqrt(tol).
inline double largest_singular_value(const ArrowheadOperator& a, const PowerIterationOptions& opt = {}) {
  if (opt.tol < 1e-13) throw ArgumentError("tolerance below 1e-13");
  if (a.size() == 0) return 0.0;
  Lcg64 rng(opt.seed);
  Eigen::VectorXcd v = random_unit_vector(rng, a.size());
  double lambda = 0.0;
  double residual = 0.0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    const Eigen::VectorXcd w = a.apply_adjoint(a.apply(v));
    const double next = v.dot(w).real();
    residual = (w - next * v).norm();
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    const bool settled = std::abs(next - lambda) <= opt.tol * next;
    lambda = next;
    if (settled && residual <= std::sqrt(opt.tol) * lambda) return std::sqrt(lambda);
    v = w / wn;
  }
  throw NumericError("power iteration did not converge: lambda=" + std::to_string(lambda) +
                     " residual=" + std::to_string(residual));
}

struct SpectrumCheckReport {
  std::vector<cplx> predicted;      // lambda_k with multiplicity
  std::vector<double> residuals;    // sigma_min(lambda_k I - Q)
  double sigma_max = 0.0;
  double trace_gap = 0.0;
  double det_gap = 0.0;
  double residual_tol = 0.0;
  double trace_tol = 0.0;
  double det_tol = 0.0;
  bool essential_only = false;      // singular family: window study instead of exact check
  std::vector<long> windows;        // singular family
  bool pass = false;
};

/// eta -> conj(eta) / (1 - zeta conj(eta)).
inline cplx spectrum_map(cplx eta, const BoundaryPoint& zeta) {
  const cplx ec = std::conj(eta);
  return ec / (1.0 - zeta.point() * ec);
}

/// Residual test of sigma(Q) = {conj(eta)/(1 - zeta conj(eta)) : eta in sigma(u)}
/// for a finite Blaschke product.
inline SpectrumCheckReport verify_spectrum_map(const InnerFunction& u, const BoundaryPoint& zeta,
                                               const OperatorMatrix& q) {
  if (!u.is_blaschke()) throw ArgumentError("exact spectrum check needs a finite Blaschke product");
  if (static_cast<std::size_t>(q.size()) != u.degree()) throw ArgumentError("matrix size differs from degree");
  SpectrumCheckReport rep;
  const Eigen::Index n = q.size();
  rep.sigma_max = largest_singular_value(q);
  cplx sum = 0.0, prod = 1.0;
  for (const auto& eta : u.as_blaschke().zeros) {
    const cplx lam = spectrum_map(eta, zeta);
    rep.predicted.push_back(lam);
    rep.residuals.push_back(
        smallest_singular_value(Eigen::MatrixXcd(lam * Eigen::MatrixXcd::Identity(n, n) - q.entries)));
    sum += lam;
    prod *= lam;
  }
  rep.trace_gap = std::abs(q.entries.trace() - sum);
  rep.det_gap = std::abs(q.entries.determinant() - prod);
  rep.residual_tol = 1e-8 * (1.0 + rep.sigma_max);
  rep.trace_tol = 1e-8 * std::max(1.0, std::abs(sum));
  rep.det_tol = 1e-8 * std::max({1.0, std::abs(prod), std::pow(rep.sigma_max, static_cast<double>(n))});
  rep.pass = rep.trace_gap <= rep.trace_tol && rep.det_gap <= rep.det_tol &&
             std::all_of(rep.residuals.begin(), rep.residuals.end(),
                         [&](double r) { return r <= rep.residual_tol; });
  return rep;
}

/// Singular family: distance of the predicted essential point from the spectra
/// of the window compressions, sigma_min(lambda I - Q_K), per window.
inline SpectrumCheckReport verify_spectrum_map_windows(const InnerFunction& u, const BoundaryPoint& zeta,
                                                       const std::vector<long>& windows) {
  if (!u.is_singular()) throw ArgumentError("window study is for the singular family");
  SpectrumCheckReport rep;
  rep.essential_only = true;
  rep.windows = windows;
  const cplx lam = spectrum_map(std::polar(1.0, u.as_singular().xi_angle), zeta);
  rep.predicted.push_back(lam);
  for (long k : windows) {
    const OperatorMatrix q = q_matrix_clark(u, zeta, k);
    const Eigen::Index n = q.size();
    rep.residuals.push_back(
        smallest_singular_value(Eigen::MatrixXcd(lam * Eigen::MatrixXcd::Identity(n, n) - q.entries)));
    rep.sigma_max = largest_singular_value(q);
  }
  rep.pass = true;
  return rep;
}

}  // namespace mslab
