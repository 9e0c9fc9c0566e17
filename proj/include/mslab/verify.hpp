#pragma once

// Experiment drivers: lower/upper norm bounds, the Aleksandrov ratio, the
// derivative functional, resolvent and local Dirichlet identities, and
// truncation studies for the singular family. Each driver returns a plain
// result struct and can render it as a JSON suite report.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mslab/clark.hpp"
#include "mslab/errors.hpp"
#include "mslab/inner.hpp"
#include "mslab/modelspace.hpp"
#include "mslab/parallel.hpp"
#include "mslab/qop.hpp"
#include "mslab/quadrature.hpp"
#include "mslab/report.hpp"
#include "mslab/rng.hpp"
#include "mslab/spectral.hpp"

namespace mslab {

inline constexpr double kMarginTol = 1e-9;
inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// K in {first, 2 first, ..., last}.
inline std::vector<long> doubling_schedule(long first = 32, long last = 4096) {
  std::vector<long> out;
  for (long k = first; k <= last; k *= 2) out.push_back(k);
  return out;
}

struct NormOptions {
  std::vector<long> schedule = doubling_schedule();
  double stabilization_tol = 1e-6;
  PowerIterationOptions power{};
};

/// n equispaced angles offset by half a step from the boundary spectrum (or
/// from 0 when it is empty).
inline std::vector<double> theta_grid(const InnerFunction& u, std::size_t n) {
  const auto sp = u.spectrum().boundary_points;
  const double origin = sp.empty() ? 0.0 : sp.front().theta();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = normalize_angle(origin + kTwoPi * (static_cast<double>(i) + 0.5) / static_cast<double>(n));
  return out;
}

// ---------------------------------------------------------------------------
// Truncation study (singular family)

struct TruncationRow {
  long window;
  std::size_t dimension;
  double norm;
  double diff;  // NaN for the first row
};

struct TruncationStudy {
  double zeta_theta = 0.0;
  double stabilization_tol = 1e-6;
  std::vector<TruncationRow> rows;
  bool nondecreasing = true;
  bool stabilized = false;
  std::optional<long> stabilized_at;
  double stabilized_value = 0.0;  // last norm when not stabilized
  double extrapolated = 0.0;      // 2 q_last - q_prev, the limit under a 1/K tail; reported only
  double dist_bound = 0.0;        // 1 / |zeta - xi|
  double second_deriv_bound = 0.0;
  double scaled_norm = 0.0;       // stabilized_value * |zeta - xi|^2
  bool lower_bounds_hold = false;
  bool scaled_in_range = false;
  bool pass = false;
};

inline TruncationStudy truncation_study(const InnerFunction& u, const BoundaryPoint& zeta, std::vector<long> schedule,
                                        const NormOptions& opt = {}) {
  if (!u.is_singular()) throw ArgumentError("truncation study needs the singular family");
  if (schedule.empty()) throw ArgumentError("empty window schedule");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (!(schedule[i] > schedule[i - 1])) throw ArgumentError("window schedule must be strictly increasing");
  if (schedule.front() < 0) throw ArgumentError("windows must be nonnegative");

  const ClarkMeasure mu = clark_measure(u, zeta, schedule.back());
  const OrthonormalBasis basis = OrthonormalBasis::clark(u, mu);
  const ArrowheadOperator full = q_arrowhead_clark(basis);

  TruncationStudy st;
  st.zeta_theta = zeta.theta();
  st.stabilization_tol = opt.stabilization_tol;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (long k : schedule) {
    std::vector<Eigen::Index> keep;
    for (std::size_t i = 0; i < mu.atoms.size(); ++i)
      if (std::labs(mu.atoms[i].branch) <= k) keep.push_back(static_cast<Eigen::Index>(i));
    const ArrowheadOperator a = full.restrict_to(keep);
    const double nrm = largest_singular_value(a, opt.power);
    const double diff = std::isnan(prev) ? prev : nrm - prev;
    if (!std::isnan(diff)) {
      if (diff < -1e-12) st.nondecreasing = false;
      if (!st.stabilized && std::abs(diff) < opt.stabilization_tol) {
        st.stabilized = true;
        st.stabilized_at = k;
      }
    }
    st.rows.push_back({k, keep.size(), nrm, diff});
    prev = nrm;
  }
  st.stabilized_value = st.rows.back().norm;
  st.extrapolated = st.rows.size() > 1 ? 2.0 * st.rows.back().norm - st.rows[st.rows.size() - 2].norm
                                       : st.stabilized_value;

  const BoundaryDerivatives d = u.boundary_derivatives(zeta);
  const double dist = u.dist_to_boundary_spectrum(zeta);
  st.dist_bound = 1.0 / dist;
  st.second_deriv_bound = std::abs(d.second) / (2.0 * d.abs_first);
  st.scaled_norm = st.stabilized_value * dist * dist;
  st.lower_bounds_hold = st.stabilized_value >= (1.0 - kMarginTol) * std::max(st.dist_bound, st.second_deriv_bound);
  st.scaled_in_range = st.scaled_norm >= 1.0 - 1e-6 && st.scaled_norm <= 20.0;
  st.pass = st.nondecreasing && st.stabilized && st.lower_bounds_hold && st.scaled_in_range;
  return st;
}

// ---------------------------------------------------------------------------
// Operator norm and bound reports

struct NormEstimate {
  double value = 0.0;
  bool exact = false;       // finite Blaschke: full matrix
  bool stabilized = false;  // singular: truncation criterion met
  std::optional<long> window;
};

inline NormEstimate operator_norm(const InnerFunction& u, const BoundaryPoint& zeta, const NormOptions& opt = {}) {
  if (u.is_blaschke()) return {largest_singular_value(q_matrix_clark(u, zeta)), true, true, std::nullopt};
  const TruncationStudy st = truncation_study(u, zeta, opt.schedule, opt);
  return {st.stabilized_value, false, st.stabilized, st.rows.back().window};
}

struct BoundReport {
  double zeta_theta = 0.0;
  NormEstimate norm;
  double dist = 0.0;                // +inf for an empty boundary spectrum
  double dist_bound = 0.0;          // 1 / dist
  double second_deriv_bound = 0.0;  // |u''| / (2 |u'|)
  double abs_first = 0.0;
  double abs_second = 0.0;
  double upper_ratio = 0.0;         // ||Q|| / |u'|
  double aleksandrov_ratio = 0.0;   // |u''| / |u'|^2
  double margin_dist = 0.0;
  double margin_second = 0.0;
  std::string sharper;
  bool pass = false;

  json to_json() const {
    json j;
    j["zeta_theta"] = zeta_theta;
    j["norm_q"] = norm.value;
    j["exact"] = norm.exact;
    j["stabilized"] = norm.stabilized;
    j["window"] = norm.window ? json(*norm.window) : json(nullptr);
    j["dist"] = json_number(dist);
    j["dist_bound"] = dist_bound;
    j["second_deriv_bound"] = second_deriv_bound;
    j["abs_u_prime"] = abs_first;
    j["abs_u_second"] = abs_second;
    j["upper_ratio"] = upper_ratio;
    j["aleksandrov_ratio"] = aleksandrov_ratio;
    j["margin_dist"] = margin_dist;
    j["margin_second"] = margin_second;
    j["sharper"] = sharper;
    j["pass"] = pass;
    return j;
  }
};

inline BoundReport bound_report(const InnerFunction& u, const BoundaryPoint& zeta, const NormOptions& opt = {}) {
  BoundReport r;
  r.zeta_theta = zeta.theta();
  r.norm = operator_norm(u, zeta, opt);
  const BoundaryDerivatives d = u.boundary_derivatives(zeta);
  r.abs_first = d.abs_first;
  r.abs_second = std::abs(d.second);
  r.dist = u.dist_to_boundary_spectrum(zeta);
  r.dist_bound = 1.0 / r.dist;
  r.second_deriv_bound = r.abs_second / (2.0 * r.abs_first);
  r.upper_ratio = r.norm.value / r.abs_first;
  r.aleksandrov_ratio = r.abs_second / (r.abs_first * r.abs_first);
  r.margin_dist = r.norm.value - r.dist_bound;
  r.margin_second = r.norm.value - r.second_deriv_bound;
  const double gap = r.second_deriv_bound - r.dist_bound;
  r.sharper = std::abs(gap) <= 1e-12 * std::max(1.0, r.dist_bound) ? "equal"
              : gap > 0.0                                          ? "second-derivative"
                                                                   : "distance";
  r.pass = r.margin_dist >= -kMarginTol && r.margin_second >= -kMarginTol;
  return r;
}

/// Both lower bounds at each grid angle.
inline std::vector<BoundReport> run_lower_bound_suite(const InnerFunction& u, const std::vector<double>& thetas,
                                                      const NormOptions& opt = {}, unsigned threads = 1) {
  std::vector<BoundReport> out(thetas.size());
  parallel_for(thetas.size(), threads, [&](std::size_t i) { out[i] = bound_report(u, BoundaryPoint(thetas[i]), opt); });
  return out;
}

struct UpperScanRow {
  double zeta_theta;
  double norm;
  double abs_first;
  double rho;
};

struct UpperScan {
  std::vector<UpperScanRow> rows;
  double max_rho = 0.0;  // empirical C_u
  double min_rho = std::numeric_limits<double>::infinity();
  bool pass = false;
};

/// rho = ||Q|| / |u'(zeta)| over the grid. For the singular family rho >= 1/2
/// is asserted, since the second-derivative bound equals |u'|/2 there.
inline UpperScan run_upper_bound_scan(const InnerFunction& u, const std::vector<double>& thetas,
                                      const NormOptions& opt = {}, unsigned threads = 1) {
  UpperScan scan;
  scan.rows.resize(thetas.size());
  parallel_for(thetas.size(), threads, [&](std::size_t i) {
    const BoundaryPoint zeta(thetas[i]);
    const NormEstimate n = operator_norm(u, zeta, opt);
    const double up = u.boundary_derivatives(zeta).abs_first;
    scan.rows[i] = {zeta.theta(), n.value, up, n.value / up};
  });
  scan.pass = true;
  for (const auto& r : scan.rows) {
    scan.max_rho = std::max(scan.max_rho, r.rho);
    scan.min_rho = std::min(scan.min_rho, r.rho);
    if (u.is_singular() && r.rho < 0.5 - kMarginTol) scan.pass = false;
  }
  return scan;
}

struct RatioScan {
  std::vector<std::pair<double, double>> rows;  // (theta, |u''| / |u'|^2)
  double max_ratio = 0.0;                       // empirical Aleksandrov constant
  bool pass = false;
};

inline RatioScan run_one_component_ratio(const InnerFunction& u, const std::vector<double>& thetas) {
  RatioScan scan;
  scan.pass = true;
  for (double t : thetas) {
    const BoundaryPoint zeta(t);
    const BoundaryDerivatives d = u.boundary_derivatives(zeta);
    const double ratio = std::abs(d.second) / (d.abs_first * d.abs_first);
    scan.rows.emplace_back(zeta.theta(), ratio);
    if (!std::isfinite(ratio)) scan.pass = false;
    scan.max_ratio = std::max(scan.max_ratio, ratio);
  }
  return scan;
}

// ---------------------------------------------------------------------------
// Derivative functional f -> f'(zeta)

struct DerivativeFunctionalReport {
  double route_a = 0.0;  // sqrt(sum |b_i'(zeta)|^2)
  double route_b = 0.0;  // ||Q k_zeta||
  double rel_gap = 0.0;
  bool truncated = false;
  std::size_t dimension = 0;
  bool pass = false;
};

/// Norm of the derivative functional two ways. Complete bases: route b is the
/// H^2 norm of the pointwise difference quotient of k_zeta by circle
/// quadrature. Truncated Clark windows: route b is ||k_zeta|| times the
/// column ell of the compressed lemma matrix.
inline DerivativeFunctionalReport run_derivative_functional(const InnerFunction& u, const BoundaryPoint& zeta,
                                                            const OrthonormalBasis& basis,
                                                            std::size_t quad_nodes = 4096) {
  DerivativeFunctionalReport rep;
  rep.truncated = basis.is_truncated();
  rep.dimension = static_cast<std::size_t>(basis.size());
  rep.route_a = basis.derivatives(zeta.point()).norm();
  const KernelFunction k = KernelFunction::boundary(u, zeta);
  if (rep.truncated) {
    const ArrowheadOperator a = q_arrowhead_clark(basis);
    Eigen::VectorXcd col = a.column();
    col(a.ell()) = a.diagonal()(a.ell());
    rep.route_b = k.norm() * col.norm();
  } else {
    const CircleQuadrature q = CircleQuadrature::avoiding(zeta, quad_nodes);
    const cplx z0 = zeta.point();
    auto dq = difference_quotient([&k](cplx z) { return k(z); }, [&k](cplx z) { return k.derivative(z); }, z0);
    rep.route_b = std::sqrt(std::max(0.0, inner_product(dq, dq, q).real()));
  }
  const double scale = std::max(rep.route_a, rep.route_b);
  rep.rel_gap = scale > 0.0 ? std::abs(rep.route_a - rep.route_b) / scale : 0.0;
  rep.pass = std::abs(rep.route_a - rep.route_b) <= 1e-8 * scale + 1e-14;
  return rep;
}

// ---------------------------------------------------------------------------
// Resolvent of the compressed shift

struct ResolventRow {
  std::size_t index;
  double lhs;  // ||R f||^2
  double rhs;  // ||Q f||^2 + |f(zeta)|^2
  double rel_gap;
};

struct ResolventReport {
  double norm_q = 0.0;
  double abs_first = 0.0;
  double norm_r_sq = 0.0;
  double lower = 0.0;  // (||Q||^2 + |u'|) / 2
  double upper = 0.0;  // ||Q||^2 + |u'|
  double margin_lower = 0.0;
  double margin_upper = 0.0;
  std::vector<ResolventRow> rows;
  std::uint64_t seed = kDefaultSeed;
  bool pass = false;
};

/// Sandwich (||Q||^2 + |u'|)/2 <= ||R||^2 <= ||Q||^2 + |u'| and the per-vector
/// identity ||R f||^2 = ||Q f||^2 + |f(zeta)|^2, R = I + zeta Q.
inline ResolventReport run_resolvent_suite(const InnerFunction& u, const BoundaryPoint& zeta,
                                           std::uint64_t seed = kDefaultSeed, std::size_t vectors = 20) {
  if (!u.is_blaschke()) throw ArgumentError("resolvent suite needs a finite Blaschke product");
  const OrthonormalBasis basis = OrthonormalBasis::clark(u, clark_measure(u, zeta));
  const OperatorMatrix q = q_matrix_clark(basis, zeta);
  const OperatorMatrix r = resolvent_matrix(q, zeta);
  ResolventReport rep;
  rep.seed = seed;
  rep.norm_q = largest_singular_value(q);
  rep.abs_first = u.boundary_derivatives(zeta).abs_first;
  const double nr = largest_singular_value(r);
  rep.norm_r_sq = nr * nr;
  rep.upper = rep.norm_q * rep.norm_q + rep.abs_first;
  rep.lower = 0.5 * rep.upper;
  rep.margin_lower = rep.norm_r_sq - rep.lower;
  rep.margin_upper = rep.upper - rep.norm_r_sq;
  bool ok = rep.margin_lower >= -kMarginTol && rep.margin_upper >= -kMarginTol;

  const Eigen::VectorXcd at_zeta = basis.values(zeta.point());
  Lcg64 rng(seed);
  for (std::size_t i = 0; i < vectors; ++i) {
    const Eigen::VectorXcd f = random_unit_vector(rng, q.size());
    const double lhs = (r.entries * f).squaredNorm();
    const cplx fz = at_zeta.cwiseProduct(f).sum();
    const double rhs = (q.entries * f).squaredNorm() + std::norm(fz);
    const double gap = std::abs(lhs - rhs) / std::max(lhs, rhs);
    rep.rows.push_back({i, lhs, rhs, gap});
    if (!(gap < 1e-9)) ok = false;
  }
  rep.pass = ok;
  return rep;
}

// ---------------------------------------------------------------------------
// Local Dirichlet integral

struct DiskGrid {
  std::size_t radial = 64;
  std::size_t angular = 4096;
};

struct DirichletReport {
  double circle_value = 0.0;        // integral of |(f - f(zeta))/(lambda - zeta)|^2 dm
  double norm_qf_sq = 0.0;          // ||Q f||^2 from the operator matrix
  double circle_rel_gap = 0.0;
  double area_value = 0.0;          // (1/pi) int |f'|^2 (1-|z|^2)/|z-zeta|^2 dA
  double area_value_refined = 0.0;  // both grid sizes doubled
  double area_gap = 0.0;            // relative to circle_value
  double area_gap_refined = 0.0;
  double refinement_ratio = 0.0;    // area_gap / area_gap_refined
  bool area_converged = false;      // gap <= 1e-3 and refinement at least halves it
  double embedding_norm_sq = 0.0;   // 1 + ||Q||^2
  std::size_t circle_nodes = 0;
  DiskGrid grid;
  bool pass = false;
};

/// Area form of the local Dirichlet integral on a Gauss-Legendre (radius) x
/// uniform (angle) grid; angular nodes sit half a step away from arg zeta.
template <class DF>
double local_dirichlet_area(DF&& fprime, const BoundaryPoint& zeta, const DiskGrid& grid) {
  const GaussLegendre gl(grid.radial);
  const double dphi = kTwoPi / static_cast<double>(grid.angular);
  const cplx z0 = zeta.point();
  std::vector<double> ring(grid.angular), radial(grid.radial);
  for (std::size_t i = 0; i < grid.radial; ++i) {
    const double r = gl.nodes[i];
    for (std::size_t m = 0; m < grid.angular; ++m) {
      const cplx z = std::polar(r, zeta.theta() + dphi * (static_cast<double>(m) + 0.5));
      ring[m] = std::norm(fprime(z)) * (1.0 - r * r) / std::norm(z - z0);
    }
    radial[i] = gl.weights[i] * r * pairwise_sum(std::span<const double>(ring)) * dphi;
  }
  return pairwise_sum(std::span<const double>(radial)) / std::numbers::pi;
}

/// f is given by its coefficients in a complete basis of K_u.
inline DirichletReport run_dirichlet_suite(const InnerFunction& u, const BoundaryPoint& zeta,
                                           const OrthonormalBasis& basis, const Eigen::VectorXcd& coeffs,
                                           std::size_t circle_nodes = 4096, DiskGrid grid = {}) {
  if (basis.is_truncated()) throw ArgumentError("Dirichlet suite needs a complete basis of K_u");
  if (coeffs.size() != basis.size()) throw ArgumentError("coefficient vector does not match the basis");
  DirichletReport rep;
  rep.circle_nodes = circle_nodes;
  rep.grid = grid;

  const cplx z0 = zeta.point();
  auto f = [&](cplx z) { return basis.synthesize(coeffs, z); };
  auto fp = [&](cplx z) { return basis.synthesize_derivative(coeffs, z); };
  const CircleQuadrature q = CircleQuadrature::avoiding(zeta, circle_nodes);
  auto dq = difference_quotient(f, fp, z0);
  rep.circle_value = inner_product(dq, dq, q).real();

  const OperatorMatrix qm = basis.kind() == BasisKind::Clark ? q_matrix_clark(basis, zeta)
                                                               : q_matrix_quadrature(u, zeta, basis, q);
  rep.norm_qf_sq = (qm.entries * coeffs).squaredNorm();
  const double scale = std::max(rep.circle_value, rep.norm_qf_sq);
  rep.circle_rel_gap = scale > 1e-300 ? std::abs(rep.circle_value - rep.norm_qf_sq) / scale : 0.0;
  const double nq = largest_singular_value(qm);
  rep.embedding_norm_sq = 1.0 + nq * nq;

  rep.area_value = local_dirichlet_area(fp, zeta, grid);
  rep.area_value_refined = local_dirichlet_area(fp, zeta, DiskGrid{2 * grid.radial, 2 * grid.angular});
  if (scale > 1e-300) {
    rep.area_gap = std::abs(rep.area_value - rep.circle_value) / rep.circle_value;
    rep.area_gap_refined = std::abs(rep.area_value_refined - rep.circle_value) / rep.circle_value;
    rep.refinement_ratio = rep.area_gap_refined > 0.0 ? rep.area_gap / rep.area_gap_refined
                                                      : std::numeric_limits<double>::infinity();
    rep.area_converged = rep.area_gap <= 1e-3 && rep.refinement_ratio >= 2.0;
  } else {
    rep.area_gap = std::abs(rep.area_value);
    rep.area_gap_refined = std::abs(rep.area_value_refined);
    rep.area_converged = rep.area_gap <= 1e-12;
  }
  rep.pass = scale > 1e-300 ? rep.circle_rel_gap < 1e-10 : rep.circle_value < 1e-24;
  return rep;
}

/// ||iota||^2 for the embedding K_u -> D_zeta.
inline double run_embedding_norm(double norm_q) { return 1.0 + norm_q * norm_q; }

// ---------------------------------------------------------------------------
// JSON suite reports

inline json suite_json(const std::string& suite, const InnerFunction& u, std::optional<double> zeta_theta,
                       json params, json rows, json margins, std::optional<std::uint64_t> seed, bool pass) {
  json j;
  j["suite"] = suite;
  j["inner_spec"] = u.to_spec();
  j["zeta_theta"] = zeta_theta ? json(*zeta_theta) : json(nullptr);
  j["params"] = params.is_null() ? json::object() : std::move(params);
  j["rows"] = rows.is_null() ? json::array() : std::move(rows);
  j["margins"] = margins.is_null() ? json::object() : std::move(margins);
  j["seed"] = seed ? json(*seed) : json(nullptr);
  j["pass"] = pass;
  return j;
}

inline json schedule_json(const NormOptions& opt) { return json(opt.schedule); }

inline json to_json(const TruncationStudy& st, const InnerFunction& u) {
  json rows = json::array();
  for (const auto& r : st.rows)
    rows.push_back({{"window", r.window}, {"dimension", r.dimension}, {"norm_q", r.norm}, {"diff", json_number(r.diff)}});
  json margins{{"stabilized", st.stabilized},
               {"stabilized_at", st.stabilized_at ? json(*st.stabilized_at) : json(nullptr)},
               {"nondecreasing", st.nondecreasing},
               {"stabilized_value", st.stabilized_value},
               {"extrapolated", st.extrapolated},
               {"dist_bound", st.dist_bound},
               {"second_deriv_bound", st.second_deriv_bound},
               {"margin_lower", st.stabilized_value - std::max(st.dist_bound, st.second_deriv_bound)},
               {"scaled_norm", st.scaled_norm},
               {"scaled_in_range", st.scaled_in_range}};
  return suite_json("truncation", u, st.zeta_theta, json{{"stabilization_tol", st.stabilization_tol}}, rows, margins, std::nullopt,
                    st.pass);
}

inline json to_json(const std::vector<BoundReport>& reports, const InnerFunction& u, const NormOptions& opt) {
  json rows = json::array();
  double worst_dist = std::numeric_limits<double>::infinity(), worst_second = worst_dist;
  bool pass = true;
  for (const auto& r : reports) {
    rows.push_back(r.to_json());
    worst_dist = std::min(worst_dist, r.margin_dist);
    worst_second = std::min(worst_second, r.margin_second);
    pass = pass && r.pass;
  }
  const std::optional<double> theta = reports.size() == 1 ? std::optional(reports.front().zeta_theta) : std::nullopt;
  return suite_json("lower-bound", u, theta, json{{"schedule", schedule_json(opt)}}, rows,
                    json{{"min_margin_dist", json_number(worst_dist)}, {"min_margin_second", json_number(worst_second)}},
                    std::nullopt, pass);
}

inline json to_json(const UpperScan& scan, const InnerFunction& u, const NormOptions& opt) {
  json rows = json::array();
  for (const auto& r : scan.rows)
    rows.push_back({{"zeta_theta", r.zeta_theta}, {"norm_q", r.norm}, {"abs_u_prime", r.abs_first}, {"rho", r.rho}});
  return suite_json("upper-bound", u, std::nullopt, json{{"schedule", schedule_json(opt)}}, rows,
                    json{{"empirical_c_u", scan.max_rho}, {"min_rho", json_number(scan.min_rho)}}, std::nullopt,
                    scan.pass);
}

inline json to_json(const RatioScan& scan, const InnerFunction& u) {
  json rows = json::array();
  for (const auto& [t, r] : scan.rows) rows.push_back({{"zeta_theta", t}, {"ratio", r}});
  return suite_json("one-component", u, std::nullopt, json::object(), rows,
                    json{{"empirical_constant", scan.max_ratio}}, std::nullopt, scan.pass);
}

inline json to_json(const DerivativeFunctionalReport& rep, const InnerFunction& u, double theta) {
  json rows = json::array({{{"dimension", rep.dimension},
                            {"route_a", rep.route_a},
                            {"route_b", rep.route_b},
                            {"rel_gap", rep.rel_gap},
                            {"truncated", rep.truncated}}});
  return suite_json("derivative-functional", u, theta, json::object(), rows, json{{"rel_gap", rep.rel_gap}},
                    std::nullopt, rep.pass);
}

inline json to_json(const ResolventReport& rep, const InnerFunction& u, double theta) {
  json rows = json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"index", r.index}, {"norm_rf_sq", r.lhs}, {"norm_qf_sq_plus_f_zeta_sq", r.rhs}, {"rel_gap", r.rel_gap}});
  return suite_json("resolvent", u, theta,
                    json{{"vectors", rep.rows.size()}, {"norm_q", rep.norm_q}, {"abs_u_prime", rep.abs_first},
                         {"norm_r_sq", rep.norm_r_sq}},
                    rows,
                    json{{"lower", rep.lower}, {"upper", rep.upper}, {"margin_lower", rep.margin_lower},
                         {"margin_upper", rep.margin_upper}},
                    rep.seed, rep.pass);
}

inline json to_json(const DirichletReport& rep, const InnerFunction& u, double theta) {
  json rows = json::array({{{"circle_value", rep.circle_value},
                            {"norm_qf_sq", rep.norm_qf_sq},
                            {"area_value", rep.area_value},
                            {"area_value_refined", rep.area_value_refined},
                            {"embedding_norm_sq", rep.embedding_norm_sq}}});
  return suite_json("dirichlet", u, theta,
                    json{{"circle_nodes", rep.circle_nodes}, {"radial_nodes", rep.grid.radial},
                         {"angular_nodes", rep.grid.angular}},
                    rows,
                    json{{"circle_rel_gap", rep.circle_rel_gap}, {"area_gap", rep.area_gap},
                         {"area_gap_refined", rep.area_gap_refined}, {"refinement_ratio", json_number(rep.refinement_ratio)},
                         {"area_converged", rep.area_converged}},
                    std::nullopt, rep.pass);
}

}  // namespace mslab
