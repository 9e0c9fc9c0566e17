#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mslab/mslab.hpp"

namespace {

using namespace mslab;

constexpr int kExitFail = 1;
constexpr int kExitTooClose = 2;
constexpr int kExitUsage = 64;
constexpr int kExitSoftware = 70;

/// Reads a flat JSON object whose keys are long flag names.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    json j = json::object();
    for (const CLI::Option* opt : app->get_options()) {
      if (opt->get_lnames().empty() || opt->get_configurable() == false) continue;
      const std::string& name = opt->get_lnames().front();
      if (opt->count() > 0) {
        const auto& res = opt->results();
        j[name] = res.size() == 1 ? json(res.front()) : json(res);
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    return to_json_string(j);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    try {
      j = json::parse(input);
    } catch (const json::exception& e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> items;
    for (auto it = j.begin(); it != j.end(); ++it) {
      CLI::ConfigItem item;
      item.name = it.key();
      const auto scalar = [](const json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_float()) return format_double(v.get<double>());
        return v.dump();
      };
      if (it->is_array()) {
        for (const auto& v : *it) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(*it));
      }
      items.push_back(std::move(item));
    }
    return items;
  }
};

struct Options {
  std::string inner;
  std::optional<double> zeta_rad;
  std::optional<double> zeta_deg;
  std::optional<double> alpha_rad;
  std::size_t quad_nodes = 4096;
  long window = 0;
  std::vector<long> schedule;
  std::size_t points = 16;
  std::size_t radial_nodes = 64;
  std::size_t angular_nodes = 4096;
  double stabilization_tol = 1e-6;
  std::string provenance = "lemma";
  std::string basis = "clark";
  std::string format = "csv";
  std::string output;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;
  std::string suite = "all";
};

class TooClose : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Context {
  const Options& opt;
  InnerFunction u;
  std::optional<BoundaryPoint> zeta;
  std::ostream& out;

  NormOptions norm_options() const {
    NormOptions n;
    if (!opt.schedule.empty()) n.schedule = opt.schedule;
    n.stabilization_tol = opt.stabilization_tol;
    return n;
  }

  const BoundaryPoint& require_zeta() const {
    if (!zeta) throw ArgumentError("this command needs --zeta-rad or --zeta-deg");
    return *zeta;
  }

  bool json_format() const { return opt.format == "json"; }

  void emit(const json& report) const {
    if (json_format()) {
      write_json(out, report);
      out << '\n';
    } else {
      csv_from_rows(report.at("rows")).write(out);
    }
  }
};

std::optional<BoundaryPoint> resolve_zeta(const Options& opt, const InnerFunction& u) {
  std::optional<double> theta;
  if (opt.zeta_rad) theta = *opt.zeta_rad;
  if (opt.zeta_deg) theta = *opt.zeta_deg * std::numbers::pi / 180.0;
  if (!theta) return std::nullopt;
  if (!std::isfinite(*theta)) throw ArgumentError("zeta angle must be finite");
  const BoundaryPoint zeta(*theta);
  const double d = u.dist_to_boundary_spectrum(zeta);
  if (d < 1e-6) {
    throw TooClose("zeta is " + format_double(d) +
                   " from the boundary spectrum of u; points closer than 1e-06 are refused");
  }
  return zeta;
}

int run_spectrum(const Context& c) {
  const BoundaryPoint& zeta = c.require_zeta();
  json rows = json::array();
  json margins;
  bool pass = true;
  if (c.u.is_blaschke()) {
    const OperatorMatrix q = q_matrix_clark(c.u, zeta);
    const SpectrumCheckReport rep = verify_spectrum_map(c.u, zeta, q);
    const auto& zeros = c.u.as_blaschke().zeros;
    for (std::size_t k = 0; k < rep.predicted.size(); ++k) {
      rows.push_back({{"eta_re", zeros[k].real()},
                      {"eta_im", zeros[k].imag()},
                      {"lambda_re", rep.predicted[k].real()},
                      {"lambda_im", rep.predicted[k].imag()},
                      {"residual", rep.residuals[k]}});
    }
    margins = {{"sigma_max", rep.sigma_max}, {"residual_tol", rep.residual_tol}, {"trace_gap", rep.trace_gap},
               {"trace_tol", rep.trace_tol},  {"det_gap", rep.det_gap},           {"det_tol", rep.det_tol}};
    pass = rep.pass;
  } else {
    const std::vector<long> windows = c.opt.schedule.empty() ? doubling_schedule(4, 128) : c.opt.schedule;
    const SpectrumCheckReport rep = verify_spectrum_map_windows(c.u, zeta, windows);
    for (std::size_t k = 0; k < windows.size(); ++k)
      rows.push_back({{"window", windows[k]}, {"residual", rep.residuals[k]}});
    margins = {{"lambda_re", rep.predicted.front().real()}, {"lambda_im", rep.predicted.front().imag()}};
  }
  c.emit(suite_json("spectrum", c.u, zeta.theta(), json::object(), rows, margins, std::nullopt, pass));
  return pass ? 0 : kExitFail;
}

int run_clark(const Context& c) {
  ClarkMeasure mu;
  if (c.opt.alpha_rad) {
    const cplx alpha = std::polar(1.0, *c.opt.alpha_rad);
    mu = c.u.is_blaschke() ? clark_atoms_blaschke(c.u, alpha) : clark_atoms_singular(c.u, alpha, c.opt.window);
  } else {
    mu = clark_measure(c.u, c.require_zeta(), c.opt.window);
  }
  const HerglotzCheck h = herglotz_mass_check(c.u, mu.alpha, mu);
  const bool pass = c.u.is_singular() || std::abs(h.gap) < 1e-10 * h.expected;
  if (c.json_format()) {
    json rows = json::array();
    for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
      const auto& a = mu.atoms[i];
      rows.push_back({{"index", i},
                      {"theta", a.point.theta()},
                      {"mass", a.mass},
                      {"u_prime_abs", c.u.boundary_derivatives(a.point).abs_first}});
    }
    json params{{"alpha_re", mu.alpha.real()},
                {"alpha_im", mu.alpha.imag()},
                {"ell", mu.ell ? json(*mu.ell) : json(nullptr)},
                {"window", mu.window ? json(*mu.window) : json(nullptr)}};
    json margins{{"partial_sum", h.partial_sum}, {"expected", h.expected}, {"gap", h.gap}};
    if (mu.size() >= (mu.window ? 3u : 2u)) {
      const NeighborRatios nr = neighbor_ratios(mu);
      margins["neighbor_ratio_min"] = nr.min_ratio;
      margins["neighbor_ratio_max"] = nr.max_ratio;
    }
    c.emit(suite_json("clark", c.u, c.zeta ? std::optional(c.zeta->theta()) : std::nullopt, params, rows, margins,
                      std::nullopt, pass));
  } else {
    CsvTable t{{"index", "theta", "mass", "u_prime_abs"}, {}};
    for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
      const auto& a = mu.atoms[i];
      t.rows.push_back({std::to_string(i), format_double(a.point.theta()), format_double(a.mass),
                        format_double(c.u.boundary_derivatives(a.point).abs_first)});
    }
    t.write(c.out);
  }
  return pass ? 0 : kExitFail;
}

int run_qmatrix(const Context& c) {
  const BoundaryPoint& zeta = c.require_zeta();
  OperatorMatrix q;
  if (c.opt.provenance == "lemma") {
    if (c.opt.basis != "clark") throw ArgumentError("the lemma-analytic matrix exists only in the Clark basis");
    q = q_matrix_clark(c.u, zeta, c.opt.window);
  } else {
    if (!c.u.is_blaschke()) throw ArgumentError("quadrature matrices need a finite Blaschke product");
    const OrthonormalBasis basis = c.opt.basis == "clark" ? OrthonormalBasis::clark(c.u, clark_measure(c.u, zeta))
                                                           : OrthonormalBasis::takenaka_malmquist(c.u);
    q = q_matrix_quadrature(c.u, zeta, basis, CircleQuadrature::avoiding(zeta, c.opt.quad_nodes));
  }
  json sidecar{{"n", q.size()},
               {"ell", q.ell ? json(*q.ell) : json(nullptr)},
               {"basis", to_string(q.basis)},
               {"provenance", to_string(q.provenance)},
               {"zeta_theta", q.zeta_theta}};
  CsvTable t{{"i", "j", "re", "im"}, {}};
  json entries = json::array();
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    for (Eigen::Index j = 0; j < q.size(); ++j) {
      const cplx v = q.entries(i, j);
      if (v == cplx{0.0, 0.0}) continue;
      t.rows.push_back({std::to_string(i), std::to_string(j), format_double(v.real()), format_double(v.imag())});
      entries.push_back({{"i", i}, {"j", j}, {"re", v.real()}, {"im", v.imag()}});
    }
  }
  if (c.json_format()) {
    json full = sidecar;
    full["entries"] = entries;
    write_json(c.out, full);
    c.out << '\n';
  } else {
    t.write(c.out);
    if (!c.opt.output.empty()) {
      std::ofstream side(c.opt.output + ".json");
      if (!side) throw std::runtime_error("cannot write sidecar " + c.opt.output + ".json");
      write_json(side, sidecar);
      side << '\n';
    }
  }
  return 0;
}

int run_norm(const Context& c) {
  const BoundaryPoint& zeta = c.require_zeta();
  const NormOptions nopt = c.norm_options();
  const BoundReport r = bound_report(c.u, zeta, nopt);
  if (c.json_format()) {
    c.emit(to_json(std::vector<BoundReport>{r}, c.u, nopt));
  } else {
    c.out << format_double(r.norm.value) << '\n';
    const json j = r.to_json();
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() == "norm_q") continue;
      c.out << it.key() << '=' << (it->is_number_float() ? format_double(it->get<double>()) : it->is_string() ? it->get<std::string>() : it->dump()) << '\n';
    }
  }
  return r.pass ? 0 : kExitFail;
}

int run_scan(const Context& c) {
  const NormOptions nopt = c.norm_options();
  const auto thetas = theta_grid(c.u, c.opt.points);
  const auto reports = run_lower_bound_suite(c.u, thetas, nopt, c.opt.threads);
  const json j = to_json(reports, c.u, nopt);
  json out = j;
  out["suite"] = "scan";
  c.emit(out);
  return j.at("pass").get<bool>() ? 0 : kExitFail;
}

int run_truncation(const Context& c) {
  const NormOptions nopt = c.norm_options();
  const TruncationStudy st = truncation_study(c.u, c.require_zeta(), nopt.schedule, nopt);
  c.emit(to_json(st, c.u));
  return st.pass ? 0 : kExitFail;
}

/// A fixed element of K_u for the Dirichlet suite: seeded unit coefficients in
/// the Clark basis.
Eigen::VectorXcd dirichlet_coefficients(const OrthonormalBasis& basis, std::uint64_t seed) {
  Lcg64 rng(seed);
  return random_unit_vector(rng, basis.size());
}

json run_suite(const Context& c, const std::string& suite) {
  const BoundaryPoint& zeta = c.require_zeta();
  const NormOptions nopt = c.norm_options();
  const auto skipped = [&](const std::string& why) {
    return suite_json(suite, c.u, zeta.theta(), json{{"skipped", why}}, json::array(), json::object(),
                      std::nullopt, true);
  };
  if (suite == "lower-bound") {
    return to_json(run_lower_bound_suite(c.u, {zeta.theta()}, nopt, c.opt.threads), c.u, nopt);
  }
  if (suite == "upper-bound") {
    json j = to_json(run_upper_bound_scan(c.u, theta_grid(c.u, c.opt.points), nopt, c.opt.threads), c.u, nopt);
    return j;
  }
  if (suite == "one-component") {
    return to_json(run_one_component_ratio(c.u, theta_grid(c.u, std::max<std::size_t>(c.opt.points, 100))), c.u);
  }
  if (suite == "derivative-functional") {
    const long window = c.opt.window > 0 ? c.opt.window : 256;
    const OrthonormalBasis basis = OrthonormalBasis::clark(c.u, clark_measure(c.u, zeta, window));
    return to_json(run_derivative_functional(c.u, zeta, basis, c.opt.quad_nodes), c.u, zeta.theta());
  }
  if (suite == "resolvent") {
    if (!c.u.is_blaschke()) return skipped("resolvent suite needs a finite Blaschke product");
    return to_json(run_resolvent_suite(c.u, zeta, c.opt.seed), c.u, zeta.theta());
  }
  if (suite == "dirichlet") {
    if (!c.u.is_blaschke()) return skipped("Dirichlet suite needs a complete basis");
    const OrthonormalBasis basis = OrthonormalBasis::clark(c.u, clark_measure(c.u, zeta));
    json j = to_json(run_dirichlet_suite(c.u, zeta, basis, dirichlet_coefficients(basis, c.opt.seed),
                                         c.opt.quad_nodes, DiskGrid{c.opt.radial_nodes, c.opt.angular_nodes}),
                     c.u, zeta.theta());
    j["seed"] = c.opt.seed;
    return j;
  }
  if (suite == "truncation") {
    if (!c.u.is_singular()) return skipped("truncation study is for the singular family");
    return to_json(truncation_study(c.u, zeta, nopt.schedule, nopt), c.u);
  }
  throw ArgumentError("unknown suite '" + suite + "'");
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"lower-bound", "upper-bound", "one-component", "derivative-functional",
                                              "resolvent",   "dirichlet",   "truncation"};
  return names;
}

int run_verify(const Context& c) {
  std::vector<std::string> suites;
  if (c.opt.suite == "all")
    suites = suite_names();
  else
    suites.push_back(c.opt.suite);
  json reports = json::array();
  bool pass = true;
  for (const auto& s : suites) {
    json r = run_suite(c, s);
    pass = pass && r.at("pass").get<bool>();
    reports.push_back(std::move(r));
  }
  if (c.json_format()) {
    write_json(c.out, reports);
    c.out << '\n';
  } else {
    CsvTable t{{"suite", "pass"}, {}};
    for (const auto& r : reports)
      t.rows.push_back({r.at("suite").get<std::string>(), r.at("pass").get<bool>() ? "true" : "false"});
    t.write(c.out);
  }
  return pass ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for difference quotients on model spaces", "mslab"};
  app.require_subcommand(1);
  app.fallthrough();
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file mirroring the flags; flags given on the command line win");

  Options opt;
  app.add_option("--inner", opt.inner, "Inner function, e.g. blaschke:0.5,0.3-0.2i or singular:xi=0,s=1")
      ->required();
  auto* zr = app.add_option("--zeta-rad", opt.zeta_rad, "Boundary point angle in radians");
  app.add_option("--zeta-deg", opt.zeta_deg, "Boundary point angle in degrees")->excludes(zr);
  app.add_option("--alpha-rad", opt.alpha_rad, "Clark parameter angle (default: arg u(zeta))");
  app.add_option("--quad-nodes", opt.quad_nodes, "Circle quadrature nodes (power of two in [256, 65536])")
      ->check([](const std::string& s) -> std::string {
        std::size_t m = 0;
        try {
          m = std::stoul(s);
        } catch (...) {
          return "not an integer";
        }
        if (m < 256 || m > 65536 || (m & (m - 1)) != 0) return "must be a power of two in [256, 65536]";
        return {};
      });
  app.add_option("--window", opt.window, "Branch window K for the singular family")->check(CLI::NonNegativeNumber);
  app.add_option("--schedule", opt.schedule, "Strictly increasing window schedule, e.g. 32,64,128")
      ->delimiter(',');
  app.add_option("--points", opt.points, "Number of grid angles for scans")->check(CLI::PositiveNumber);
  app.add_option("--radial-nodes", opt.radial_nodes, "Radial Gauss-Legendre nodes of the disk grid")
      ->check(CLI::PositiveNumber);
  app.add_option("--angular-nodes", opt.angular_nodes, "Angular nodes of the disk grid")->check(CLI::PositiveNumber);
  app.add_option("--stabilization-tol", opt.stabilization_tol, "Successive-difference threshold")
      ->check(CLI::PositiveNumber);
  app.add_option("--provenance", opt.provenance, "qmatrix route")->check(CLI::IsMember({"lemma", "quadrature"}));
  app.add_option("--basis", opt.basis, "qmatrix basis")->check(CLI::IsMember({"clark", "tm"}));
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output", opt.output, "Output file (default: standard output)");
  app.add_option("--seed", opt.seed, "Seed of the vector generator");
  app.add_option("--threads", opt.threads, "Worker threads for scans")
      ->envname("MSLAB_THREADS")
      ->check(CLI::PositiveNumber);

  auto* spectrum = app.add_subcommand("spectrum", "Residual check of the spectrum map");
  auto* clark = app.add_subcommand("clark", "Clark atom table");
  auto* qmatrix = app.add_subcommand("qmatrix", "Dump the matrix of Q");
  auto* norm = app.add_subcommand("norm", "Operator norm of Q with both lower bounds");
  auto* verify = app.add_subcommand("verify", "Run verification suites");
  verify->add_option("suite", opt.suite, "Suite name or 'all'")
      ->check(CLI::IsMember([] {
        std::vector<std::string> v = suite_names();
        v.push_back("all");
        return v;
      }()));
  auto* scan = app.add_subcommand("scan", "Bound reports over an angle grid");
  auto* truncation = app.add_subcommand("truncation", "Window schedule study for the singular family");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    const InnerFunction u = parse_inner(opt.inner);
    const std::optional<BoundaryPoint> zeta = resolve_zeta(opt, u);

    std::ofstream file;
    if (!opt.output.empty()) {
      file.open(opt.output, std::ios::binary);
      if (!file) throw std::runtime_error("cannot open output file " + opt.output);
    }
    std::ostream& out = opt.output.empty() ? std::cout : file;
    const Context c{opt, u, zeta, out};

    if (spectrum->parsed()) return run_spectrum(c);
    if (clark->parsed()) return run_clark(c);
    if (qmatrix->parsed()) return run_qmatrix(c);
    if (norm->parsed()) return run_norm(c);
    if (verify->parsed()) return run_verify(c);
    if (scan->parsed()) return run_scan(c);
    if (truncation->parsed()) return run_truncation(c);
  } catch (const TooClose& e) {
    std::cerr << "mslab: " << e.what() << '\n';
    return kExitTooClose;
  } catch (const ArgumentError& e) {
    std::cerr << "mslab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "mslab: " << e.what() << '\n';
    return kExitSoftware;
  }
  return kExitUsage;
}
