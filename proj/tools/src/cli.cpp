#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "levymass/errors.hpp"
#include "levymass/jump_sim.hpp"
#include "levymass/levy_core.hpp"
#include "levymass/loop_qft.hpp"
#include "levymass/propagation.hpp"
#include "levymass/spectrum.hpp"

#ifndef LEVYMASS_VERSION
#define LEVYMASS_VERSION "0.0.0"
#endif

namespace levymass::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr double kHbarC = 197.3269804;  // MeV fm
constexpr const char* kOutputDirEnv = "LEVYMASS_OUTPUT_DIR";

// Internal lengths are fm (or 1/m in natural units); in hep mode masses,
// momenta and energies are read and written in MeV.
struct Units {
  bool hep = false;
  double in(double v, int mass_dim) const {
    return hep ? v * std::pow(kHbarC, -mass_dim) : v;
  }
  double out(double v, int mass_dim) const {
    return hep ? v * std::pow(kHbarC, mass_dim) : v;
  }
  std::string describe() const {
    return hep ? "hep: masses, momenta and energies in MeV, lengths and times "
                 "in fm, hbar c = 197.3269804 MeV fm"
               : "natural: hbar = c = 1, all quantities in units of the "
                 "supplied masses";
  }
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
  /// Structured results; top level in JSON, inside meta in CSV.
  json fields = json::object();
  std::optional<std::uint64_t> seed;
};

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_cell(const json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "nan";
  return v.dump();
}

json complex_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

struct Subcommand {
  CLI::App* app = nullptr;
  std::string default_format;
  std::vector<std::string> conventions;
};

// Option state shared by the subcommands.
struct Options {
  std::string out;
  std::string format;
  std::string units = "natural";

  double m = 1.0;
  std::string kind = "relativistic";
  double beta = 1.0;
  double tau = 1.0;

  // exponent / density
  double umax = 10.0;
  int n = 64;
  int density_n = 100;
  int scan_n = 201;
  bool check_quadrature = false;
  double xmin = 0.01;
  double xmax = 10.0;
  int dim = 1;
  bool log_spacing = false;

  // grids
  std::size_t grid_n = 256;
  double length = 32.0;
  double evolve_length = 64.0;
  double dt = 1.0;
  double evolve_dt = 0.1;
  double x0 = 0.0;
  double sigma = 1.0;
  double k0 = 0.0;
  int steps = 10;
  int every = 0;
  bool rest_energy = false;

  // simulate
  double t = 1.0;
  std::size_t paths = 1000;
  std::uint64_t seed = 0;
  double epsilon = 1e-3;
  bool no_compensation = false;
  unsigned threads = 0;
  std::vector<double> cf_u{0.5, 1.0, 2.0, 4.0};
  bool dump_paths = false;

  // cutoff
  std::vector<double> roots;
  double lambda3 = 1.0;
  std::vector<double> lambda;

  // propagator / loop
  double p2min = -10.0;
  double p2max = 20.0;
  double pole_p2min = 0.0;
  double pole_p2max = 100.0;
  double ieps = 1e-6;
  std::string propagator_kind = "kg";
  std::string branch = "strict";
  int dmax = 4;
  double p2 = -1.0;
  double coupling = 1.0;
  double cutoff_radius = 50.0;
  double rel_tol = 1e-9;
  bool no_doubling = false;
  double a_tilde = 0.0;
  double b_tilde = 0.0;
  int panels = 1024;

  std::string from;
};

BranchPolicy parse_branch(const std::string& s) {
  return s == "complex" ? BranchPolicy::PrincipalComplex : BranchPolicy::Strict;
}

CutoffPolynomial make_cutoff(const Options& o, CLI::App* app, bool required) {
  const bool by_roots = app->count("--roots") > 0;
  const bool by_lambda = app->count("--lambda") > 0;
  if (by_roots && by_lambda) {
    throw DomainError("give either --roots or --lambda, not both");
  }
  if (by_roots) return cutoff_from_roots(o.roots[0], o.roots[1], o.lambda3);
  if (by_lambda) {
    return CutoffPolynomial::from_coefficients(o.lambda[0], o.lambda[1],
                                               o.lambda[2], o.lambda[3]);
  }
  if (required) throw DomainError("a cutoff is required: --roots or --lambda");
  return CutoffPolynomial::zero();
}

void add_cutoff_options(CLI::App* app, Options& o) {
  app->add_option("--roots", o.roots, "Roots x+ x- of g(x) = 1 besides x = 1")
      ->expected(2);
  app->add_option("--lambda3", o.lambda3, "Leading coefficient with --roots");
  app->add_option("--lambda", o.lambda, "Coefficients lambda0..lambda3")
      ->expected(4);
}

LevyExponent make_exponent(const Options& o, const Units& units) {
  if (o.kind == "gaussian") return LevyExponent::gaussian(o.beta, o.tau);
  return LevyExponent::relativistic(units.in(o.m, 1));
}

Table cmd_exponent(const Options& o, const Units& units) {
  if (o.n < 1) throw DomainError("--n must be at least 1");
  const auto exponent = make_exponent(o, units);
  Table table;
  table.columns = {"u", "eta_closed"};
  if (o.check_quadrature) {
    table.columns.insert(table.columns.end(),
                         {"eta_quad", "abs_diff", "quad_error"});
  }
  double max_diff = 0.0;
  for (int i = 1; i <= o.n; ++i) {
    const double u_user = o.umax * i / o.n;
    const double u = units.in(u_user, 1);
    const double closed = exponent.eta(u);
    std::vector<json> row{u_user, closed};
    if (o.check_quadrature) {
      const auto est = eta_from_measure(u, exponent);
      const double diff = std::abs(est.value - closed);
      max_diff = std::max(max_diff, diff);
      row.insert(row.end(), {est.value, diff, est.abs_error});
    }
    table.rows.push_back(std::move(row));
  }
  table.fields["exponent"] = exponent.describe();
  if (o.check_quadrature) table.fields["max_abs_diff"] = max_diff;
  return table;
}

Table cmd_density(const Options& o, const Units& units) {
  if (o.density_n < 2) throw DomainError("--n must be at least 2");
  if (!(o.xmin > 0.0) || !(o.xmax > o.xmin)) {
    throw DomainError("need 0 < --xmin < --xmax");
  }
  if (o.dim != 1 && o.dim != 3) throw DomainError("--dim must be 1 or 3");
  const double m = units.in(o.m, 1);
  Table table;
  table.columns = {o.dim == 1 ? "x" : "r", "W"};
  for (int i = 0; i < o.density_n; ++i) {
    const double s = static_cast<double>(i) / (o.density_n - 1);
    const double x = o.log_spacing ? o.xmin * std::pow(o.xmax / o.xmin, s)
                                   : o.xmin + s * (o.xmax - o.xmin);
    const double w = o.dim == 1 ? levy_density_1d(x, m) : levy_density_3d(x, m);
    table.rows.push_back({x, w});
  }
  return table;
}

Table cmd_evolve(const Options& o, const Units& units) {
  if (o.steps < 0) throw DomainError("--steps must be non-negative");
  const Grid1D grid(o.grid_n, o.evolve_length);
  const auto exponent = LevyExponent::relativistic(units.in(o.m, 1));
  EvolveOptions options;
  options.include_rest_energy = o.rest_energy;
  const auto multiplier = propagator_multiplier(exponent, o.evolve_dt, grid, options);
  WaveState state = gaussian_packet(grid, o.x0, o.sigma, units.in(o.k0, 1));
  const int every = o.every > 0 ? o.every : std::max(o.steps, 1);
  const double norm0 = state.norm();
  double max_drift = 0.0;

  Table table;
  table.columns = {"t", "x", "re", "im", "prob"};
  auto snapshot = [&] {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const Complex a = state.amplitudes[k];
      table.rows.push_back(
          {state.time, grid.x(k), a.real(), a.imag(), std::norm(a)});
    }
  };
  snapshot();
  for (int s = 1; s <= o.steps; ++s) {
    apply_multiplier(state, multiplier, o.evolve_dt);
    max_drift = std::max(max_drift, std::abs(state.norm() - norm0));
    if (s % every == 0) snapshot();
  }
  table.fields["norm_initial"] = norm0;
  table.fields["norm_final"] = state.norm();
  table.fields["max_norm_drift"] = max_drift;
  return table;
}

Table cmd_transition(const Options& o, const Units& units) {
  const Grid1D grid(o.grid_n, o.length);
  const auto exponent = make_exponent(o, units);
  const auto density = transition_density(exponent, o.dt, grid);
  Table table;
  table.columns = {"x", "density"};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    table.rows.push_back({grid.x(k), density.values[k]});
  }
  table.fields["exponent"] = exponent.describe();
  table.fields["normalization_correction"] = density.normalization_correction;
  table.fields["edge_mass"] = density.edge_mass;
  table.fields["min_value"] = density.min_value;
  table.fields["clipped"] = density.clipped;
  return table;
}

Table cmd_simulate(const Options& o, const Units& units) {
  const double m = units.in(o.m, 1);
  const auto exponent = LevyExponent::relativistic(m);
  JumpSimConfig config;
  config.epsilon = o.epsilon;
  config.n_paths = o.paths;
  config.horizon = o.t;
  config.seed = o.seed;
  config.gaussian_compensation = !o.no_compensation;
  config.threads = o.threads;
  const auto ensemble = sample_increments(exponent, config);
  const auto moments = sample_moments(ensemble);

  Table table;
  table.seed = o.seed;
  if (o.dump_paths) {
    table.columns = {"path", "increment"};
    for (std::size_t i = 0; i < ensemble.increments.size(); ++i) {
      table.rows.push_back({i, ensemble.increments[i]});
    }
  } else {
    std::vector<double> u;
    for (double v : o.cf_u) u.push_back(units.in(v, 1));
    const auto cf = empirical_cf(ensemble, u);
    table.columns = {"u",         "cf_re",      "cf_im", "stderr_re",
                     "stderr_im", "cf_theory", "z_re"};
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double theory = std::exp(o.t / exponent.tau() * exponent.eta(u[i]));
      const double z = cf.stderr_real[i] > 0.0
                           ? (cf.value[i].real() - theory) / cf.stderr_real[i]
                           : 0.0;
      table.rows.push_back({o.cf_u[i], cf.value[i].real(), cf.value[i].imag(),
                            cf.stderr_real[i], cf.stderr_imag[i], theory, z});
    }
  }
  table.fields["jump_rate"] = ensemble.jump_rate;
  table.fields["compensation_variance"] = ensemble.compensation_variance;
  table.fields["jumps_mean"] = ensemble.jump_counts.mean;
  table.fields["jumps_max"] = ensemble.jump_counts.max;
  table.fields["sample_mean"] = moments.mean;
  table.fields["sample_variance"] = moments.variance;
  table.fields["stderr_variance"] = moments.stderr_variance;
  // -eta''(0) = 1/m^2 per unit of t/tau.
  table.fields["variance_theory"] = o.t / exponent.tau() / (m * m);
  return table;
}

const char* status_name(RootStatus s) {
  switch (s) {
    case RootStatus::RealPositive:
      return "real_positive";
    case RootStatus::NonPositive:
      return "non_positive";
    case RootStatus::Complex:
      return "complex";
  }
  return "unknown";
}

Table cmd_spectrum(const Options& o, CLI::App* app, const Units& units) {
  const auto cutoff = make_cutoff(o, app, true);
  const auto roots = roots_from_cutoff(cutoff);
  const auto spectrum = mass_spectrum(units.in(o.m, 1), cutoff);

  Table table;
  table.columns = {"label", "root", "imag", "status", "multiplicity", "mass"};
  json root_list = json::array();
  for (const auto& r : roots.roots) {
    const double mass =
        r.accepted() ? units.out(units.in(o.m, 1) * std::sqrt(r.value), 1) : NAN;
    table.rows.push_back(
        {r.label, r.value, r.imag, status_name(r.status), r.multiplicity, mass});
    root_list.push_back({{"label", r.label},
                         {"value", r.value},
                         {"imag", r.imag},
                         {"status", status_name(r.status)},
                         {"multiplicity", r.multiplicity}});
  }
  json masses = json::array();
  for (const auto& level : spectrum.masses) masses.push_back(units.out(level.mass, 1));
  const auto c = cutoff.coefficients();
  table.fields["lambda"] = json::array({c[0], c[1], c[2], c[3]});
  table.fields["discriminant"] = roots.discriminant;
  table.fields["degenerate"] = roots.degenerate;
  table.fields["roots"] = root_list;
  table.fields["masses"] = masses;
  table.fields["complete"] = spectrum.complete();
  return table;
}

Table cmd_propagator(const Options& o, CLI::App* app, const Units& units) {
  if (o.scan_n < 2) throw DomainError("--n must be at least 2");
  const auto cutoff = make_cutoff(o, app, false);
  const double m = units.in(o.m, 1);
  const double eps = units.in(o.ieps, 2);
  const auto policy = parse_branch(o.branch);
  Table table;
  const bool dirac = o.propagator_kind == "dirac";
  table.columns = dirac ? std::vector<std::string>{"p2", "vector_re", "vector_im",
                                                   "scalar_re", "scalar_im",
                                                   "branch_ok"}
                        : std::vector<std::string>{"p2", "re", "im"};
  for (int i = 0; i < o.scan_n; ++i) {
    const double p2_user = o.p2min + (o.p2max - o.p2min) * i / (o.scan_n - 1);
    const double p2 = units.in(p2_user, 2);
    if (!dirac) {
      const Complex v = kg_propagator(p2, m, cutoff, eps);
      table.rows.push_back({p2_user, units.out(v.real(), -2),
                            units.out(v.imag(), -2)});
      continue;
    }
    try {
      const auto v = dirac_propagator(p2, m, cutoff, eps, policy);
      table.rows.push_back(
          {p2_user, units.out(v.vector_coeff.real(), -2),
           units.out(v.vector_coeff.imag(), -2), units.out(v.scalar_part.real(), -1),
           units.out(v.scalar_part.imag(), -1), true});
    } catch (const DomainError&) {
      if (policy != BranchPolicy::Strict) throw;
      table.rows.push_back({p2_user, NAN, NAN, NAN, NAN, false});
    }
  }
  return table;
}

Table cmd_powercount(const Options& o) {
  if (o.dmax < 0) throw DomainError("--dmax must be non-negative");
  Table table;
  table.columns = {"degree", "exponent_A", "exponent_B", "convergent", "failing"};
  for (int d = 0; d <= o.dmax; ++d) {
    const auto pc = superficial_degree(d);
    table.rows.push_back(
        {pc.degree_f, pc.exponent_A, pc.exponent_B, pc.convergent, pc.failing});
  }
  return table;
}

Table cmd_selfenergy(const Options& o, CLI::App* app, const Units& units) {
  const auto cutoff = make_cutoff(o, app, false);
  SelfEnergyScheme scheme;
  scheme.cutoff_radius = units.in(o.cutoff_radius, 1);
  scheme.rel_tol = o.rel_tol;
  scheme.branch = parse_branch(o.branch);
  scheme.doubling_check = !o.no_doubling;
  const auto se = self_energy_estimate(units.in(o.p2, 2), units.in(o.m, 1),
                                       cutoff, o.coupling, scheme);
  auto b_out = [&](Complex z) {
    return Complex(units.out(z.real(), 1), units.out(z.imag(), 1));
  };
  Table table;
  table.columns = {"quantity", "re", "im"};
  table.rows.push_back({"A_tilde", se.A_tilde.real(), se.A_tilde.imag()});
  table.rows.push_back({"B_tilde", b_out(se.B_tilde).real(), b_out(se.B_tilde).imag()});
  if (scheme.doubling_check) {
    table.rows.push_back(
        {"A_tilde_2Lambda", se.A_tilde_doubled.real(), se.A_tilde_doubled.imag()});
    table.rows.push_back({"B_tilde_2Lambda", b_out(se.B_tilde_doubled).real(),
                          b_out(se.B_tilde_doubled).imag()});
    table.fields["stability_A"] = se.stability_A;
    table.fields["stability_B"] = se.stability_B;
  }
  table.fields["A_tilde"] = complex_json(se.A_tilde);
  table.fields["B_tilde"] = complex_json(b_out(se.B_tilde));
  table.fields["normalization"] = se.normalization;
  return table;
}

Table cmd_poles(const Options& o, CLI::App* app, const Units& units) {
  const auto cutoff = make_cutoff(o, app, true);
  const double m = units.in(o.m, 1);
  RootScanOptions scan;
  scan.panels = o.panels;
  const auto poles = pole_search(m, cutoff, o.a_tilde, units.in(o.b_tilde, 1),
                                 units.in(o.pole_p2min, 2), units.in(o.pole_p2max, 2), scan);
  Table table;
  table.columns = {"p2", "x", "mass", "slope_sign", "branch_ok"};
  json accepted = json::array();
  for (const auto& p : poles) {
    const double mass = p.p2 > 0.0 ? units.out(std::sqrt(p.p2), 1) : NAN;
    table.rows.push_back({units.out(p.p2, 2), p.x, mass, p.slope_sign, p.branch_ok});
    if (p.branch_ok && p.p2 > 0.0) accepted.push_back(mass);
  }
  table.fields["masses"] = accepted;
  return table;
}

// Echo of every option value in definition order, sufficient to rebuild argv.
json echo_config(const CLI::App* app) {
  json config = json::object();
  for (const CLI::Option* opt : app->get_options()) {
    const std::string name = opt->get_name();
    if (name == "--help" || name == "--out" || name == "--from") continue;
    if (opt->get_expected_max() == 0) {
      config[name] = opt->count() > 0;
      continue;
    }
    std::vector<std::string> values;
    if (opt->count() > 0) {
      values = opt->results();
    } else if (!opt->get_default_str().empty() &&
               opt->get_default_str() != "[]" && opt->get_default_str() != "{}") {
      values = {opt->get_default_str()};
      if (opt->get_expected_max() > 1) {
        // Vector defaults are captured as "[a,b,...]".
        std::string s = values[0];
        values.clear();
        if (s.size() >= 2 && s.front() == '[') s = s.substr(1, s.size() - 2);
        std::stringstream ss(s);
        for (std::string item; std::getline(ss, item, ',');) values.push_back(item);
      }
    } else {
      continue;
    }
    if (opt->get_expected_max() > 1) {
      config[name] = values;
    } else {
      config[name] = values.front();
    }
  }
  return config;
}

std::string render(const Table& table, const json& meta, const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    json doc = json::object();
    doc["meta"] = meta;
    for (const auto& [k, v] : table.fields.items()) doc[k] = v;
    doc["columns"] = table.columns;
    doc["rows"] = table.rows;
    os << doc.dump(2) << '\n';
    return os.str();
  }
  json csv_meta = meta;
  if (!table.fields.empty()) csv_meta["results"] = table.fields;
  os << "# " << csv_meta.dump() << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    os << (i ? "," : "") << table.columns[i];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "") << csv_cell(row[i]);
    }
    os << '\n';
  }
  return os.str();
}

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string());
    f << content;
    f.flush();
    if (!f) {
      f.close();
      fs::remove(tmp);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

std::vector<std::string> argv_from_config(const json& meta) {
  std::vector<std::string> args{meta.at("subcommand").get<std::string>()};
  for (const auto& [name, value] : meta.at("config").items()) {
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(name);
    } else if (value.is_array()) {
      args.push_back(name);
      for (const auto& v : value) args.push_back(v.get<std::string>());
    } else {
      args.push_back(name);
      args.push_back(value.get<std::string>());
    }
  }
  return args;
}

json read_meta(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot read " + path.string());
  std::string first;
  std::getline(f, first);
  if (first.rfind("# ", 0) == 0) return json::parse(first.substr(2));
  std::stringstream rest;
  rest << first << '\n' << f.rdbuf();
  return json::parse(rest.str()).at("meta");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Levy-process relativistic kinematics and cubic-cutoff mass "
               "spectra",
               "levymass"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", LEVYMASS_VERSION);

  Options o;
  std::vector<Subcommand> subs;

  auto add = [&](const std::string& name, const std::string& description,
                 const std::string& default_format,
                 std::vector<std::string> conventions) -> Subcommand& {
    Subcommand s;
    s.app = app.add_subcommand(name, description);
    s.default_format = default_format;
    s.conventions = std::move(conventions);
    s.app->add_option("--out", o.out, "Output file");
    s.app->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->default_str(default_format);
    s.app->add_option("--units", o.units, "Unit system")
        ->check(CLI::IsMember({"natural", "hep"}));
    subs.push_back(std::move(s));
    return subs.back();
  };

  const std::string eta_note = "eta(u) = 1 - sqrt(1 + u^2/m^2), tau = 1/m";

  {
    auto& s = add("exponent", "Logarithmic characteristic eta(u)", "csv",
                  {eta_note, "u grid: u_i = umax i / n, i = 1..n"});
    s.app->add_option("--m", o.m, "Mass");
    s.app->add_option("--kind", o.kind)->check(CLI::IsMember({"relativistic", "gaussian"}));
    s.app->add_option("--beta", o.beta, "Gaussian scale");
    s.app->add_option("--tau", o.tau, "Gaussian time scale");
    s.app->add_option("--umax", o.umax);
    s.app->add_option("--n", o.n);
    s.app->add_flag("--check-quadrature", o.check_quadrature,
                    "Compare with the Levy-Khintchin integral");
  }
  {
    auto& s = add("density", "Levy density table", "csv",
                  {"1D: W(x) = K1(m|x|)/(pi|x|); 3D: (m/(2 pi^2 r^2)) K2(m r)"});
    s.app->add_option("--m", o.m);
    s.app->add_option("--xmin", o.xmin);
    s.app->add_option("--xmax", o.xmax);
    s.app->add_option("--n", o.density_n);
    s.app->add_option("--dim", o.dim);
    s.app->add_flag("--log", o.log_spacing, "Log-spaced abscissae");
  }
  {
    auto& s = add("evolve", "Free evolution of a Gaussian packet", "csv",
                  {eta_note, "psi(t + dt) = IFFT[exp(i dt eta(u)/tau) FFT psi]",
                   "rest energy phase excluded unless --rest-energy"});
    s.app->add_option("--m", o.m);
    s.app->add_option("--grid", o.grid_n, "Grid points (power of two)");
    s.app->add_option("--length", o.evolve_length);
    s.app->add_option("--x0", o.x0);
    s.app->add_option("--sigma", o.sigma);
    s.app->add_option("--k0", o.k0);
    s.app->add_option("--dt", o.evolve_dt);
    s.app->add_option("--steps", o.steps);
    s.app->add_option("--every", o.every, "Snapshot interval in steps");
    s.app->add_flag("--rest-energy", o.rest_energy);
  }
  {
    auto& s = add("transition", "Transition density by Fourier inversion", "csv",
                  {"p(x, dt) = (1/2pi) int exp(-iux + (dt/tau) eta(u)) du"});
    s.app->add_option("--m", o.m);
    s.app->add_option("--kind", o.kind)->check(CLI::IsMember({"relativistic", "gaussian"}));
    s.app->add_option("--beta", o.beta);
    s.app->add_option("--tau", o.tau);
    s.app->add_option("--dt", o.dt);
    s.app->add_option("--grid", o.grid_n);
    s.app->add_option("--length", o.length);
  }
  {
    auto& s = add("simulate", "Compound Poisson ensemble and its characteristic function",
                  "csv",
                  {eta_note, "jumps below epsilon replaced by a Gaussian",
                   "per-path mt19937_64 seeded by splitmix64(seed ^ splitmix64(path))"});
    s.app->add_option("--m", o.m);
    s.app->add_option("--t", o.t, "Horizon");
    s.app->add_option("--paths", o.paths);
    s.app->add_option("--seed", o.seed);
    s.app->add_option("--epsilon", o.epsilon);
    s.app->add_flag("--no-compensation", o.no_compensation);
    s.app->add_option("--threads", o.threads, "Worker threads (0 = all)");
    s.app->add_option("--cf-u", o.cf_u, "Momenta for the characteristic function");
    s.app->add_flag("--dump-paths", o.dump_paths, "Write increments instead");
  }
  {
    auto& s = add("spectrum", "Cutoff coefficients, roots of g(x) = 1 and masses",
                  "json",
                  {"f(x) = lambda0 + lambda1 x + lambda2 x^2 + lambda3 x^3, f(1) = 0",
                   "g(x) = x - f(x); masses m sqrt(x) for real positive roots"});
    s.app->add_option("--m", o.m);
    add_cutoff_options(s.app, o);
  }
  {
    auto& s = add("propagator", "Modified Klein-Gordon or Dirac propagator scan",
                  "csv",
                  {"metric (+,-,-,-); kg: 1/(p^2 - m^2 (1 + f) + i eps)",
                   "dirac: (p-slash + M)/(p^2 - M^2 + i eps), M = m sqrt(1 + f)"});
    s.app->add_option("--m", o.m);
    add_cutoff_options(s.app, o);
    s.app->add_option("--p2min", o.p2min);
    s.app->add_option("--p2max", o.p2max);
    s.app->add_option("--n", o.scan_n);
    s.app->add_option("--eps", o.ieps, "i epsilon");
    s.app->add_option("--kind", o.propagator_kind)->check(CLI::IsMember({"kg", "dirac"}));
    s.app->add_option("--branch", o.branch)->check(CLI::IsMember({"strict", "complex"}));
  }
  {
    auto& s = add("powercount", "Superficial degree of divergence by cutoff degree",
                  "json", {"convergent iff both radial exponents < -1"});
    s.app->add_option("--dmax", o.dmax);
  }
  {
    auto& s = add("selfenergy", "Wick-rotated one-loop self-energy", "json",
                  {kSelfEnergyNormalization});
    s.app->add_option("--m", o.m);
    add_cutoff_options(s.app, o);
    s.app->add_option("--p2", o.p2, "Spacelike p^2 < 0");
    s.app->add_option("--coupling", o.coupling);
    s.app->add_option("--cutoff-radius", o.cutoff_radius, "Euclidean Lambda");
    s.app->add_option("--rel-tol", o.rel_tol);
    s.app->add_option("--branch", o.branch)->check(CLI::IsMember({"strict", "complex"}));
    s.app->add_flag("--no-doubling", o.no_doubling);
  }
  {
    auto& s = add("poles", "Poles of the resummed propagator", "json",
                  {"(1 - A)^2 p^2 = (m sqrt(1 + f(p^2/m^2)) + B)^2 with constant A, B"});
    s.app->add_option("--m", o.m);
    add_cutoff_options(s.app, o);
    s.app->add_option("--A", o.a_tilde);
    s.app->add_option("--B", o.b_tilde);
    s.app->add_option("--p2min", o.pole_p2min);
    s.app->add_option("--p2max", o.pole_p2max);
    s.app->add_option("--panels", o.panels);
  }
  CLI::App* replay = app.add_subcommand("replay", "Re-run from the metadata of an output file");
  replay->add_option("--from", o.from, "Earlier output")->required();
  replay->add_option("--out", o.out, "Output file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << LEVYMASS_VERSION << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto chosen = app.get_subcommands();
    err << (chosen.empty() ? app.help() : chosen.front()->help());
    return kUsage;
  }

  if (replay->parsed()) {
    try {
      const json meta = read_meta(o.from);
      auto replay_args = argv_from_config(meta);
      if (!o.out.empty()) {
        replay_args.push_back("--out");
        replay_args.push_back(o.out);
      }
      return run(replay_args, out, err);
    } catch (const std::exception& e) {
      err << "error: cannot replay " << o.from << ": " << e.what() << '\n';
      return kValidation;
    }
  }

  Subcommand* chosen = nullptr;
  for (auto& s : subs) {
    if (s.app->parsed()) chosen = &s;
  }
  if (chosen == nullptr) return kUsage;
  CLI::App* sub = chosen->app;
  const std::string name = sub->get_name();
  const std::string format = o.format.empty() ? chosen->default_format : o.format;
  const Units units{o.units == "hep"};

  try {
    Table table;
    if (name == "exponent") table = cmd_exponent(o, units);
    else if (name == "density") table = cmd_density(o, units);
    else if (name == "evolve") table = cmd_evolve(o, units);
    else if (name == "transition") table = cmd_transition(o, units);
    else if (name == "simulate") table = cmd_simulate(o, units);
    else if (name == "spectrum") table = cmd_spectrum(o, sub, units);
    else if (name == "propagator") table = cmd_propagator(o, sub, units);
    else if (name == "powercount") table = cmd_powercount(o);
    else if (name == "selfenergy") table = cmd_selfenergy(o, sub, units);
    else if (name == "poles") table = cmd_poles(o, sub, units);

    json meta = json::object();
    meta["tool"] = "levymass";
    meta["version"] = LEVYMASS_VERSION;
    meta["subcommand"] = name;
    meta["seed"] = table.seed ? json(*table.seed) : json(nullptr);
    meta["config"] = echo_config(sub);
    meta["units"] = units.describe();
    meta["conventions"] = chosen->conventions;
    const std::string content = render(table, meta, format);

    if (!o.out.empty()) {
      write_atomic(o.out, content);
    } else if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
      write_atomic(fs::path(dir) / (name + "." + format), content);
    } else {
      out << content;
    }
    return kOk;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << " (partial estimate "
        << format_double(e.partial_estimate()) << ", error estimate "
        << format_double(e.error_estimate()) << ")\n";
    return kNumerical;
  } catch (const ResolutionError& e) {
    err << "error: " << e.what() << " (diagnostic "
        << format_double(e.diagnostic()) << ")\n";
    return kNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace levymass::cli
