#include "cloakspec/cli.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "cloakspec/bessel.hpp"
#include "cloakspec/cloak.hpp"
#include "cloakspec/dtn.hpp"
#include "cloakspec/errors.hpp"
#include "cloakspec/report.hpp"
#include "cloakspec/spectra.hpp"
#include "cloakspec/xform.hpp"

namespace cloakspec {
namespace {

struct Options {
  std::string shape = "disk";
  std::optional<double> radius;
  std::optional<double> a, b;
  std::optional<double> h;
  std::optional<double> interface;
  double omega = 1.0;
  int modes = 8;
  std::string eps;
  std::string target_g = "iso:1";
  std::optional<double> target_q;
  std::optional<double> q;
  std::optional<int> count;
  double lambda_max = 40.0;
  double flatness_tol = 1e-2;
  std::string map = "identity";
  std::optional<unsigned long long> seed;
  bool dump_dtn = false;
  std::string out;
  std::string format;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) parts.push_back(part);
  return parts;
}

double parse_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used != 0 && used == s.size() && std::isfinite(v), "bad number '" + s + "' in " + what);
  return v;
}

MaterialField target_medium(const std::string& spec, double q) {
  const auto f = split(spec, ':');
  require(q > 0.0, "target q must be positive");
  if (f.size() == 2 && f[0] == "iso") {
    const double c = parse_number(f[1], "--target-g");
    require(c > 0.0, "--target-g iso scale must be positive");
    return isotropic_medium(c, q);
  }
  if (f.size() == 3 && f[0] == "diag") {
    const double gx = parse_number(f[1], "--target-g");
    const double gy = parse_number(f[2], "--target-g");
    require(gx > 0.0 && gy > 0.0, "--target-g diagonal entries must be positive");
    return diagonal_medium(gx, gy, q);
  }
  throw ParameterError("--target-g must be iso:<c> or diag:<a>:<b>");
}

// Isotropic scale c of an iso:<c> spec, or nothing.
std::optional<double> iso_scale(const std::string& spec) {
  const auto f = split(spec, ':');
  if (f.size() == 2 && f[0] == "iso") return parse_number(f[1], "--target-g");
  return std::nullopt;
}

std::string resolved_map_name(const Options& o) {
  auto f = split(o.map, ':');
  if (!f.empty() && f[0] == "bump" && f.size() == 2) {
    require(o.seed.has_value(), "--map bump:<t> needs --seed");
    return o.map + ":" + std::to_string(*o.seed);
  }
  return o.map;
}

bool is_identity(const Options& o) { return resolved_map_name(o) == "identity"; }

// Bump maps are conjugated so their support is the inscribed disk of radius r.
DiffeoSpec map_on_domain(const Options& o, double r) {
  const std::string name = resolved_map_name(o);
  DiffeoSpec f = diffeo_from_name(name);
  if (name.rfind("bump:", 0) == 0) f = dilate_conjugate(f, kBumpSupport / r);
  return f;
}

std::string output_format(const Options& o, const std::string& fallback) {
  const std::string f = o.format.empty() ? fallback : o.format;
  require(f == "json" || f == "csv", "--format must be json or csv");
  return f;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

Mesh domain_mesh(const Options& o, double default_h, ordered_json& config, double& inscribed) {
  const double h = o.h.value_or(default_h);
  config["shape"] = o.shape;
  config["h"] = h;
  if (o.shape == "disk") {
    const double r = o.radius.value_or(1.0);
    config["radius"] = r;
    inscribed = r;
    return make_disk(r, h);
  }
  if (o.shape == "ellipse") {
    require(o.a && o.b, "ellipse needs --a and --b");
    config["a"] = *o.a;
    config["b"] = *o.b;
    inscribed = std::min(*o.a, *o.b);
    return make_ellipse(*o.a, *o.b, h);
  }
  throw ParameterError("--shape must be disk or ellipse for this command");
}

std::string cmd_mesh(const Options& o) {
  require(output_format(o, "json") == "json", "mesh output is json only");
  require(o.h.has_value(), "mesh needs --h");
  Mesh m;
  if (o.shape == "disk") {
    m = make_disk(o.radius.value_or(1.0), *o.h, o.interface);
  } else if (o.shape == "annulus") {
    require(o.interface.has_value(), "annulus needs --interface (inner radius)");
    m = make_annulus(*o.interface, o.radius.value_or(1.0), *o.h);
  } else if (o.shape == "ellipse") {
    require(o.a && o.b, "ellipse needs --a and --b");
    m = make_ellipse(*o.a, *o.b, *o.h);
  } else {
    throw ParameterError("--shape must be disk, annulus or ellipse");
  }
  validate(m);
  return mesh_to_json(m) + "\n";
}

std::string cmd_pushforward(const Options& o) {
  const std::string fmt = output_format(o, "json");
  const double r = o.radius.value_or(2.0);
  require(r > 0.0, "--radius must be positive");
  const DiffeoSpec f = diffeo_from_name(resolved_map_name(o));
  const MaterialField m = push_forward(f, target_medium(o.target_g, o.target_q.value_or(1.0)));
  constexpr int kRadii = 16;
  constexpr int kAngles = 16;
  ordered_json samples = ordered_json::array();
  std::ostringstream csv;
  csv << "x,y,g11,g12,g22,q,eig_min,eig_max\n";
  for (int i = 1; i <= kRadii; ++i) {
    for (int j = 0; j < kAngles; ++j) {
      const double rr = r * i / kRadii;
      const double t = 2.0 * std::numbers::pi * j / kAngles;
      const Vec2 y(rr * std::cos(t), rr * std::sin(t));
      if (!f.in_range(y)) continue;
      const Mat2 g = m.g(y);
      const double q = m.q(y);
      const double tr = g.trace();
      const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - g.determinant()));
      const double lo = 0.5 * tr - disc;
      const double hi = 0.5 * tr + disc;
      samples.push_back({{"x", y.x()}, {"y", y.y()},
                         {"g", {{g(0, 0), g(0, 1)}, {g(1, 0), g(1, 1)}}},
                         {"q", q}, {"eig_min", lo}, {"eig_max", hi}});
      csv << format_double(y.x()) << ',' << format_double(y.y()) << ',' << format_double(g(0, 0))
          << ',' << format_double(g(0, 1)) << ',' << format_double(g(1, 1)) << ','
          << format_double(q) << ',' << format_double(lo) << ',' << format_double(hi) << '\n';
    }
  }
  if (fmt == "csv") return csv.str();
  ordered_json j;
  j["map"] = resolved_map_name(o);
  j["target_g"] = o.target_g;
  j["target_q"] = o.target_q.value_or(1.0);
  j["samples"] = std::move(samples);
  return dump(j);
}

std::string cmd_dtn(const Options& o) {
  const std::string fmt = output_format(o, "json");
  const double r = o.radius.value_or(2.0);
  const double h = o.h.value_or(0.05);
  require(o.omega > 0.0, "--omega must be positive");
  require(o.modes >= 0, "--modes must be non-negative");
  const MaterialField base = target_medium(o.target_g, o.target_q.value_or(1.0));
  const DiffeoSpec f = diffeo_from_name(resolved_map_name(o));
  const Mesh mesh = make_disk(r, h);
  const DtNMatrix d = dtn_matrix(mesh, {push_forward(f, base)}, o.omega, o.modes);
  if (fmt == "csv") {
    std::ostringstream os;
    for (Eigen::Index i = 0; i < d.entries.rows(); ++i) {
      for (Eigen::Index k = 0; k < d.entries.cols(); ++k) {
        os << (k ? "," : "") << format_double(d.entries(i, k));
      }
      os << '\n';
    }
    return os.str();
  }
  ordered_json j = dtn_json(d);
  j["h"] = h;
  j["map"] = resolved_map_name(o);
  j["dofs"] = mesh.num_nodes() - mesh.outer_boundary.size();
  j["dtn_error_vs_free"] = dtn_error(d, dtn_free_analytic(o.omega, o.modes, r));
  return dump(j);
}

std::string cmd_sweep(const Options& o, std::string& companion) {
  const std::string fmt = output_format(o, "csv");
  require(!o.eps.empty(), "sweep needs --eps");
  std::vector<double> eps;
  for (const auto& s : split(o.eps, ',')) {
    const double e = parse_number(s, "--eps");
    require(e > 0.0 && e <= 1.0, "--eps values must lie in (0, 1]");
    eps.push_back(e);
  }
  require(o.modes >= 1, "--modes must be at least 1");
  require(o.omega > 0.0, "--omega must be positive");
  CloakExperiment base;
  base.omega = o.omega;
  base.modes = o.modes;
  base.mesh_h = o.h.value_or(0.05);
  base.target = target_medium(o.target_g, o.target_q.value_or(1.0));
  const auto runs = sweep(base, eps);
  std::vector<SweepRecord> recs;
  ordered_json dumps = ordered_json::array();
  for (const auto& run : runs) {
    recs.push_back(run.record);
    ordered_json d = dtn_json(run.dtn);
    d["epsilon"] = run.record.epsilon;
    dumps.push_back(std::move(d));
  }
  if (o.dump_dtn) {
    ordered_json c;
    c["reference"] = dtn_json(dtn_free_analytic(o.omega, o.modes, 2.0));
    c["runs"] = dumps;
    companion = dump(c);
  }
  if (fmt == "csv") return sweep_csv(recs);
  ordered_json j;
  j["target_g"] = o.target_g;
  j["target_q"] = o.target_q.value_or(1.0);
  j["h"] = base.mesh_h;
  ordered_json rows = ordered_json::array();
  for (const auto& r : recs) {
    rows.push_back({{"epsilon", r.epsilon}, {"dtn_error", r.dtn_error_value}, {"dofs", r.dofs},
                    {"omega", r.omega}, {"modes", r.modes}});
  }
  j["records"] = std::move(rows);
  return dump(j);
}

ordered_json eigen_block(const EigenResult& r) {
  ordered_json j;
  j["eigenvalues"] = r.values;
  j["omegas"] = omegas_of(r.values);
  j["residuals"] = r.residuals;
  j["clusters"] = r.clusters;
  return j;
}

std::string cmd_schiffer(const Options& o) {
  require(output_format(o, "json") == "json", "schiffer output is json only");
  ordered_json config;
  double inscribed = 0.0;
  const Mesh mesh = domain_mesh(o, 0.05, config, inscribed);
  config["lambda_max"] = o.lambda_max;
  config["flatness_tol"] = o.flatness_tol;
  config["map"] = resolved_map_name(o);
  const MaterialField medium = push_forward(map_on_domain(o, inscribed), isotropic_medium(1.0, 1.0));
  const SchifferReport rep = schiffer_scan(mesh, medium, o.lambda_max, o.flatness_tol);
  ordered_json j;
  j["problem"] = "schiffer";
  j["config"] = config;
  j["eigenvalues"] = rep.spectrum.values;
  j["clusters"] = rep.spectrum.clusters;
  ordered_json flat = ordered_json::array();
  for (double f : rep.flatness) flat.push_back(std::isnan(f) ? ordered_json(nullptr) : ordered_json(f));
  j["boundary_flatness"] = std::move(flat);
  ordered_json cands = ordered_json::array();
  for (const auto& c : rep.candidates) {
    cands.push_back({{"lambda", c.lambda}, {"boundary_flatness", c.boundary_flatness},
                     {"mode_index", c.mode_index}});
  }
  j["candidates"] = std::move(cands);
  if (o.shape == "disk") {
    // radial Neumann modes J_0(sqrt(lambda) r) with J_1(sqrt(lambda) R) = 0
    ordered_json oracle = ordered_json::array();
    const double r = config["radius"].get<double>();
    for (int k = 1; k <= kBesselMaxRootIndex; ++k) {
      const double lam = std::pow(bessel_root(1, k) / r, 2);
      if (lam > o.lambda_max) break;
      oracle.push_back(lam);
    }
    j["oracle_comparison"] = {{"radial_candidates", oracle}};
  }
  return dump(j);
}

std::string cmd_resonance(const Options& o) {
  require(output_format(o, "json") == "json", "resonance output is json only");
  ordered_json config;
  double inscribed = 0.0;
  const Mesh mesh = domain_mesh(o, 0.03, config, inscribed);
  const double q = o.q.value_or(o.target_q.value_or(1.0));
  const int count = o.count.value_or(8);
  config["target_g"] = o.target_g;
  config["q"] = q;
  config["count"] = count;
  config["map"] = resolved_map_name(o);
  const MaterialField medium =
      push_forward(map_on_domain(o, inscribed), target_medium(o.target_g, q));
  const EigenResult r = resonance_eigs(mesh, medium, count);
  ordered_json j;
  j["problem"] = "resonance";
  j["config"] = config;
  j.update(eigen_block(r));
  j["zero_index"] = r.zero_index ? ordered_json(*r.zero_index) : ordered_json(nullptr);
  const auto c = iso_scale(o.target_g);
  if (o.shape == "disk" && c && is_identity(o)) {
    const double radius = config["radius"].get<double>();
    const auto oracle = resonance_disk_oracle(q / *c, radius, 8, 4);
    std::vector<double> computed;
    for (std::size_t i = 0; i < r.values.size(); ++i) {
      if (!r.zero_index || static_cast<int>(i) != *r.zero_index) {
        computed.push_back(std::sqrt(std::max(0.0, r.values[i])));
      }
    }
    const double cutoff = std::min(resolved_omega(mesh, q / *c), computed.back() / 1.01);
    j["oracle_comparison"] = oracle_json(match_oracle(computed, oracle, cutoff, 0.01, 0.03));
  }
  return dump(j);
}

std::string cmd_ite(const Options& o) {
  require(output_format(o, "json") == "json", "ite output is json only");
  const double h = o.h.value_or(0.03);
  const double q = o.q.value_or(o.target_q.value_or(4.0));
  const int count = o.count.value_or(6);
  ordered_json config;
  config["shape"] = "disk";
  config["radius"] = 1.0;
  config["h"] = h;
  config["target_g"] = o.target_g;
  config["q"] = q;
  config["count"] = count;
  config["coupling"] = {{1.0, -1.0}, {1.0, 1.0}};
  const Mesh mesh = make_disk(1.0, h);
  const ITEConfig cfg = reduced_exterior_config(target_medium(o.target_g, q));
  const EigenResult r = ite_eigs(mesh, cfg, count);
  ordered_json j;
  j["problem"] = "ite";
  j["config"] = config;
  j.update(eigen_block(r));
  const auto c = iso_scale(o.target_g);
  if (c && *c == 1.0 && !r.values.empty()) {
    const auto computed = omegas_of(r.values);
    const double cutoff = std::min(resolved_omega(mesh, q), computed.back() / 1.015);
    j["oracle_comparison"] = oracle_json(match_oracle(computed, ite_disk_oracle(q, 8, 4), cutoff,
                                                      0.015, 0.03));
  }
  return dump(j);
}

int exit_code_for(const Error& e) {
  const std::string& k = e.kind();
  if (k == "resolution") return kExitResolution;
  if (k == "parameter" || k == "range" || k == "domain" || k == "geometry" ||
      k == "configuration" || k == "io") {
    return kExitParameter;
  }
  return kExitNumerical;
}

std::string one_line(std::string s) {
  for (char& ch : s) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  return s;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"cloakspec: transformation-optics cloaking and spectral toolkit", "cloakspec"};
  app.set_help_flag("--help", "print help");  // frees -h; --h is the mesh size
  app.require_subcommand(1);

  auto add_out = [&](CLI::App* c) {
    c->set_help_flag("--help", "print help");
    c->add_option("--out", o.out, "output file")->required();
    c->add_option("--format", o.format, "json or csv");
  };
  auto add_geometry = [&](CLI::App* c) {
    c->add_option("--shape", o.shape, "disk | annulus | ellipse");
    c->add_option("--radius", o.radius, "disk / outer radius");
    c->add_option("--a", o.a, "ellipse x semi-axis");
    c->add_option("--b", o.b, "ellipse y semi-axis");
    c->add_option("--h", o.h, "target edge length");
  };
  auto add_target = [&](CLI::App* c) {
    c->add_option("--target-g", o.target_g, "iso:<c> or diag:<a>:<b>");
    c->add_option("--target-q", o.target_q, "target q");
  };
  auto add_map = [&](CLI::App* c) {
    c->add_option("--map", o.map, "identity | cloak | regcloak:<eps> | inversion | bump:<t>:<seed>");
    c->add_option("--seed", o.seed, "seed for bump:<t>");
  };

  auto* mesh = app.add_subcommand("mesh", "generate a mesh");
  add_geometry(mesh);
  mesh->add_option("--interface", o.interface, "interface radius (annulus: inner radius)");
  add_out(mesh);

  auto* pf = app.add_subcommand("pushforward", "sample pushed-forward coefficients");
  pf->add_option("--radius", o.radius, "sampling radius");
  add_map(pf);
  add_target(pf);
  add_out(pf);

  auto* dtn = app.add_subcommand("dtn", "DtN matrix of a pushed-forward medium on a disk");
  dtn->add_option("--radius", o.radius, "disk radius");
  dtn->add_option("--h", o.h, "target edge length");
  dtn->add_option("--omega", o.omega, "frequency");
  dtn->add_option("--modes", o.modes, "Fourier truncation N");
  add_map(dtn);
  add_target(dtn);
  add_out(dtn);

  auto* sw = app.add_subcommand("sweep", "regularised cloak epsilon sweep");
  sw->add_option("--eps", o.eps, "comma separated epsilon list")->required();
  sw->add_option("--omega", o.omega, "frequency");
  sw->add_option("--modes", o.modes, "Fourier truncation N");
  sw->add_option("--h", o.h, "target edge length");
  add_target(sw);
  sw->add_flag("--dump-dtn", o.dump_dtn, "write DtN matrices to <out>.dtn.json");
  add_out(sw);

  auto* sch = app.add_subcommand("schiffer", "over-determined Neumann scan");
  add_geometry(sch);
  sch->add_option("--lambda-max", o.lambda_max, "largest eigenvalue scanned");
  sch->add_option("--flatness-tol", o.flatness_tol, "candidate threshold");
  add_map(sch);
  add_out(sch);

  auto* res = app.add_subcommand("resonance", "interior resonance eigenvalues");
  add_geometry(res);
  res->add_option("--q", o.q, "target q");
  res->add_option("--target-g", o.target_g, "iso:<c> or diag:<a>:<b>");
  res->add_option("--count", o.count, "number of eigenvalues");
  add_map(res);
  add_out(res);

  auto* ite = app.add_subcommand("ite", "transmission eigenvalues of the reduced exterior problem");
  ite->add_option("--h", o.h, "target edge length");
  ite->add_option("--q", o.q, "target q");
  ite->add_option("--target-g", o.target_g, "iso:<c> or diag:<a>:<b>");
  ite->add_option("--count", o.count, "number of eigenvalues");
  add_out(ite);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: parameter: " << one_line(e.what()) << "\n";
    return kExitParameter;
  }

  try {
    std::string body;
    std::string companion;
    if (mesh->parsed()) body = cmd_mesh(o);
    else if (pf->parsed()) body = cmd_pushforward(o);
    else if (dtn->parsed()) body = cmd_dtn(o);
    else if (sw->parsed()) body = cmd_sweep(o, companion);
    else if (sch->parsed()) body = cmd_schiffer(o);
    else if (res->parsed()) body = cmd_resonance(o);
    else if (ite->parsed()) body = cmd_ite(o);
    if (!companion.empty()) write_atomic(o.out + ".dtn.json", companion);
    write_atomic(o.out, body);
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << one_line(e.what()) << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: internal: " << one_line(e.what()) << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int dispatch(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace cloakspec
