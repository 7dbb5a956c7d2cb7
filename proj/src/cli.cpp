#include "csck/cli.hpp"

#include "csck/continuity_path.hpp"
#include "csck/error.hpp"
#include "csck/format.hpp"
#include "csck/geodesic_space.hpp"
#include "csck/mabuchi_appendix.hpp"
#include "csck/parallel.hpp"
#include "csck/polytope.hpp"
#include "csck/stability.hpp"
#include "csck/stability_io.hpp"
#include "csck/suites.hpp"
#include "csck/toric_energy.hpp"

#include "toml.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace csck::cli {

namespace {

namespace fs = std::filesystem;

struct Context {
  explicit Context(const RunConfig& r) : run(r) {}

  const RunConfig& run;
  std::string text;  // config file contents
  toml::table doc;
  fs::path base_dir;
  std::string op;  // module operation currently running, for error provenance
  std::ostringstream log;
  nlohmann::json results = nlohmann::json::object();
  std::vector<Check> checks;
  std::map<std::string, std::string> csv;  // file name -> contents
  nlohmann::json extra_json;               // written as path.json when set

  void note(const std::string& line) {
    log << line << '\n';
    if (!run.quiet) std::cerr << line << '\n';
  }

  fs::path resolve(const std::string& p) const {
    const fs::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  }
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorKind::BadDocument, "cannot read '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorKind::BadDocument, "cannot write '" + p.string() + "'");
  out << text;
}

std::string csv_text(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::string s = csv_line(header) + "\n";
  for (const auto& r : rows) s += csv_line(r) + "\n";
  return s;
}

nlohmann::json rvec_strings(const RVec& v) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

nlohmann::json toml_to_json(const toml::node& node) {
  std::ostringstream ss;
  if (const auto* t = node.as_table()) ss << toml::json_formatter{*t};
  else if (const auto* a = node.as_array()) ss << toml::json_formatter{*a};
  else throw Error(ErrorKind::BadDocument, "expected a table or an array");
  return nlohmann::json::parse(ss.str());
}

template <class T>
T get_or(const Context& c, std::string_view dotted, T fallback) {
  return c.doc.at_path(dotted).value_or(fallback);
}

std::vector<double> get_doubles(const Context& c, std::string_view dotted, std::vector<double> fallback) {
  const auto* arr = c.doc.at_path(dotted).as_array();
  if (!arr) return fallback;
  std::vector<double> out;
  for (const auto& x : *arr) {
    const auto v = x.value<double>();
    if (!v) throw Error(ErrorKind::BadDocument, std::string(dotted) + ": expected numbers");
    out.push_back(*v);
  }
  return out;
}

std::shared_ptr<const Polytope> load_polytope(Context& c) {
  c.op = "polytope_from_json";
  if (auto file = c.doc["polytope_file"].value<std::string>()) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(read_file(c.resolve(*file)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::BadDocument, "polytope file: " + std::string(e.what()));
    }
    return std::make_shared<const Polytope>(polytope_from_json(doc));
  }
  c.op = "standard_polytope";
  return std::make_shared<const Polytope>(standard_polytope(get_or<std::string>(c, "polytope", "interval")));
}

SymplecticPotential load_potential(Context& c, const std::shared_ptr<const Polytope>& poly, const std::string& key) {
  const int n = get_or<int>(c, "n", 64);
  const auto src = get_or<std::string>(c, key, "guillemin");
  if (src == "guillemin") return SymplecticPotential::guillemin(poly, n);
  c.op = "potential_from_json";
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(c.resolve(src)));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::BadDocument, key + " file: " + std::string(e.what()));
  }
  return potential_from_json(doc, [&](const std::string& name) {
    if (name != poly->name()) throw Error(ErrorKind::GridMismatch, "potential is on '" + name + "', config on '" + poly->name() + "'");
    return poly;
  });
}

void cmd_polytope_check(Context& c) {
  const auto poly = load_polytope(c);
  c.op = "futaki";
  const auto fut = futaki(*poly);
  nlohmann::json vertices = nlohmann::json::array();
  std::vector<std::vector<std::string>> rows;
  for (const auto& v : poly->vertices()) {
    vertices.push_back(rvec_strings(v));
    std::vector<std::string> row;
    for (const auto& x : v) row.push_back(to_string(x));
    rows.push_back(row);
  }
  std::vector<std::string> header;
  for (int k = 0; k < poly->dim(); ++k) header.push_back("x" + std::to_string(k + 1));
  c.csv["vertices.csv"] = csv_text(header, rows);
  c.results = {{"polytope", polytope_to_json(*poly)},
               {"vertices", vertices},
               {"volume", to_string(poly->volume())},
               {"boundary_mass", to_string(poly->boundary_mass())},
               {"A", to_string(poly->average_A())},
               {"barycenter", rvec_strings(poly->barycenter())},
               {"futaki", {{"gradient", rvec_strings(fut.gradient)}, {"constant", to_string(fut.constant)}}}};
  c.note("polytope " + poly->name() + ": " + std::to_string(poly->vertices().size()) + " vertices, A = " +
         to_string(poly->average_A()));
}

void cmd_stability_scan(Context& c) {
  const auto poly = load_polytope(c);
  c.op = "scan_spec_from_toml";
  const auto spec = scan_spec_from_toml(c.text);
  c.op = "stability_scan";
  const auto rep = stability_scan(*poly, spec.family, spec.criterion, c.run.jobs);
  c.results = report_to_json(rep);
  c.csv["scan.csv"] = report_csv(rep, get_or<bool>(c, "sort", true));
  c.note("scanned " + std::to_string(rep.scan_size) + " candidates, skipped " + std::to_string(rep.skipped) +
         ", min " + to_string(rep.min_value));
}

void cmd_energy(Context& c) {
  const auto poly = load_polytope(c);
  const auto u = load_potential(c, poly, "potential");
  LegendreOptions lo;
  lo.L = get_or<double>(c, "legendre.L", lo.L);
  std::vector<std::vector<std::string>> rows;
  c.op = "mabuchi_energy";
  const auto k = mabuchi_energy(u, u.dim() == 1, lo);
  rows.push_back(energy_csv_row(k));
  nlohmann::json twisted = nlohmann::json::array();
  c.op = "twisted_energy";
  for (double t : get_doubles(c, "t", {})) {
    const auto r = twisted_energy(u, t, lo);
    rows.push_back(energy_csv_row(r));
    twisted.push_back({{"t", t}, {"twisted", *r.twisted}});
  }
  c.results = {{"polytope", poly->name()},
               {"n", u.n()},
               {"entropy_term", k.entropy_term},
               {"lp_term", k.lp_term},
               {"k_energy", k.k_energy},
               {"twisted", twisted}};
  if (u.dim() == 1) {
    c.op = "abreu_scalar_curvature";
    c.results["scalar_curvature_average"] = abreu_scalar_curvature(u).average;
  }
  c.csv["energy.csv"] = csv_text(energy_csv_header(), rows);
  c.note("K = " + format_double(k.k_energy));
}

void cmd_ray_classify(Context& c) {
  const auto poly = load_polytope(c);
  const auto base = load_potential(c, poly, "base");
  const auto* dir = c.doc.get("direction");
  if (!dir) throw Error(ErrorKind::BadDocument, "ray-classify needs 'direction' (an array of {a, b} pieces)");
  c.op = "pl_from_json";
  const auto f = pl_from_json({{"pieces", toml_to_json(*dir)}});
  const int k_max = get_or<int>(c, "k_max", 8);
  c.op = "GeodesicRay::from_pl";
  const auto ray = GeodesicRay::from_pl(base, f, get_or<double>(c, "p", 1.0), get_or<bool>(c, "unit_speed", false));
  c.op = "classify_ray";
  const auto cls = classify_ray(ray, k_max, get_or<double>(c, "tol", 1e-6));
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < cls.increments.size(); ++k)
    rows.push_back({std::to_string(k), format_double(cls.increments[k])});
  c.csv["increments.csv"] = csv_text({"k", "increment"}, rows);
  c.results = {{"verdict", to_string(cls.verdict)},
               {"yen", cls.yen},
               {"affine_residual", cls.affine_residual},
               {"speed", ray.speed()},
               {"scale", ray.scale()},
               {"L_P", to_string(lp_functional(*poly, f))},
               {"k_max", k_max}};
  c.note("verdict " + to_string(cls.verdict) + ", yen " + format_double(cls.yen));
}

void cmd_dp_suite(Context& c) {
  const auto seed = c.run.seed;
  c.op = "endpoint_convexity_suite";
  const auto ep = endpoint_convexity_suite(seed, get_or<int>(c, "endpoint.count", 1000),
                                           get_doubles(c, "endpoint.p", {1, 2, 3}), get_or<int>(c, "endpoint.n", 24),
                                           c.run.jobs);
  c.note("endpoint convexity: " + std::to_string(ep.quadruples) + " quadruples, max defect " + format_double(ep.max_defect));
  c.op = "ray_pair_suite";
  const auto rp = ray_pair_suite(seed + 1, get_or<int>(c, "rays.count", 200), get_or<int>(c, "rays.n", 64), c.run.jobs);
  c.note("ray pairs: " + std::to_string(rp.pairs) + ", min second difference " + format_double(rp.min_second_difference));
  c.op = "transplant_suite";
  const auto tp = transplant_suite(seed + 2, get_or<int>(c, "transplant.count", 50), get_or<int>(c, "transplant.n", 1024),
                                   get_or<int>(c, "transplant.k_max", 32), c.run.jobs);
  c.note("transplants: " + std::to_string(tp.triples) + ", max yen difference " + format_double(tp.max_yen_difference));

  c.checks.push_back(make_check("endpoint_convexity_defect", ep.max_defect, "<=", 1e-12));
  c.checks.push_back(make_check("gap_second_difference", rp.min_second_difference, ">=", -1e-8));
  c.checks.push_back(make_check("dichotomy_exactly_one_branch", rp.one_branch, "==", rp.evaluations));
  c.checks.push_back(make_check("transplant_gap_deviation", tp.max_gap_deviation, "<=", 1e-10));
  c.checks.push_back(make_check("transplant_yen_difference", tp.max_yen_difference, "<=", 1e-8));
  c.results = {{"endpoint", {{"quadruples", ep.quadruples}, {"max_defect", ep.max_defect}}},
               {"rays", {{"pairs", rp.pairs}, {"min_second_difference", rp.min_second_difference},
                         {"one_branch", rp.one_branch}, {"evaluations", rp.evaluations}}},
               {"transplant", {{"triples", tp.triples}, {"max_gap_deviation", tp.max_gap_deviation},
                               {"max_yen_difference", tp.max_yen_difference}}}};
  std::vector<std::vector<std::string>> rows;
  for (const auto& ch : c.checks) rows.push_back({ch.name, format_double(ch.value), ch.relation, format_double(ch.bound)});
  c.csv["checks.csv"] = csv_text({"check", "value", "relation", "bound"}, rows);
}

void cmd_continuity(Context& c) {
  c.op = "path_config_from_toml";
  const auto cfg = path_config_from_toml(c.text);
  c.op = "run_path";
  const auto run = run_path(cfg);
  std::vector<std::vector<std::string>> rows;
  nlohmann::json states = nlohmann::json::array();
  for (std::size_t i = 0; i < run.states.size(); ++i) {
    const auto& s = run.states[i];
    const auto& o = run.observables[i];
    rows.push_back(path_csv_row(run.recentred[i], o));
    const double dev = curvature_deviation(s, run.background.rbar);
    states.push_back({{"t", s.t},
                      {"residual", s.residual_norm},
                      {"newton_iters", s.newton_iters},
                      {"curvature_deviation", dev},
                      {"shift", run.recentred[i].shift},
                      {"observables",
                       {{"sup_F_plus_f", o.sup_F_plus_f}, {"inf_F_plus_f", o.inf_F_plus_f}, {"entropy", o.entropy},
                        {"lap_bound_p", o.lap_bound_p}, {"grad_bound", o.grad_bound}, {"w12p", o.w12p},
                        {"twisted_scalar_residual", o.twisted_scalar_residual}, {"int_abs_f", o.int_abs_f},
                        {"int_exp_m4f", o.int_exp_m4f}, {"p_check", run.twists[i].p_check}}}});
    std::string hist;
    for (double r : s.residual_history) hist += " " + format_double(r);
    c.note("t = " + format_double(s.t) + ": " + std::to_string(s.newton_iters) + " Newton steps, residuals" + hist);
    c.checks.push_back(make_check("residual t=" + format_double(s.t), s.residual_norm, "<=", cfg.newton.tol));
  }
  c.csv["path.csv"] = csv_text(path_csv_header(), rows);
  c.results = {{"n", cfg.n}, {"L", cfg.L}, {"rbar", run.background.rbar}, {"p", cfg.p}, {"states", states}};
}

ModeFamily family_or_zero(const Context& c, const std::string& table) {
  if (!c.doc.contains(table)) return {};
  return mode_family_from_toml(c.text, table);
}

void cmd_epsgeo(Context& c) {
  TorusGrid g;
  g.m1 = get_or<int>(c, "grid.m1", g.m1);
  g.m2 = get_or<int>(c, "grid.m2", g.m2);
  g.nt = get_or<int>(c, "grid.nt", g.nt);
  const double eps = get_or<double>(c, "eps", 0.1);
  c.op = "mode_family_from_toml";
  const auto f0 = family_or_zero(c, "phi0"), f1 = family_or_zero(c, "phi1");
  EpsGeodesicOptions opt;
  opt.max_iter = get_or<int>(c, "newton.max_iter", opt.max_iter);
  opt.tol = get_or<double>(c, "newton.tol", opt.tol);
  c.op = "solve_eps_geodesic";
  const auto path = solve_eps_geodesic(g, f0.sample(g, 0, 0), f1.sample(g, 0, 0), eps, opt);
  const double slack = geodesic_slack(path);
  const auto X = path.velocity();
  std::vector<std::vector<std::string>> rows;
  for (int j = 0; j <= g.nt; ++j) {
    double mg = std::numeric_limits<double>::infinity();
    for (double x : torus::metric(g, path.phi[j])) mg = std::min(mg, x);
    Field sq(g.nodes());
    for (int p = 0; p < g.nodes(); ++p) sq[p] = X[j][p] * X[j][p];
    rows.push_back({format_double(j * g.tau()), format_double(mg), format_double(torus::integrate(g, path.phi[j], sq))});
  }
  c.csv["levels.csv"] = csv_text({"t", "min_metric", "energy"}, rows);
  c.extra_json = path_to_json(path);
  c.results = {{"m1", g.m1},          {"m2", g.m2},
               {"nt", g.nt},          {"eps", eps},
               {"residual", path.residual},
               {"newton_iters", path.newton_iters},
               {"admissibility_margin", path.admissibility_margin},
               {"eps_schedule", path.eps_schedule},
               {"geodesic_slack", slack}};
  c.checks.push_back(make_check("residual", path.residual, "<=", opt.tol));
  c.checks.push_back(make_check("admissibility_margin", path.admissibility_margin, ">=", 0.0));
  c.checks.back().pass = path.admissibility_margin > 0;
  c.note("eps-geodesic: " + std::to_string(path.newton_iters) + " Newton steps, residual " + format_double(path.residual));
}

void cmd_appendix_suite(Context& c) {
  c.op = "appendix_config_from_toml";
  const auto cfg = appendix_config_from_toml(c.text);
  c.op = "appendix_suite";
  const auto s = appendix_suite(cfg, c.run.seed, c.run.jobs);
  c.checks.push_back(make_check("trivial_case_error", s.trivial_error, "<=", 1e-12));
  c.checks.push_back(make_check("trivial_case_residual", s.trivial_residual, "<=", 1e-9));
  c.checks.push_back(make_check("curvature_identity_defect", s.curvature_defect.back(), "<=", 1e-5));
  for (std::size_t k = 0; k < s.curvature_ratio.size(); ++k)
    c.checks.push_back(make_check("curvature_refinement_ratio_" + std::to_string(cfg.curvature_m[k + 1]),
                                  s.curvature_ratio[k], ">=", 3.5));
  c.checks.push_back(make_check("curvature_rhs_sign", s.curvature_max_rhs, "<=", 0.0));
  c.checks.push_back(make_check("second_variation_defect", s.second_variation_min_defect, ">=", -1e-5));
  c.checks.push_back(make_check("length_convexity_defect", s.length.convexity_defect, ">=", -1e-6));
  std::vector<std::vector<std::string>> rows;
  for (std::size_t j = 0; j < s.length.L.size(); ++j) {
    const bool interior = j > 0 && j + 1 < s.length.L.size();
    const double d = interior ? s.length.L[j - 1] - 2 * s.length.L[j] + s.length.L[j + 1] : 0.0;
    rows.push_back({format_double(s.length.t[j]), format_double(s.length.L[j]), interior ? format_double(d) : ""});
  }
  c.csv["length.csv"] = csv_text({"t", "L", "defect"}, rows);
  c.results = {{"trivial_error", s.trivial_error},
               {"curvature_m", cfg.curvature_m},
               {"curvature_defect", s.curvature_defect},
               {"curvature_ratio", s.curvature_ratio},
               {"curvature_max_rhs", s.curvature_max_rhs},
               {"second_variation_min_defect", s.second_variation_min_defect},
               {"length", {{"t", s.length.t}, {"L", s.length.L}, {"convexity_defect", s.length.convexity_defect}}}};
  c.note("appendix suite: curvature defect " + format_double(s.curvature_defect.back()) + ", second variation " +
         format_double(s.second_variation_min_defect) + ", length convexity " + format_double(s.length.convexity_defect));
}

const std::map<std::string, std::pair<std::string, void (*)(Context&)>>& table() {
  static const std::map<std::string, std::pair<std::string, void (*)(Context&)>> t{
      {"polytope-check", {"polytope", cmd_polytope_check}},
      {"stability-scan", {"stability", cmd_stability_scan}},
      {"energy", {"toric_energy", cmd_energy}},
      {"ray-classify", {"geodesic_space", cmd_ray_classify}},
      {"dp-suite", {"geodesic_space", cmd_dp_suite}},
      {"continuity", {"continuity_path", cmd_continuity}},
      {"epsgeo", {"mabuchi_appendix", cmd_epsgeo}},
      {"appendix-suite", {"mabuchi_appendix", cmd_appendix_suite}},
  };
  return t;
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"polytope-check", "stability-scan", "energy",  "ray-classify",
                                              "dp-suite",       "continuity",     "epsgeo", "appendix-suite"};
  return names;
}

std::filesystem::path default_output_dir(const std::string& command) {
  const char* root = std::getenv("CSCK_LAB_OUT");
  return fs::path(root && *root ? root : "csck_lab_out") / command;
}

RunOutcome run(const RunConfig& config) {
  RunOutcome out;
  Context c{config};
  out.output_dir = config.output_dir.empty() ? default_output_dir(config.command) : config.output_dir;

  const auto it = table().find(config.command);
  std::string module = it == table().end() ? "cli" : it->second.first;
  nlohmann::json error;
  try {
    if (it == table().end()) throw Error(ErrorKind::BadDocument, "unknown command '" + config.command + "'");
    if (!config.config_path.empty()) {
      c.op = "read config";
      c.text = read_file(config.config_path);
      c.base_dir = config.config_path.parent_path();
      try {
        c.doc = toml::parse(c.text);
      } catch (const toml::parse_error& e) {
        throw Error(ErrorKind::BadDocument, "config: " + std::string(e.description()));
      }
    }
    it->second.second(c);
    out.exit_code = all_pass(c.checks) ? kOk : kChecksFailed;
  } catch (const Error& e) {
    out.exit_code = is_numerical(e.kind()) ? kNumerical : kValidation;
    error = {{"kind", std::string(to_string(e.kind()))}, {"module", module}, {"op", c.op}, {"message", e.what()}};
    c.note("error in " + module + "::" + c.op + ": " + e.what());
  } catch (const std::exception& e) {
    out.exit_code = kValidation;
    error = {{"kind", "BadDocument"}, {"module", module}, {"op", c.op}, {"message", e.what()}};
    c.note("error in " + module + "::" + c.op + ": " + e.what());
  }

  const char* status = out.exit_code == kOk ? "pass" : out.exit_code == kChecksFailed ? "fail" : "error";
  out.report = {{"schema_version", kSchemaVersion},
                {"tool", "csck-lab"},
                {"command", config.command},
                {"seed", config.seed},
                {"config", config.config_path.empty() ? "" : config.config_path.filename().string()},
                {"status", status},
                {"exit_code", out.exit_code},
                {"checks", checks_to_json(c.checks)},
                {"results", c.results}};
  if (!error.is_null()) out.report["error"] = error;

  try {
    fs::create_directories(out.output_dir);
    write_file(out.output_dir / "report.json", out.report.dump(2) + "\n");
    for (const auto& [name, text] : c.csv) write_file(out.output_dir / name, text);
    if (!c.extra_json.is_null()) write_file(out.output_dir / "path.json", c.extra_json.dump() + "\n");
    write_file(out.output_dir / "log.txt", c.log.str());
  } catch (const std::exception& e) {
    if (!config.quiet) std::cerr << "cannot write artifacts: " << e.what() << '\n';
    if (out.exit_code == kOk || out.exit_code == kChecksFailed) out.exit_code = kValidation;
  }
  return out;
}

}  // namespace csck::cli
