// One pass/fail line per acceptance criterion; exit status 0 iff all pass.

#include "csck/cli.hpp"
#include "csck/continuity_path.hpp"
#include "csck/geodesic_space.hpp"
#include "csck/polytope.hpp"
#include "csck/stability.hpp"
#include "csck/suites.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace csck;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string num(double x) {
  std::ostringstream s;
  s.precision(3);
  s << x;
  return s.str();
}

std::shared_ptr<const Polytope> shared(const char* name) {
  return std::make_shared<const Polytope>(standard_polytope(name));
}

Outcome exact_kernel() {
  const auto simplex = standard_polytope("simplex"), square = standard_polytope("square");
  const Rational lx = lp_functional(simplex, PLConvexFn::affine({Rational(1), Rational(0)}, Rational(0)));
  const Rational ly = lp_functional(simplex, PLConvexFn::affine({Rational(0), Rational(1)}, Rational(0)));
  const Rational crease = lp_functional(square, PLConvexFn::crease({Rational(1), Rational(0)}, Rational(1, 2)));
  const bool ok = lx == 0 && ly == 0 && crease == Rational(1, 4);
  return {ok, "simplex L_P(x) = " + to_string(lx) + ", L_P(y) = " + to_string(ly) + "; square crease = " + to_string(crease)};
}

Outcome futaki_dichotomy() {
  const auto sq = futaki(standard_polytope("square")), sx = futaki(standard_polytope("simplex"));
  const auto tr = futaki(standard_polytope("trapezoid"));
  auto zero = [](const FutakiResult& f) {
    for (const auto& g : f.gradient)
      if (g != 0) return false;
    return true;
  };
  const bool ok = zero(sq) && zero(sx) && !zero(tr);
  return {ok, "trapezoid futaki = (" + to_string(tr.gradient[0]) + ", " + to_string(tr.gradient[1]) + ")"};
}

Outcome yen_slope() {
  auto iv = shared("interval");
  auto err = [&](int n) {
    const auto ray = GeodesicRay::from_pl(SymplecticPotential::guillemin(iv, n), PLConvexFn::crease({Rational(1)}, Rational(1, 2)));
    return yen_invariant(ray, 8).yen - 0.25;
  };
  const double e512 = err(512), e1024 = err(1024);
  const double ratio = e1024 / e512;
  const bool ok = std::abs(e1024) <= 5e-3 && ratio >= 0.4 && ratio <= 0.6;
  return {ok, "|yen - 1/4| = " + num(std::abs(e1024)) + " at N = 1024, error ratio 1024/512 = " + num(ratio)};
}

Outcome endpoint_convexity() {
  const auto s = endpoint_convexity_suite(4, 1000, {1, 2, 3}, 24, 0);
  return {s.max_defect <= 1e-12, std::to_string(s.quadruples) + " quadruples, max defect " + num(s.max_defect)};
}

Outcome ray_pairs() {
  const auto s = ray_pair_suite(5, 200, 64, 0);
  const bool ok = s.min_second_difference >= -1e-8 && s.one_branch == s.evaluations;
  return {ok, std::to_string(s.pairs) + " pairs, min second difference " + num(s.min_second_difference) + ", one branch in " +
                  std::to_string(s.one_branch) + "/" + std::to_string(s.evaluations)};
}

Outcome transplants() {
  const auto s = transplant_suite(6, 50, 1024, 32, 0);
  const bool ok = s.max_gap_deviation <= 1e-10 && s.max_yen_difference <= 1e-8;
  return {ok, std::to_string(s.triples) + " triples, gap deviation " + num(s.max_gap_deviation) + ", yen difference " +
                  num(s.max_yen_difference)};
}

PathConfig path_config(int n) {
  PathConfig c;
  c.n = n;
  c.t_grid = {0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.999};
  c.recentring.t = {0, 1};
  c.recentring.c = {1, 1};
  c.p = 2;
  return c;
}

// Shared between criteria 7 and 8.
PathRun& fine_run() {
  static PathRun run = run_path(path_config(2048));
  return run;
}

Outcome continuity_path() {
  const auto& a = fine_run();
  const auto b = run_path(path_config(4096));
  double worst_residual = 0;
  for (const auto& s : a.states) worst_residual = std::max(worst_residual, s.residual_norm);
  const double dev = curvature_deviation(a.states.back(), a.background.rbar);
  const bool all_t = a.states.size() == 7 && a.states.back().t == 0.999;
  using Get = std::function<double(const ObservableRecord&)>;
  const std::vector<std::pair<std::string, Get>> obs{
      {"entropy", [](const ObservableRecord& r) { return r.entropy; }},
      {"sup", [](const ObservableRecord& r) { return r.sup_F_plus_f; }},
      {"inf", [](const ObservableRecord& r) { return r.inf_F_plus_f; }},
      {"lap_p2", [](const ObservableRecord& r) { return r.lap_bound_p; }},
      {"grad", [](const ObservableRecord& r) { return r.grad_bound; }}};
  double worst_change = 0;
  for (const auto& [name, get] : obs) {
    double ca = 0, cb = 0;
    for (const auto& r : a.observables) ca = std::max(ca, std::abs(get(r)));
    for (const auto& r : b.observables) cb = std::max(cb, std::abs(get(r)));
    worst_change = std::max(worst_change, std::abs(ca - cb) / std::max(cb, 1e-300));
  }
  const bool ok = all_t && worst_residual <= 1e-9 && dev <= 1e-3 && worst_change < 0.05;
  return {ok, "7 t-values, max residual " + num(worst_residual) + ", sup|R - Rbar| at 0.999 = " + num(dev) +
                  ", max run-constant change N -> 2N " + num(worst_change)};
}

Outcome twist_decay() {
  const auto& run = fine_run();
  double f09 = 0, f0999 = 0, exp_max = 0;
  for (std::size_t i = 0; i < run.states.size(); ++i) {
    const double t = run.states[i].t;
    const auto& o = run.observables[i];
    if (t == 0.9) f09 = o.int_abs_f;
    if (t == 0.999) f0999 = o.int_abs_f;
    if (t >= 0.9) exp_max = std::max(exp_max, o.int_exp_m4f);
  }
  const double ratio = f0999 / f09;
  const bool ok = f09 > 0 && ratio <= 0.02 && exp_max < 10;
  return {ok, "int|f| ratio 0.999/0.9 = " + num(ratio) + ", max int e^{-4f} over t >= 0.9 = " + num(exp_max)};
}

Outcome appendix() {
  const auto cfg = default_appendix_config();
  const auto s = appendix_suite(cfg, 9, 0);
  bool ratios = true;
  for (double r : s.curvature_ratio) ratios = ratios && r >= 3.5;
  const bool ok = s.trivial_error <= 1e-12 && s.curvature_defect.back() <= 1e-5 && ratios && s.second_variation_min_defect >= -1e-5 &&
                  s.length.convexity_defect >= -1e-6 && cfg.families == 10;
  std::string r;
  for (double x : s.curvature_ratio) r += " " + num(x);
  return {ok, "trivial error " + num(s.trivial_error) + ", curvature defect " + num(s.curvature_defect.back()) +
                  " (ratios" + r + "), second variation " + num(s.second_variation_min_defect) + " on " +
                  std::to_string(cfg.families) + " families, L convexity " + num(s.length.convexity_defect)};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "csck_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  const fs::path cfg = root / "dp.toml";
  std::ofstream(cfg) << "[endpoint]\ncount = 40\n[rays]\ncount = 8\n[transplant]\ncount = 2\nn = 128\nk_max = 8\n";
  auto bytes = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  bool same = true;
  int runs = 0;
  for (const char* command : {"polytope-check", "dp-suite", "appendix-suite"}) {
    std::string first;
    for (unsigned jobs : {1u, 4u}) {
      cli::RunConfig rc;
      rc.command = command;
      rc.seed = 42;
      rc.jobs = jobs;
      rc.quiet = true;
      if (std::string(command) == "dp-suite") rc.config_path = cfg;
      if (std::string(command) == "appendix-suite") {
        const fs::path a = root / "app.toml";
        std::ofstream(a) << "[curvature]\nm = [16, 32]\nfamilies = 1\n[families]\ncount = 1\nm1 = 8\nm2 = 8\nnt = 8\n"
                            "[length]\nm1 = 8\nm2 = 8\nnt = 8\n";
        rc.config_path = a;
      }
      rc.output_dir = root / (std::string(command) + "_" + std::to_string(jobs));
      cli::run(rc);
      ++runs;
      const std::string b = bytes(rc.output_dir / "report.json");
      if (first.empty()) first = b;
      else same = same && b == first && !b.empty();
    }
  }
  fs::remove_all(root);
  return {same, std::to_string(runs) + " runs (jobs 1 and 4), report.json byte-identical per command"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    double limit_s;
    std::function<Outcome()> body;
  };
  const std::vector<Criterion> criteria{
      {1, "exact toric stability kernel", 1, exact_kernel},
      {2, "futaki dichotomy", 1, futaki_dichotomy},
      {3, "yen equals the L_P slope", 10, yen_slope},
      {4, "d_p endpoint convexity", 5, endpoint_convexity},
      {5, "ray gap convexity and dichotomy", 10, ray_pairs},
      {6, "transplanted rays: constant gap, equal yen", 10, transplants},
      {7, "continuity path on CP1", 300, continuity_path},
      {8, "twist decay under recentring", 60, twist_decay},
      {9, "torus appendix identities", 180, appendix},
      {10, "deterministic reports", 1, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && secs < c.limit_s;
    failed += !pass;
    std::cout << "criterion " << c.id << " [" << (pass ? "PASS" : "FAIL") << "] " << c.name << ": " << o.detail << " ("
              << num(secs) << " s, limit " << c.limit_s << " s)" << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << std::endl;
  return failed ? 1 : 0;
}
