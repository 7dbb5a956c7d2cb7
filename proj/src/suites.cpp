#include "csck/suites.hpp"

#include "csck/error.hpp"
#include "csck/geodesic_space.hpp"
#include "csck/parallel.hpp"

#include "toml.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace csck {

Check make_check(std::string name, double value, std::string relation, double bound) {
  bool pass = false;
  if (relation == "<=") pass = value <= bound;
  else if (relation == ">=") pass = value >= bound;
  else if (relation == "==") pass = value == bound;
  else throw Error(ErrorKind::OutOfDomain, "unknown check relation '" + relation + "'");
  return {std::move(name), value, std::move(relation), bound, pass};
}

nlohmann::json checks_to_json(const std::vector<Check>& checks) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : checks)
    out.push_back({{"name", c.name}, {"value", c.value}, {"relation", c.relation}, {"bound", c.bound}, {"pass", c.pass}});
  return out;
}

bool all_pass(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

namespace {

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

std::shared_ptr<const Polytope> shared_polytope(const char* name) {
  return std::make_shared<const Polytope>(standard_polytope(name));
}

// u_G plus a random convex quadratic and affine part.
SymplecticPotential random_potential(const std::shared_ptr<const Polytope>& p, int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1, 1);
  const double q = 0.5 * (U(rng) + 1), m = 0.5 * (U(rng) + 1), a = U(rng), b = U(rng);
  if (p->dim() == 1)
    return SymplecticPotential::from_function(p, n, [=](const Point& x) { return q * (x[0] - m) * (x[0] - m) + a * x[0] + b; });
  const double q2 = 0.5 * (U(rng) + 1), a2 = U(rng);
  return SymplecticPotential::from_function(p, n, [=](const Point& x) {
    return q * (x[0] - m) * (x[0] - m) + q2 * (x[1] - m) * (x[1] - m) + a * x[0] + a2 * x[1] + b;
  });
}

Rational random_offset(std::mt19937_64& rng) { return Rational(std::uniform_int_distribution<int>(1, 15)(rng), 16); }

// One or two creases with random offsets and slopes plus an affine part.
PLConvexFn random_direction(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> slope(1, 4), sign(-2, 2);
  auto f = PLConvexFn::crease({Rational(slope(rng))}, random_offset(rng));
  if (slope(rng) % 2 == 0) f = f + PLConvexFn::crease({Rational(-slope(rng))}, -random_offset(rng));
  return f + PLConvexFn::affine({Rational(sign(rng))}, Rational(sign(rng)));
}

ModeFamily::Mode random_mode(std::mt19937_64& rng, bool sine) {
  std::uniform_int_distribution<int> k(-2, 2);
  ModeFamily::Mode mode;
  do {
    mode.k1 = k(rng);
    mode.k2 = k(rng);
  } while (mode.k1 == 0 && mode.k2 == 0);
  mode.sine = sine;
  return mode;
}

template <class View>
TorusGrid grid_from(View t, TorusGrid g) {
  g.m1 = t["m1"].value_or(g.m1);
  g.m2 = t["m2"].value_or(g.m2);
  g.nt = t["nt"].value_or(g.nt);
  return g;
}

}  // namespace

EndpointSuite endpoint_convexity_suite(std::uint64_t seed, int count, const std::vector<double>& ps, int n,
                                       unsigned jobs) {
  const auto iv = shared_polytope("interval"), sq = shared_polytope("square");
  std::vector<double> defect(count, -std::numeric_limits<double>::infinity());
  parallel_for(count, jobs, [&](std::size_t i) {
    auto rng = trial_rng(seed, i);
    const auto& poly = i % 2 ? sq : iv;
    const auto a0 = random_potential(poly, n, rng), a1 = random_potential(poly, n, rng);
    const auto b0 = random_potential(poly, n, rng), b1 = random_potential(poly, n, rng);
    const double t = std::uniform_real_distribution<double>(0, 1)(rng);
    for (double p : ps) {
      const double lhs = dp_distance(geodesic_point(a0, a1, t), geodesic_point(b0, b1, t), p);
      const double rhs = (1 - t) * dp_distance(a0, b0, p) + t * dp_distance(a1, b1, p);
      defect[i] = std::max(defect[i], lhs - rhs);
    }
  });
  EndpointSuite out;
  out.quadruples = count;
  out.max_defect = count ? *std::max_element(defect.begin(), defect.end()) : 0.0;
  return out;
}

RayPairSuite ray_pair_suite(std::uint64_t seed, int count, int n, unsigned jobs) {
  const auto iv = shared_polytope("interval");
  std::vector<double> ts;
  for (int k = 0; k <= 20; ++k) ts.push_back(0.5 * k);
  std::vector<double> min2(count, std::numeric_limits<double>::infinity());
  std::vector<int> ones(count, 0);
  parallel_for(count, jobs, [&](std::size_t i) {
    auto rng = trial_rng(seed, i);
    const auto b1 = random_potential(iv, n, rng), b2 = random_potential(iv, n, rng);
    const auto r1 = GeodesicRay::from_pl(b1, random_direction(rng));
    const auto r2 = i % 2 ? transplant_ray(r1, b2) : GeodesicRay::from_pl(b2, random_direction(rng));
    for (double p : {1.0, 2.0, 3.0}) {
      const auto d = ray_gap_profile(r1, r2, p, ts);
      for (std::size_t k = 1; k + 1 < d.size(); ++k) min2[i] = std::min(min2[i], d[k - 1] - 2 * d[k] + d[k + 1]);
      const auto rep = dichotomy_check(r1, r2, p);
      if (rep.slope_branch != rep.nonincreasing_branch) ++ones[i];
    }
  });
  RayPairSuite out;
  out.pairs = count;
  out.evaluations = 3 * count;
  out.min_second_difference = count ? *std::min_element(min2.begin(), min2.end()) : 0.0;
  for (int v : ones) out.one_branch += v;
  return out;
}

TransplantSuite transplant_suite(std::uint64_t seed, int count, int n, int k_max, unsigned jobs) {
  const auto iv = shared_polytope("interval");
  std::vector<double> gap(count, 0.0), yen(count, 0.0);
  parallel_for(count, jobs, [&](std::size_t i) {
    auto rng = trial_rng(seed, i);
    const auto b1 = random_potential(iv, n, rng), b2 = random_potential(iv, n, rng);
    const auto r1 = GeodesicRay::from_pl(b1, random_direction(rng));
    const auto r2 = transplant_ray(r1, b2);
    const double d0 = dp_distance(b1, b2, 1);
    for (double g : ray_gap_profile(r1, r2, 1, {0, 1, 5, 10})) gap[i] = std::max(gap[i], std::abs(g - d0));
    yen[i] = std::abs(yen_invariant(r1, k_max).yen - yen_invariant(r2, k_max).yen);
  });
  TransplantSuite out;
  out.triples = count;
  for (int i = 0; i < count; ++i) {
    out.max_gap_deviation = std::max(out.max_gap_deviation, gap[i]);
    out.max_yen_difference = std::max(out.max_yen_difference, yen[i]);
  }
  return out;
}

ModeFamily random_mode_family(std::uint64_t seed, double amp) {
  auto rng = trial_rng(seed, 0);
  std::uniform_real_distribution<double> u(-amp, amp);
  ModeFamily f;
  for (int m = 0; m < 3; ++m) {
    auto mode = random_mode(rng, m % 2 == 1);
    mode.coef.assign(3, std::vector<double>(3));
    for (auto& row : mode.coef)
      for (auto& c : row) c = u(rng);
    f.modes.push_back(mode);
  }
  return f;
}

ModeFamily random_endpoint_family(std::uint64_t seed, double amp) {
  auto rng = trial_rng(seed, 0);
  std::uniform_real_distribution<double> u(-amp, amp);
  ModeFamily f;
  for (int m = 0; m < 2; ++m) {
    auto mode = random_mode(rng, m == 1);
    mode.coef = {{u(rng)}, {u(rng)}, {u(rng)}};
    f.modes.push_back(mode);
  }
  return f;
}

AppendixSuiteConfig default_appendix_config() {
  AppendixSuiteConfig cfg;
  cfg.c0.modes.push_back({1, 0, false, {{0.0}, {0.1}}});
  cfg.c1.modes.push_back({0, 1, true, {{0.0}, {0.1}}});
  return cfg;
}

AppendixSuiteConfig appendix_config_from_toml(const std::string& text) {
  toml::table doc;
  try {
    doc = toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw Error(ErrorKind::BadDocument, std::string("appendix config: ") + std::string(e.description()));
  }
  AppendixSuiteConfig cfg = default_appendix_config();
  auto& root = doc;
  cfg.trivial_grid = grid_from(root["trivial"], cfg.trivial_grid);
  cfg.trivial_eps = root["trivial"]["eps"].value_or(cfg.trivial_eps);
  if (const auto* m = root["curvature"]["m"].as_array()) {
    cfg.curvature_m.clear();
    for (const auto& x : *m) {
      const auto v = x.value<int>();
      if (!v || *v < 4) throw Error(ErrorKind::BadDocument, "curvature.m: expected integers >= 4");
      cfg.curvature_m.push_back(*v);
    }
  }
  cfg.curvature_families = root["curvature"]["families"].value_or(cfg.curvature_families);
  cfg.family_grid = grid_from(root["families"], cfg.family_grid);
  cfg.families = root["families"]["count"].value_or(cfg.families);
  cfg.family_eps = root["families"]["eps"].value_or(cfg.family_eps);
  cfg.family_ds = root["families"]["ds"].value_or(cfg.family_ds);
  cfg.length_grid = grid_from(root["length"], cfg.length_grid);
  cfg.length_p = root["length"]["p"].value_or(cfg.length_p);
  cfg.length_eps = root["length"]["eps"].value_or(cfg.length_eps);
  cfg.length_samples = root["length"]["samples"].value_or(cfg.length_samples);
  if (doc.contains("c0")) cfg.c0 = mode_family_from_toml(text, "c0");
  if (doc.contains("c1")) cfg.c1 = mode_family_from_toml(text, "c1");
  if (cfg.curvature_m.empty() || cfg.curvature_families < 1 || cfg.families < 1)
    throw Error(ErrorKind::BadDocument, "appendix config: empty curvature or family sets");
  return cfg;
}

AppendixSuite appendix_suite(const AppendixSuiteConfig& cfg, std::uint64_t seed, unsigned jobs) {
  AppendixSuite out;

  {
    const auto& g = cfg.trivial_grid;
    const Field zero(g.nodes(), 0.0);
    const auto path = solve_eps_geodesic(g, zero, zero, cfg.trivial_eps);
    for (int j = 0; j <= g.nt; ++j) {
      const double t = j * g.tau();
      for (double x : path.phi[j])
        out.trivial_error = std::max(out.trivial_error, std::abs(x - cfg.trivial_eps * t * (t - 1) / 2));
    }
    out.trivial_residual = path.residual;
  }

  {
    const int nf = cfg.curvature_families, nm = static_cast<int>(cfg.curvature_m.size());
    std::vector<std::vector<CurvatureCheck>> res(nf, std::vector<CurvatureCheck>(nm));
    parallel_for(static_cast<std::size_t>(nf) * nm, jobs, [&](std::size_t k) {
      const int f = static_cast<int>(k) / nm, m = static_cast<int>(k) % nm;
      const auto fam = random_mode_family(seed + 1000 + f, 0.05);
      const TorusGrid g{cfg.curvature_m[m], cfg.curvature_m[m], 1};
      res[f][m] = curvature_identity_check(fam, Chi::half_square(), g, 0.3, 0.6);
    });
    out.curvature_defect.assign(nm, 0.0);
    out.curvature_ratio.assign(nm > 1 ? nm - 1 : 0, std::numeric_limits<double>::infinity());
    out.curvature_max_rhs = -std::numeric_limits<double>::infinity();
    for (int f = 0; f < nf; ++f) {
      for (int m = 0; m < nm; ++m) {
        out.curvature_defect[m] = std::max(out.curvature_defect[m], res[f][m].defect);
        out.curvature_max_rhs = std::max(out.curvature_max_rhs, res[f][m].rhs);
        if (m > 0) out.curvature_ratio[m - 1] = std::min(out.curvature_ratio[m - 1], res[f][m - 1].defect / res[f][m].defect);
      }
    }
  }

  {
    const std::vector<Chi> chis{Chi::square(), Chi::regularized(1, 0.1), Chi::regularized(2, 0.1),
                                Chi::regularized(3, 0.1)};
    std::vector<double> worst(cfg.families);
    parallel_for(cfg.families, jobs, [&](std::size_t f) {
      const auto c0 = random_endpoint_family(seed + 2000 + 2 * f, 0.05);
      const auto c1 = random_endpoint_family(seed + 2001 + 2 * f, 0.05);
      double w = std::numeric_limits<double>::infinity();
      for (const auto& c : convexity_along_family(c0, c1, chis, cfg.family_eps, cfg.family_grid, 0.5, cfg.family_ds))
        w = std::min(w, c.min_defect);
      worst[f] = w;
    });
    out.second_variation_min_defect = *std::min_element(worst.begin(), worst.end());
  }

  out.length = length_profile(cfg.c0, cfg.c1, cfg.length_p, cfg.length_eps, cfg.length_grid, cfg.length_samples, jobs);
  return out;
}

}  // namespace csck
