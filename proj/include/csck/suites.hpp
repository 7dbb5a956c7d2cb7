#pragma once

#include "csck/mabuchi_appendix.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace csck {

/// One pass/fail line: `value` compared against `bound` with `relation` ("<=", ">=", "==").
struct Check {
  std::string name;
  double value = 0;
  std::string relation = "<=";
  double bound = 0;
  bool pass = false;
};

Check make_check(std::string name, double value, std::string relation, double bound);
nlohmann::json checks_to_json(const std::vector<Check>& checks);
bool all_pass(const std::vector<Check>& checks);

/// d_p(a_t, b_t) - (1 - t) d_p(a0, b0) - t d_p(a1, b1) over random quadruples on
/// the interval and the square (alternating).
struct EndpointSuite {
  int quadruples = 0;
  double max_defect = 0;
};
EndpointSuite endpoint_convexity_suite(std::uint64_t seed, int count, const std::vector<double>& ps, int n,
                                       unsigned jobs = 1);

/// Random ray pairs on the interval; half are transplants, half independent.
struct RayPairSuite {
  int pairs = 0;
  double min_second_difference = 0;  // of t -> d_p(r1(t), r2(t)) over p in {1, 2, 3}
  int one_branch = 0;                // pairs (per p) where exactly one dichotomy branch holds
  int evaluations = 0;
};
RayPairSuite ray_pair_suite(std::uint64_t seed, int count, int n, unsigned jobs = 1);

/// Random (base, base', f) triples; f is transplanted from base to base'.
struct TransplantSuite {
  int triples = 0;
  double max_gap_deviation = 0;  // |d_1(r1(t), r2(t)) - d_1(base, base')| over t in {0, 1, 5, 10}
  double max_yen_difference = 0;
};
TransplantSuite transplant_suite(std::uint64_t seed, int count, int n, int k_max, unsigned jobs = 1);

struct AppendixSuiteConfig {
  TorusGrid trivial_grid{8, 8, 10};
  double trivial_eps = 0.1;
  std::vector<int> curvature_m{32, 64, 128};
  int curvature_families = 3;
  TorusGrid family_grid{16, 16, 16};
  int families = 10;
  double family_eps = 0.1;
  double family_ds = 1e-3;
  TorusGrid length_grid{16, 16, 16};
  ModeFamily c0, c1;  // default: s 0.1 cos xi1 and s 0.1 sin xi2
  double length_p = 2;
  double length_eps = 0.1;
  int length_samples = 8;
};

AppendixSuiteConfig default_appendix_config();
AppendixSuiteConfig appendix_config_from_toml(const std::string& text);

struct AppendixSuite {
  double trivial_error = 0;
  double trivial_residual = 0;
  std::vector<double> curvature_defect;       // worst family per resolution
  std::vector<double> curvature_ratio;        // min over families of consecutive defect ratios
  double curvature_max_rhs = 0;               // must be <= 0
  double second_variation_min_defect = 0;
  LengthProfile length;
};
AppendixSuite appendix_suite(const AppendixSuiteConfig& cfg, std::uint64_t seed, unsigned jobs = 1);

/// Deterministic random families used by the appendix suite.
ModeFamily random_mode_family(std::uint64_t seed, double amp);
ModeFamily random_endpoint_family(std::uint64_t seed, double amp);

}  // namespace csck
