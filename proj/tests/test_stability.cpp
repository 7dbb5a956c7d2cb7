#include "doctest.h"

#include "csck/error.hpp"
#include "csck/stability.hpp"
#include "csck/stability_io.hpp"

#include <cmath>
#include <algorithm>
#include <random>

using namespace csck;

namespace {

Rational R(long p, long q = 1) { return Rational(p, q); }

// int_0^1 max(0, alpha x + beta) dx in closed form.
double ramp(double alpha, double beta) {
  if (alpha == 0) return std::max(0.0, beta);
  const double lo = beta, hi = alpha + beta;
  if (lo >= 0 && hi >= 0) return (lo + hi) / 2;
  if (lo <= 0 && hi <= 0) return 0;
  const double pos = std::max(lo, hi);
  return pos * pos / (2 * std::abs(alpha));
}

// Independent floating-point L_P for a crease on the unit square: closed form in
// x, Gauss-Legendre in y on the pieces between the kinks of the inner integral.
double square_crease_lp(double a1, double a2, double c) {
  std::vector<double> cuts{0.0, 1.0};
  if (a2 != 0) {
    for (double y : {c / a2, (c - a1) / a2})
      if (y > 0 && y < 1) cuts.push_back(y);
  }
  std::sort(cuts.begin(), cuts.end());
  const double g[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  const double w[3] = {5.0 / 9, 8.0 / 9, 5.0 / 9};
  double interior = 0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k], hi = cuts[k + 1];
    for (int q = 0; q < 3; ++q) {
      const double y = 0.5 * (lo + hi) + 0.5 * (hi - lo) * g[q];
      interior += 0.5 * (hi - lo) * w[q] * ramp(a1, a2 * y - c);
    }
  }
  const double boundary = ramp(a1, -c) + ramp(a1, a2 - c) + ramp(a2, -c) + ramp(a2, a1 - c);
  return boundary - 4 * interior;
}

double midpoint_abs(const std::function<double(double)>& g, int n = 200000) {
  double s = 0;
  for (int i = 0; i < n; ++i) s += std::abs(g((i + 0.5) / n));
  return s / n;
}

}  // namespace

TEST_CASE("L_P examples") {
  auto simplex = standard_polytope("simplex");
  auto sq = standard_polytope("square");
  auto iv = standard_polytope("interval");
  CHECK(lp_functional(simplex, PLConvexFn::affine({R(1), R(0)}, 0)) == 0);
  CHECK(lp_functional(sq, PLConvexFn::crease({R(1), R(0)}, R(1, 2))) == R(1, 4));
  CHECK(lp_functional(iv, PLConvexFn::crease({R(1)}, R(1, 2))) == R(1, 4));
  CHECK(lp_functional(sq, PLConvexFn::affine({R(0), R(0)}, 1)) == 0);
}

TEST_CASE("interval creases follow c(1-c)") {
  auto iv = standard_polytope("interval");
  for (int k = 1; k < 16; ++k) {
    const Rational c(k, 16);
    CHECK(lp_functional(iv, PLConvexFn::crease({R(1)}, c)) == c * (1 - c));
    CHECK(lp_functional(iv, PLConvexFn::crease({R(-1)}, -c)) == c * (1 - c));
  }
}

TEST_CASE("square creases against floating quadrature") {
  auto sq = standard_polytope("square");
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> num(-6, 6);
  for (int trial = 0; trial < 30; ++trial) {
    RVec a{R(num(rng)), R(num(rng))};
    if (a[0] == 0 && a[1] == 0) continue;
    const Rational c(num(rng), 7);
    const Rational exact = lp_functional(sq, PLConvexFn::crease(a, c));
    CHECK(std::abs(to_double(exact) - square_crease_lp(to_double(a[0]), to_double(a[1]), to_double(c))) < 1e-9);
  }
}

TEST_CASE("linearity and affine restriction") {
  auto trap = standard_polytope("trapezoid");
  auto fut = futaki(trap);
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> num(-5, 5);
  for (int trial = 0; trial < 15; ++trial) {
    auto f = PLConvexFn::crease({R(num(rng)), R(1)}, R(num(rng), 4));
    auto g = PLConvexFn::crease({R(1), R(num(rng))}, R(num(rng), 3));
    const Rational al(1 + trial % 3, 2), be(trial % 4, 3);
    CHECK(lp_functional(trap, f.scaled(al) + g.scaled(be)) == al * lp_functional(trap, f) + be * lp_functional(trap, g));
    RVec a{R(num(rng)), R(num(rng))};
    CHECK(lp_functional(trap, PLConvexFn::affine(a, R(num(rng)))) == dot(fut.gradient, a));
  }
}

TEST_CASE("normalize_pl") {
  auto iv = standard_polytope("interval");
  auto f = PLConvexFn::crease({R(1)}, R(1, 2));
  auto n = normalize_pl(iv, f);
  // Gram system [[1, 1/2], [1/2, 1/3]] c = [int f, int x f] = [1/8, 5/48]
  auto oracle = geom::solve_exact({{R(1), R(1, 2)}, {R(1, 2), R(1, 3)}}, {R(1, 8), R(5, 48)});
  REQUIRE(oracle);
  CHECK(n.affine_part.b == (*oracle)[0]);
  CHECK(n.affine_part.a[0] == (*oracle)[1]);
  CHECK(integrate(iv, n.f_tilde, Region::Interior) == 0);
  auto xf = n.f_tilde;
  for (auto& c : xf) c.poly = c.poly * Polynomial::variable(0);
  CHECK(integrate(iv, xf, Region::Interior) == 0);
  const double ref = midpoint_abs([](double x) { return std::max(0.0, x - 0.5) - (x / 2 - 1.0 / 8); });
  CHECK(std::abs(to_double(abs_integral(iv, n.f_tilde)) - ref) < 1e-9);

  auto again = normalize_pl(iv, n.f_tilde);
  CHECK(again.affine_part.b == 0);
  CHECK(again.affine_part.a[0] == 0);
  CHECK(lp_functional(iv, f) == lp_functional(iv, n.f_tilde) + lp_functional(iv, n.affine_part.polynomial()));

  auto sq = standard_polytope("square");
  CHECK(normalize_pl(sq, PLConvexFn::affine({R(2), R(-3)}, R(5))).is_zero());
  auto g = normalize_pl(sq, PLConvexFn::crease({R(1), R(1)}, R(1, 3)));
  for (int k = 0; k < 3; ++k) {
    auto w = g.f_tilde;
    for (auto& c : w) c.poly = k == 0 ? c.poly : c.poly * Polynomial::variable(k - 1);
    CHECK(integrate(sq, w, Region::Interior) == 0);
  }
}

TEST_CASE("futaki") {
  auto sq = futaki(standard_polytope("square"));
  CHECK(sq.gradient == RVec{R(0), R(0)});
  CHECK(sq.constant == 0);
  auto simplex = futaki(standard_polytope("simplex"));
  CHECK(simplex.gradient == RVec{R(0), R(0)});
  // Trapezoid by hand: boundary mass 5, volume 3/2, A = 10/3;
  // boundary int x = 4, int_P x = 7/6; boundary int y = 2, int_P y = 2/3.
  auto trap = futaki(standard_polytope("trapezoid"));
  CHECK(trap.gradient == RVec{R(4) - R(10, 3) * R(7, 6), R(2) - R(10, 3) * R(2, 3)});
  CHECK(trap.gradient != RVec{R(0), R(0)});
  CHECK(trap.constant == 0);
}

TEST_CASE("stability scans") {
  auto iv = standard_polytope("interval");
  ScanFamily fam{{{{R(1)}, {R(1, 4), R(1, 2), R(3, 4)}}, {{R(-1)}, {R(1, 4), R(1, 2), R(3, 4)}}}, false};
  auto rep = stability_scan(iv, fam, Criterion::K, 4);
  CHECK(rep.min_value == R(3, 16));
  REQUIRE(rep.witness_creases.size() == 1);
  CHECK(rep.witness_creases[0].c == R(1, 4));
  CHECK(rep.witness_creases[0].a == RVec{R(1)});
  CHECK(rep.skipped == 3);
  CHECK(rep.scan_size == 3);
  CHECK(!rep.margin);

  auto sq = standard_polytope("square");
  auto one = stability_scan(sq, ScanFamily{{{{R(1), R(0)}, {R(1, 2)}}}, false}, Criterion::K);
  CHECK(one.min_value == R(1, 4));

  // creases positive on all of P are affine there
  auto aff = stability_scan(sq, ScanFamily{{{{R(1), R(0)}, {R(-1), R(-2)}}, {{R(1), R(-1)}, {R(-3)}}}, false}, Criterion::K);
  CHECK(aff.min_value == 0);

  auto uni = stability_scan(iv, ScanFamily{{{{R(1)}, {R(1, 8), R(1, 4), R(1, 2), R(3, 4)}}}, true}, Criterion::Uniform, 3);
  REQUIRE(uni.margin);
  Rational best = *uni.rows.front().ratio;
  for (const auto& r : uni.rows) {
    CHECK(r.lp >= 0);
    if (r.ratio) best = std::min(best, *r.ratio);
  }
  CHECK(uni.min_value == best);
  CHECK(*uni.margin == best);

  // schedule independence
  auto serial = stability_scan(sq, ScanFamily{{{{R(1), R(1)}, {R(1, 3), R(1, 2), R(1)}}, {{R(1), R(-1)}, {R(0), R(1, 4)}}}, true}, Criterion::Uniform, 1);
  auto threaded = stability_scan(sq, ScanFamily{{{{R(1), R(1)}, {R(1, 3), R(1, 2), R(1)}}, {{R(1), R(-1)}, {R(0), R(1, 4)}}}, true}, Criterion::Uniform, 8);
  CHECK(report_csv(serial, false) == report_csv(threaded, false));
  CHECK(report_to_json(serial) == report_to_json(threaded));

  CHECK_THROWS_AS(stability_scan(iv, ScanFamily{}, Criterion::K), Error);
}

TEST_CASE("1-D positivity on random creases") {
  auto iv = Polytope::create("iv", 1, {{{R(1)}, R(2)}, {{R(-1)}, R(3)}});  // [-2, 3]
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> num(-40, 60);
  for (int trial = 0; trial < 20; ++trial) {
    auto f = PLConvexFn::crease({R(1)}, R(num(rng), 20)) + PLConvexFn::crease({R(-1)}, R(num(rng), 20));
    const Rational lp = lp_functional(iv, f);
    CHECK(lp >= 0);
    if (lp == 0) CHECK(f.is_affine_on(iv));
  }
}

TEST_CASE("scan spec and PL json") {
  auto spec = scan_spec_from_toml(R"(
criterion = "uniform"
pairs = true
directions = [["1"], ["-1"]]
offsets = { start = "1/4", stop = "3/4", step = "1/4" }
[[direction]]
a = [2]
offsets = ["1/3"]
)");
  CHECK(spec.criterion == Criterion::Uniform);
  CHECK(spec.family.include_pairs);
  REQUIRE(spec.family.directions.size() == 3);
  CHECK(spec.family.directions[0].offsets == std::vector<Rational>{R(1, 4), R(1, 2), R(3, 4)});
  CHECK(spec.family.directions[2].a == RVec{R(2)});
  CHECK_THROWS_AS(scan_spec_from_toml("criterion = \"K\"\ndirections = [[0.5]]\noffsets=[\"1\"]"), Error);

  auto f = PLConvexFn::crease({R(1), R(-1)}, R(1, 3));
  CHECK(pl_from_json(pl_to_json(f)).pieces() == f.pieces());
  CHECK_THROWS_AS(pl_from_json(nlohmann::json::parse(R"({"pieces":[{"a":[1.5],"b":"0"}]})")), Error);
}
