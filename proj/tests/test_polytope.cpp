#include "doctest.h"

#include "csck/error.hpp"
#include "csck/polytope.hpp"

#include <random>

using namespace csck;

namespace {

Rational fact(int n) {
  Rational r = 1;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

// Closed-form monomial integrals used as oracles.
Rational square_interior(int a, int b) { return Rational(1) / ((a + 1) * (b + 1)); }
Rational simplex_interior(int a, int b) { return fact(a) * fact(b) / fact(a + b + 2); }
Rational beta01(int a, int b) { return fact(a) * fact(b) / fact(a + b + 1); }

Rational square_boundary(int a, int b) {
  // y=0, y=1, x=0, x=1 edges, each with unit lattice density
  Rational s = 0;
  s += (b == 0 ? Rational(1) / (a + 1) : Rational(0)) + Rational(1) / (a + 1);
  s += (a == 0 ? Rational(1) / (b + 1) : Rational(0)) + Rational(1) / (b + 1);
  return s;
}

Rational simplex_boundary(int a, int b) {
  Rational s = 0;
  if (b == 0) s += Rational(1) / (a + 1);
  if (a == 0) s += Rational(1) / (b + 1);
  s += beta01(a, b);  // hypotenuse x = s, y = 1 - s, dsigma = ds
  return s;
}

Polynomial monomial(int a, int b) {
  Polynomial p(Rational(1));
  for (int i = 0; i < a; ++i) p = p * Polynomial::variable(0);
  for (int i = 0; i < b; ++i) p = p * Polynomial::variable(1);
  return p;
}

HalfSpace hs(RVec n, Rational c) { return {std::move(n), std::move(c)}; }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::BadDocument;
}

}  // namespace

TEST_CASE("standard polytopes: measures") {
  auto sq = standard_polytope("square");
  CHECK(sq.volume() == 1);
  CHECK(sq.boundary_mass() == 4);
  CHECK(sq.average_A() == 4);
  CHECK(sq.barycenter() == RVec{Rational(1, 2), Rational(1, 2)});

  auto simplex = standard_polytope("simplex");
  CHECK(simplex.volume() == Rational(1, 2));
  CHECK(simplex.boundary_mass() == 3);
  CHECK(simplex.average_A() == 6);
  CHECK(simplex.vertices().size() == 3);
  CHECK(simplex.barycenter() == RVec{Rational(1, 3), Rational(1, 3)});

  auto iv = standard_polytope("interval");
  CHECK(iv.vertices() == std::vector<RVec>{{Rational(0)}, {Rational(1)}});
  CHECK(iv.boundary_mass() == 2);
  CHECK(iv.average_A() == 2);
  CHECK(measure(iv, MeasureKind::AverageA) == RVec{Rational(2)});

  auto cube = standard_polytope("cube");
  CHECK(cube.volume() == 1);
  CHECK(cube.boundary_mass() == 6);

  auto s3 = standard_polytope("simplex3");
  CHECK(s3.volume() == Rational(1, 6));
  // three coordinate faces of area 1/2 plus the slanted face with lattice area 1/2
  CHECK(s3.boundary_mass() == 2);

  auto trap = standard_polytope("trapezoid");
  CHECK(trap.volume() == Rational(3, 2));
  CHECK(trap.vertices().size() == 4);
}

TEST_CASE("exact monomial integration against closed forms") {
  auto sq = standard_polytope("square");
  auto simplex = standard_polytope("simplex");
  for (int a = 0; a <= 4; ++a) {
    for (int b = 0; a + b <= 6; ++b) {
      CHECK(integrate(sq, monomial(a, b), Region::Interior) == square_interior(a, b));
      CHECK(integrate(sq, monomial(a, b), Region::Boundary) == square_boundary(a, b));
      CHECK(integrate(simplex, monomial(a, b), Region::Interior) == simplex_interior(a, b));
      CHECK(integrate(simplex, monomial(a, b), Region::Boundary) == simplex_boundary(a, b));
    }
  }
}

TEST_CASE("random polynomials: exactness and additivity") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coef(-9, 9);
  auto sq = standard_polytope("square");
  auto simplex = standard_polytope("simplex");
  for (int trial = 0; trial < 20; ++trial) {
    Polynomial p, q;
    Rational sq_oracle = 0, sx_oracle = 0;
    for (int a = 0; a <= 4; ++a) {
      for (int b = 0; a + b <= 4; ++b) {
        const Rational c(coef(rng), 1 + (coef(rng) + 9) % 5);
        p += monomial(a, b) * c;
        sq_oracle += c * square_interior(a, b);
        sx_oracle += c * simplex_interior(a, b);
        q += monomial(b, a) * Rational(coef(rng));
      }
    }
    CHECK(integrate(sq, p, Region::Interior) == sq_oracle);
    CHECK(integrate(simplex, p, Region::Interior) == sx_oracle);
    for (auto region : {Region::Interior, Region::Boundary}) {
      CHECK(integrate(sq, p + q, region) == integrate(sq, p, region) + integrate(sq, q, region));
    }
  }
}

TEST_CASE("integration examples") {
  auto sq = standard_polytope("square");
  CHECK(integrate(sq, Polynomial(Rational(1)), Region::Interior) == 1);
  auto simplex = standard_polytope("simplex");
  CHECK(integrate(simplex, Polynomial::variable(0), Region::Boundary) == 1);

  auto iv = standard_polytope("interval");
  // max(0, x - 1/2) as two cells split at x = 1/2
  PiecewisePolynomial f = {
      {{hs({Rational(-1)}, Rational(1, 2))}, Polynomial()},
      {{hs({Rational(1)}, Rational(-1, 2))}, Polynomial::affine({Rational(1)}, Rational(-1, 2))},
  };
  CHECK(integrate(iv, f, Region::Interior) == Rational(1, 8));
  CHECK(integrate(iv, f, Region::Boundary) == Rational(1, 2));
}

TEST_CASE("subdivision gaps and overlaps are rejected") {
  auto sq = standard_polytope("square");
  PiecewisePolynomial gap = {{{hs({Rational(-1), Rational(0)}, Rational(1, 2))}, Polynomial(Rational(1))}};
  CHECK(kind_of([&] { integrate(sq, gap, Region::Interior); }) == ErrorKind::SubdivisionGap);
  PiecewisePolynomial overlap = {
      {{hs({Rational(-1), Rational(0)}, Rational(3, 4))}, Polynomial(Rational(1))},
      {{hs({Rational(1), Rational(0)}, Rational(-1, 4))}, Polynomial(Rational(1))},
  };
  CHECK(kind_of([&] { integrate(sq, overlap, Region::Interior); }) == ErrorKind::SubdivisionGap);
}

TEST_CASE("validation errors") {
  auto one = Rational(1), zero = Rational(0);
  CHECK(kind_of([&] {
          Polytope::create("bad", 2, {hs({2, 0}, 0), hs({0, 1}, 0), hs({-1, 0}, 1), hs({0, -1}, 1)});
        }) == ErrorKind::NonPrimitiveNormal);
  CHECK(kind_of([&] { Polytope::create("half", 2, {hs({1, 0}, 0), hs({0, 1}, 0), hs({-1, 0}, 1)}); }) ==
        ErrorKind::Unbounded);
  CHECK(kind_of([&] { Polytope::create("ray", 1, {hs({1}, 0)}); }) == ErrorKind::Unbounded);
  CHECK(kind_of([&] { Polytope::create("empty", 1, {hs({1}, 0), hs({-1}, -1)}); }) == ErrorKind::EmptyInterior);
  CHECK(kind_of([&] { Polytope::create("flat", 1, {hs({1}, 0), hs({-1}, 0)}); }) == ErrorKind::EmptyInterior);
  // {x>=0, y>=0, 2-x-2y... } replaced by the weighted projective triangle x>=0,y>=0, 2-2x-y: normal (-2,-1) primitive, vertex det 2
  CHECK(kind_of([&] { Polytope::create("wp", 2, {hs({1, 0}, 0), hs({0, 1}, 0), hs({-2, -1}, 2)}); }) ==
        ErrorKind::NotDelzant);
  // square with an extra cut that misses P
  CHECK(kind_of([&] {
          Polytope::create("redundant", 2,
                           {hs({1, 0}, 0), hs({0, 1}, 0), hs({-1, 0}, 1), hs({0, -1}, 1), hs({-1, -1}, 5)});
        }) == ErrorKind::RedundantFacet);
  // cut touching only the corner (1,1)
  CHECK(kind_of([&] {
          Polytope::create("corner", 2,
                           {hs({1, 0}, 0), hs({0, 1}, 0), hs({-1, 0}, 1), hs({0, -1}, 1), hs({-1, -1}, 2)});
        }) == ErrorKind::RedundantFacet);
  (void)one;
  (void)zero;
}

TEST_CASE("translation covariance") {
  for (const char* name : {"square", "simplex", "trapezoid", "cube"}) {
    auto p = standard_polytope(name);
    RVec shift(p.dim());
    for (int j = 0; j < p.dim(); ++j) shift[j] = j == 0 ? 3 : -2;
    auto q = p.translated(shift);
    CHECK(q.volume() == p.volume());
    CHECK(q.boundary_mass() == p.boundary_mass());
    CHECK(q.average_A() == p.average_A());
    for (int j = 0; j < p.dim(); ++j) CHECK(q.barycenter()[j] == p.barycenter()[j] + shift[j]);
  }
}

TEST_CASE("json round trip and offset policy") {
  auto doc = nlohmann::json::parse(R"({"name":"s","dim":2,"facets":[
    {"normal":[1,0],"offset":"0"},{"normal":[0,1],"offset":"0"},{"normal":[-1,-1],"offset":"1"}]})");
  auto p = polytope_from_json(doc);
  CHECK(p.average_A() == 6);
  CHECK(polytope_from_json(polytope_to_json(p)).volume() == Rational(1, 2));
  doc["facets"][2]["offset"] = 1.0;
  CHECK(kind_of([&] { polytope_from_json(doc); }) == ErrorKind::BadDocument);
  doc["facets"][2]["offset"] = "1.0";
  CHECK(kind_of([&] { polytope_from_json(doc); }) == ErrorKind::BadDocument);
}
