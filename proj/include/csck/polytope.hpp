#pragma once

#include "csck/polynomial.hpp"
#include "csck/rational.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace csck {

/// {x : <normal, x> + offset >= 0}
struct HalfSpace {
  RVec normal;
  Rational offset;

  Rational evaluate(const RVec& x) const { return dot(normal, x) + offset; }
};

/// Simplex together with its mass in the measure it was produced for
/// (Lebesgue for interior pieces, lattice boundary measure for facet pieces).
struct Simplex {
  std::vector<RVec> verts;
  Rational measure;
};

namespace geom {

std::optional<RVec> solve_exact(std::vector<RVec> a, RVec b);

std::vector<RVec> enumerate_vertices(int dim, const std::vector<HalfSpace>& ineq,
                                     const std::vector<HalfSpace>& eq = {});

/// Simplicial decomposition of the full-dimensional region cut out by `ineq`.
/// Returns an empty list when the region has empty interior.
std::vector<Simplex> triangulate(int dim, const std::vector<HalfSpace>& ineq);

/// Decomposition of the region intersected with the hyperplane facet = 0, with
/// masses in the lattice boundary measure (Euclidean / |normal|_2, point mass in dim 1).
std::vector<Simplex> triangulate_on_facet(int dim, const std::vector<HalfSpace>& ineq,
                                          const HalfSpace& facet);

Rational total_measure(const std::vector<Simplex>& simplices);

}  // namespace geom

/// Facet-presented Delzant polytope in dimension 1..3. Immutable once built.
class Polytope {
 public:
  /// Validates and throws csck::Error (NotDelzant, Unbounded, EmptyInterior,
  /// NonPrimitiveNormal, RedundantFacet).
  static Polytope create(std::string name, int dim, std::vector<HalfSpace> facets);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  const std::vector<HalfSpace>& facets() const { return facets_; }
  const std::vector<RVec>& vertices() const { return vertices_; }

  const Rational& volume() const { return volume_; }
  const Rational& boundary_mass() const { return boundary_mass_; }
  Rational average_A() const { return boundary_mass_ / volume_; }
  const RVec& barycenter() const { return barycenter_; }

  /// Lattice density 1/|nu|_2 of facet k relative to Euclidean facet measure (1 in dim 1).
  double facet_density(std::size_t k) const;

  const std::vector<Simplex>& interior_simplices() const { return interior_; }

  /// Axis-aligned bounding box, per coordinate.
  std::vector<std::pair<Rational, Rational>> bounding_box() const;

  bool contains(const RVec& x) const;

  Polytope translated(const RVec& shift) const;

 private:
  Polytope() = default;

  std::string name_;
  int dim_ = 0;
  std::vector<HalfSpace> facets_;
  std::vector<RVec> vertices_;
  std::vector<Simplex> interior_;
  Rational volume_;
  Rational boundary_mass_;
  RVec barycenter_;
};

enum class MeasureKind { Volume, BoundaryMass, Barycenter, AverageA };

/// Scalar kinds return a one-element vector; Barycenter returns dim entries.
RVec measure(const Polytope& p, MeasureKind kind);

enum class Region { Interior, Boundary };

/// Cell of a piecewise-polynomial function: the polynomial is used on
/// P ∩ {constraints >= 0}.
struct PolyCell {
  std::vector<HalfSpace> constraints;
  Polynomial poly;
};

using PiecewisePolynomial = std::vector<PolyCell>;

/// Exact integral. Interior uses dmu, Boundary uses the lattice measure dsigma.
/// Throws SubdivisionGap if the cells do not tile P.
Rational integrate(const Polytope& p, const PiecewisePolynomial& f, Region region);
Rational integrate(const Polytope& p, const Polynomial& f, Region region);

Polytope polytope_from_json(const nlohmann::json& doc);
nlohmann::json polytope_to_json(const Polytope& p);

/// Named models used across the lab: interval, square, simplex, trapezoid, cube.
Polytope standard_polytope(const std::string& name);

}  // namespace csck
