#include "csck/polytope.hpp"

#include "csck/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace csck {

namespace geom {

std::optional<RVec> solve_exact(std::vector<RVec> a, RVec b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  RVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

namespace {

RVec sub(const RVec& a, const RVec& b) {
  RVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

RVec cross(const RVec& a, const RVec& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Rational det(const std::vector<RVec>& rows) {
  const std::size_t n = rows.size();
  if (n == 1) return rows[0][0];
  if (n == 2) return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0];
  return dot(rows[0], cross(rows[1], rows[2]));
}

Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

void push_unique(std::vector<RVec>& pts, RVec p) {
  if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(std::move(p));
}

RVec centroid(const std::vector<RVec>& pts) {
  RVec c(pts.front().size(), 0);
  for (const auto& p : pts)
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += p[i];
  for (auto& x : c) x /= static_cast<long>(pts.size());
  return c;
}

// Sorts 2-D points of a convex polygon counter-clockwise around their centroid.
std::vector<std::size_t> order_polygon(const std::vector<std::array<Rational, 2>>& pts) {
  std::array<Rational, 2> c{0, 0};
  for (const auto& p : pts) {
    c[0] += p[0];
    c[1] += p[1];
  }
  c[0] /= static_cast<long>(pts.size());
  c[1] /= static_cast<long>(pts.size());
  auto half = [&](std::size_t i) {
    const Rational dx = pts[i][0] - c[0], dy = pts[i][1] - c[1];
    return (dy > 0 || (dy == 0 && dx > 0)) ? 0 : 1;
  };
  std::vector<std::size_t> idx(pts.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const int ha = half(a), hb = half(b);
    if (ha != hb) return ha < hb;
    const Rational ax = pts[a][0] - c[0], ay = pts[a][1] - c[1];
    const Rational bx = pts[b][0] - c[0], by = pts[b][1] - c[1];
    return ax * by - ay * bx > 0;
  });
  return idx;
}

// Orders coplanar 3-D points (plane normal `n`) by projecting out the dominant axis.
std::vector<RVec> order_in_plane(const std::vector<RVec>& pts, const RVec& n) {
  std::size_t drop = 0;
  for (std::size_t j = 1; j < 3; ++j)
    if (abs(n[j]) > abs(n[drop])) drop = j;
  std::vector<std::array<Rational, 2>> proj;
  for (const auto& p : pts) {
    std::array<Rational, 2> q;
    std::size_t k = 0;
    for (std::size_t j = 0; j < 3; ++j)
      if (j != drop) q[k++] = p[j];
    proj.push_back(q);
  }
  std::vector<RVec> out;
  for (auto i : order_polygon(proj)) out.push_back(pts[i]);
  return out;
}

bool collinear(const std::vector<RVec>& pts) {
  if (pts.size() < 3) return true;
  const RVec d0 = sub(pts[1], pts[0]);
  for (std::size_t i = 2; i < pts.size(); ++i) {
    const RVec c = cross(d0, sub(pts[i], pts[0]));
    if (c[0] != 0 || c[1] != 0 || c[2] != 0) return false;
  }
  return true;
}

// Non-collinear ordered polygon in 3-D for the points; empty when degenerate.
std::vector<RVec> planar_polygon(std::vector<RVec> pts, const RVec& n) {
  if (pts.size() < 3 || collinear(pts)) return {};
  return order_in_plane(pts, n);
}

}  // namespace

std::vector<RVec> enumerate_vertices(int dim, const std::vector<HalfSpace>& ineq,
                                     const std::vector<HalfSpace>& eq) {
  std::vector<RVec> out;
  const int need = dim - static_cast<int>(eq.size());
  if (need < 0) return out;
  const int m = static_cast<int>(ineq.size());
  if (need > m) return out;
  std::vector<int> pick(need);
  std::iota(pick.begin(), pick.end(), 0);
  for (;;) {
    std::vector<RVec> a;
    RVec b;
    for (const auto& h : eq) {
      a.push_back(h.normal);
      b.push_back(-h.offset);
    }
    for (int i : pick) {
      a.push_back(ineq[i].normal);
      b.push_back(-ineq[i].offset);
    }
    if (auto x = solve_exact(a, b)) {
      const bool feasible = std::all_of(ineq.begin(), ineq.end(),
                                        [&](const HalfSpace& h) { return h.evaluate(*x) >= 0; });
      if (feasible) push_unique(out, std::move(*x));
    }
    // next combination
    int i = need - 1;
    while (i >= 0 && pick[i] == m - need + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < need; ++j) pick[j] = pick[j - 1] + 1;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Simplex> triangulate(int dim, const std::vector<HalfSpace>& ineq) {
  const auto verts = enumerate_vertices(dim, ineq);
  std::vector<Simplex> out;
  if (static_cast<int>(verts.size()) < dim + 1) return out;
  if (dim == 1) {
    const Rational len = verts.back()[0] - verts.front()[0];
    if (len > 0) out.push_back({{verts.front(), verts.back()}, len});
    return out;
  }
  if (dim == 2) {
    std::vector<std::array<Rational, 2>> pts;
    for (const auto& v : verts) pts.push_back({v[0], v[1]});
    const auto order = order_polygon(pts);
    for (std::size_t k = 1; k + 1 < order.size(); ++k) {
      const RVec& a = verts[order[0]];
      const RVec& b = verts[order[k]];
      const RVec& c = verts[order[k + 1]];
      const Rational area = abs(det({sub(b, a), sub(c, a)})) / 2;
      if (area > 0) out.push_back({{a, b, c}, area});
    }
    return out;
  }
  // dim 3: cone from the vertex centroid over fan-triangulated faces
  const RVec apex = centroid(verts);
  std::vector<std::vector<std::size_t>> seen;
  for (const auto& h : ineq) {
    std::vector<RVec> tight;
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < verts.size(); ++i) {
      if (h.evaluate(verts[i]) == 0) {
        tight.push_back(verts[i]);
        ids.push_back(i);
      }
    }
    if (std::find(seen.begin(), seen.end(), ids) != seen.end()) continue;
    const auto poly = planar_polygon(tight, h.normal);
    if (poly.empty()) continue;
    seen.push_back(ids);
    for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
      const Rational vol = abs(det({sub(poly[0], apex), sub(poly[k], apex), sub(poly[k + 1], apex)})) / 6;
      if (vol > 0) out.push_back({{apex, poly[0], poly[k], poly[k + 1]}, vol});
    }
  }
  return out;
}

std::vector<Simplex> triangulate_on_facet(int dim, const std::vector<HalfSpace>& ineq,
                                          const HalfSpace& facet) {
  auto pts = enumerate_vertices(dim, ineq, {facet});
  std::vector<Simplex> out;
  if (pts.empty()) return out;
  if (dim == 1) {
    out.push_back({{pts.front()}, 1});
    return out;
  }
  const RVec& n = facet.normal;
  if (dim == 2) {
    if (pts.size() < 2) return out;
    const RVec d = sub(pts.back(), pts.front());
    // d = lambda * (-n1, n0); lattice length is |lambda|
    const Rational lambda = (n[1] != 0) ? d[0] / (-n[1]) : d[1] / n[0];
    if (lambda != 0) out.push_back({{pts.front(), pts.back()}, abs(lambda)});
    return out;
  }
  const auto poly = planar_polygon(pts, n);
  if (poly.empty()) return out;
  std::size_t j = 0;
  while (n[j] == 0) ++j;
  for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
    const RVec c = cross(sub(poly[k], poly[0]), sub(poly[k + 1], poly[0]));
    const Rational mass = abs(c[j] / n[j]) / 2;
    if (mass > 0) out.push_back({{poly[0], poly[k], poly[k + 1]}, mass});
  }
  return out;
}

Rational total_measure(const std::vector<Simplex>& simplices) {
  Rational s = 0;
  for (const auto& t : simplices) s += t.measure;
  return s;
}

}  // namespace geom

namespace {

BigInt gcd_abs(BigInt a, BigInt b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    BigInt t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool is_integer_vector(const RVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return denominator(x) == 1; });
}

int rank_of(std::vector<RVec> rows, int dim) {
  int rank = 0;
  for (int col = 0; col < dim && rank < static_cast<int>(rows.size()); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      const Rational f = rows[r][col] / rows[rank][col];
      for (int c = col; c < dim; ++c) rows[r][c] -= f * rows[rank][c];
    }
    ++rank;
  }
  return rank;
}

// Candidate extreme rays of the recession cone {d : N d >= 0}.
std::vector<RVec> ray_candidates(int dim, const std::vector<HalfSpace>& facets) {
  std::vector<RVec> out;
  if (dim == 1) return {{Rational(1)}, {Rational(-1)}};
  for (std::size_t i = 0; i < facets.size(); ++i) {
    const RVec& a = facets[i].normal;
    if (dim == 2) {
      out.push_back({-a[1], a[0]});
      out.push_back({a[1], -a[0]});
      continue;
    }
    for (std::size_t j = i + 1; j < facets.size(); ++j) {
      const RVec& b = facets[j].normal;
      RVec c = {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
      if (c[0] == 0 && c[1] == 0 && c[2] == 0) continue;
      RVec neg = {-c[0], -c[1], -c[2]};
      out.push_back(std::move(c));
      out.push_back(std::move(neg));
    }
  }
  return out;
}

}  // namespace

Polytope Polytope::create(std::string name, int dim, std::vector<HalfSpace> facets) {
  if (dim < 1 || dim > 3) throw Error(ErrorKind::BadDocument, "dimension must be 1..3");
  if (facets.empty()) throw Error(ErrorKind::Unbounded, "no facets");
  for (const auto& f : facets) {
    if (static_cast<int>(f.normal.size()) != dim)
      throw Error(ErrorKind::BadDocument, "facet normal has wrong length");
    if (!is_integer_vector(f.normal)) throw Error(ErrorKind::NonPrimitiveNormal, "normal is not an integer vector");
    BigInt g = 0;
    for (const auto& x : f.normal) g = gcd_abs(g, numerator(x));
    if (g != 1) throw Error(ErrorKind::NonPrimitiveNormal, "normal is zero or not primitive");
  }
  std::vector<RVec> normals;
  for (const auto& f : facets) normals.push_back(f.normal);
  if (rank_of(normals, dim) < dim) throw Error(ErrorKind::Unbounded, "normals do not span");
  for (const auto& d : ray_candidates(dim, facets)) {
    const bool recedes = std::all_of(facets.begin(), facets.end(),
                                     [&](const HalfSpace& h) { return dot(h.normal, d) >= 0; });
    if (recedes) throw Error(ErrorKind::Unbounded, "polytope contains a ray");
  }

  Polytope p;
  p.name_ = std::move(name);
  p.dim_ = dim;
  p.facets_ = std::move(facets);
  p.vertices_ = geom::enumerate_vertices(dim, p.facets_);
  p.interior_ = geom::triangulate(dim, p.facets_);
  p.volume_ = geom::total_measure(p.interior_);
  if (p.volume_ == 0) throw Error(ErrorKind::EmptyInterior, "polytope has empty interior");

  for (std::size_t k = 0; k < p.facets_.size(); ++k) {
    for (std::size_t l = 0; l < k; ++l) {
      if (p.facets_[k].normal == p.facets_[l].normal)
        throw Error(ErrorKind::RedundantFacet, "facets " + std::to_string(l) + " and " + std::to_string(k) + " are parallel duplicates");
    }
    const auto piece = geom::triangulate_on_facet(dim, p.facets_, p.facets_[k]);
    if (geom::total_measure(piece) == 0)
      throw Error(ErrorKind::RedundantFacet, "facet " + std::to_string(k) + " does not support a face of codimension one");
    p.boundary_mass_ += geom::total_measure(piece);
  }

  for (const auto& v : p.vertices_) {
    std::vector<RVec> tight;
    for (const auto& f : p.facets_)
      if (f.evaluate(v) == 0) tight.push_back(f.normal);
    if (static_cast<int>(tight.size()) != dim)
      throw Error(ErrorKind::NotDelzant, "vertex is not simple (" + std::to_string(tight.size()) + " facets meet)");
    const Rational d = geom::det(tight);
    if (d != 1 && d != -1) throw Error(ErrorKind::NotDelzant, "vertex normals are not a lattice basis (det " + to_string(d) + ")");
  }

  p.barycenter_ = RVec(dim, 0);
  for (int j = 0; j < dim; ++j) {
    p.barycenter_[j] = integrate(p, Polynomial::variable(j), Region::Interior) / p.volume_;
  }
  return p;
}

double Polytope::facet_density(std::size_t k) const {
  if (dim_ == 1) return 1.0;
  double s = 0.0;
  for (const auto& x : facets_.at(k).normal) s += to_double(x) * to_double(x);
  return 1.0 / std::sqrt(s);
}

std::vector<std::pair<Rational, Rational>> Polytope::bounding_box() const {
  std::vector<std::pair<Rational, Rational>> box(dim_, {vertices_[0][0], vertices_[0][0]});
  for (int j = 0; j < dim_; ++j) box[j] = {vertices_[0][j], vertices_[0][j]};
  for (const auto& v : vertices_) {
    for (int j = 0; j < dim_; ++j) {
      box[j].first = std::min(box[j].first, v[j]);
      box[j].second = std::max(box[j].second, v[j]);
    }
  }
  return box;
}

bool Polytope::contains(const RVec& x) const {
  return std::all_of(facets_.begin(), facets_.end(), [&](const HalfSpace& h) { return h.evaluate(x) >= 0; });
}

Polytope Polytope::translated(const RVec& shift) const {
  std::vector<HalfSpace> moved = facets_;
  for (auto& h : moved) h.offset -= dot(h.normal, shift);
  return create(name_, dim_, std::move(moved));
}

RVec measure(const Polytope& p, MeasureKind kind) {
  switch (kind) {
    case MeasureKind::Volume: return {p.volume()};
    case MeasureKind::BoundaryMass: return {p.boundary_mass()};
    case MeasureKind::AverageA: return {p.average_A()};
    case MeasureKind::Barycenter: return p.barycenter();
  }
  return {};
}

namespace {

std::vector<HalfSpace> with_cell(const Polytope& p, const std::vector<HalfSpace>& cell) {
  std::vector<HalfSpace> all = p.facets();
  all.insert(all.end(), cell.begin(), cell.end());
  return all;
}

void check_tiling(const Polytope& p, const PiecewisePolynomial& f) {
  Rational covered = 0;
  std::vector<std::vector<HalfSpace>> regions;
  for (const auto& c : f) {
    regions.push_back(with_cell(p, c.constraints));
    covered += geom::total_measure(geom::triangulate(p.dim(), regions.back()));
  }
  if (covered != p.volume())
    throw Error(ErrorKind::SubdivisionGap, "cells cover volume " + to_string(covered) + " of " + to_string(p.volume()));
  // equal total volume plus pairwise null overlaps means an exact tiling
  for (std::size_t i = 0; i < regions.size(); ++i) {
    for (std::size_t j = i + 1; j < regions.size(); ++j) {
      auto both = regions[i];
      both.insert(both.end(), f[j].constraints.begin(), f[j].constraints.end());
      if (!geom::triangulate(p.dim(), both).empty())
        throw Error(ErrorKind::SubdivisionGap, "cells " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
    }
  }
}

}  // namespace

Rational integrate(const Polytope& p, const PiecewisePolynomial& f, Region region) {
  check_tiling(p, f);
  Rational total = 0;
  for (const auto& cell : f) {
    const auto all = with_cell(p, cell.constraints);
    const auto interior = geom::triangulate(p.dim(), all);
    if (interior.empty()) continue;
    if (region == Region::Interior) {
      for (const auto& s : interior) total += integrate_over_simplex(cell.poly, s.verts, s.measure);
      continue;
    }
    for (const auto& facet : p.facets()) {
      for (const auto& s : geom::triangulate_on_facet(p.dim(), all, facet)) {
        total += integrate_over_simplex(cell.poly, s.verts, s.measure);
      }
    }
  }
  return total;
}

Rational integrate(const Polytope& p, const Polynomial& f, Region region) {
  Rational total = 0;
  if (region == Region::Interior) {
    for (const auto& s : p.interior_simplices()) total += integrate_over_simplex(f, s.verts, s.measure);
    return total;
  }
  for (const auto& facet : p.facets()) {
    for (const auto& s : geom::triangulate_on_facet(p.dim(), p.facets(), facet)) {
      total += integrate_over_simplex(f, s.verts, s.measure);
    }
  }
  return total;
}

Polytope polytope_from_json(const nlohmann::json& doc) {
  try {
    const std::string name = doc.at("name").get<std::string>();
    const int dim = doc.at("dim").get<int>();
    std::vector<HalfSpace> facets;
    for (const auto& f : doc.at("facets")) {
      HalfSpace h;
      for (const auto& x : f.at("normal")) {
        if (!x.is_number_integer()) throw Error(ErrorKind::NonPrimitiveNormal, "normal entries must be integers");
        h.normal.push_back(Rational(x.get<long long>()));
      }
      const auto& off = f.at("offset");
      if (!off.is_string()) throw Error(ErrorKind::BadDocument, "offset must be a rational string such as \"1/2\"");
      h.offset = parse_rational(off.get<std::string>());
      facets.push_back(std::move(h));
    }
    return Polytope::create(name, dim, std::move(facets));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::BadDocument, std::string("polytope document: ") + e.what());
  }
}

nlohmann::json polytope_to_json(const Polytope& p) {
  nlohmann::json facets = nlohmann::json::array();
  for (const auto& f : p.facets()) {
    nlohmann::json normal = nlohmann::json::array();
    for (const auto& x : f.normal) normal.push_back(numerator(x).convert_to<long long>());
    facets.push_back({{"normal", normal}, {"offset", to_string(f.offset)}});
  }
  return {{"name", p.name()}, {"dim", p.dim()}, {"facets", facets}};
}

Polytope standard_polytope(const std::string& name) {
  auto h = [](std::initializer_list<long> n, const Rational& c) {
    HalfSpace s;
    for (long x : n) s.normal.push_back(Rational(x));
    s.offset = c;
    return s;
  };
  if (name == "interval") return Polytope::create(name, 1, {h({1}, 0), h({-1}, 1)});
  if (name == "square") return Polytope::create(name, 2, {h({1, 0}, 0), h({0, 1}, 0), h({-1, 0}, 1), h({0, -1}, 1)});
  if (name == "simplex") return Polytope::create(name, 2, {h({1, 0}, 0), h({0, 1}, 0), h({-1, -1}, 1)});
  if (name == "trapezoid") return Polytope::create(name, 2, {h({1, 0}, 0), h({0, 1}, 0), h({0, -1}, 1), h({-1, -1}, 2)});
  if (name == "cube")
    return Polytope::create(name, 3, {h({1, 0, 0}, 0), h({0, 1, 0}, 0), h({0, 0, 1}, 0), h({-1, 0, 0}, 1), h({0, -1, 0}, 1), h({0, 0, -1}, 1)});
  if (name == "simplex3")
    return Polytope::create(name, 3, {h({1, 0, 0}, 0), h({0, 1, 0}, 0), h({0, 0, 1}, 0), h({-1, -1, -1}, 1)});
  throw Error(ErrorKind::BadDocument, "unknown standard polytope '" + name + "'");
}

}  // namespace csck
