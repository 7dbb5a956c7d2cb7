#include "csck/stability.hpp"

#include "csck/error.hpp"
#include "csck/parallel.hpp"

#include <algorithm>

namespace csck {

double AffinePiece::evaluate(const std::vector<double>& x) const {
  double s = to_double(b);
  for (std::size_t j = 0; j < a.size(); ++j) s += to_double(a[j]) * x[j];
  return s;
}

PLConvexFn::PLConvexFn(std::vector<AffinePiece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw Error(ErrorKind::BadDocument, "PL function needs at least one piece");
  const auto d = pieces_.front().a.size();
  for (const auto& p : pieces_) {
    if (p.a.size() != d) throw Error(ErrorKind::BadDocument, "PL pieces have inconsistent dimension");
  }
  std::sort(pieces_.begin(), pieces_.end());
  pieces_.erase(std::unique(pieces_.begin(), pieces_.end()), pieces_.end());
}

PLConvexFn PLConvexFn::affine(RVec a, Rational b) { return PLConvexFn({{std::move(a), std::move(b)}}); }

PLConvexFn PLConvexFn::crease(RVec a, Rational c) {
  RVec zero(a.size(), 0);
  return PLConvexFn({{std::move(zero), 0}, {std::move(a), -c}});
}

PLConvexFn PLConvexFn::crease_pair(const RVec& a1, const Rational& c1, const RVec& a2, const Rational& c2) {
  return crease(a1, c1) + crease(a2, c2);
}

Rational PLConvexFn::evaluate(const RVec& x) const {
  Rational best = pieces_.front().evaluate(x);
  for (const auto& p : pieces_) best = std::max(best, p.evaluate(x));
  return best;
}

double PLConvexFn::evaluate(const std::vector<double>& x) const {
  double best = pieces_.front().evaluate(x);
  for (const auto& p : pieces_) best = std::max(best, p.evaluate(x));
  return best;
}

PiecewisePolynomial PLConvexFn::linearity_cells(const Polytope& p) const {
  PiecewisePolynomial cells;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    std::vector<HalfSpace> cons;
    bool dominated = false;
    for (std::size_t j = 0; j < pieces_.size(); ++j) {
      if (i == j) continue;
      HalfSpace h;
      h.normal.resize(pieces_[i].a.size());
      for (std::size_t k = 0; k < h.normal.size(); ++k) h.normal[k] = pieces_[i].a[k] - pieces_[j].a[k];
      h.offset = pieces_[i].b - pieces_[j].b;
      const bool constant = std::all_of(h.normal.begin(), h.normal.end(), [](const Rational& x) { return x == 0; });
      if (constant) {
        if (h.offset < 0) dominated = true;
        continue;
      }
      cons.push_back(std::move(h));
    }
    if (dominated) continue;
    auto region = p.facets();
    region.insert(region.end(), cons.begin(), cons.end());
    if (geom::triangulate(p.dim(), region).empty()) continue;
    cells.push_back({std::move(cons), pieces_[i].polynomial()});
  }
  return cells;
}

bool PLConvexFn::is_affine_on(const Polytope& p) const { return linearity_cells(p).size() == 1; }

PLConvexFn PLConvexFn::scaled(const Rational& s) const {
  if (s < 0) throw Error(ErrorKind::BadDocument, "negative multiple of a convex function");
  auto pieces = pieces_;
  for (auto& q : pieces) {
    for (auto& x : q.a) x *= s;
    q.b *= s;
  }
  return PLConvexFn(std::move(pieces));
}

PLConvexFn operator+(const PLConvexFn& f, const PLConvexFn& g) {
  std::vector<AffinePiece> out;
  for (const auto& p : f.pieces()) {
    for (const auto& q : g.pieces()) {
      AffinePiece s = p;
      for (std::size_t k = 0; k < s.a.size(); ++k) s.a[k] += q.a[k];
      s.b += q.b;
      out.push_back(std::move(s));
    }
  }
  return PLConvexFn(std::move(out));
}

Rational lp_functional(const Polytope& p, const PiecewisePolynomial& f) {
  return integrate(p, f, Region::Boundary) - p.average_A() * integrate(p, f, Region::Interior);
}

Rational lp_functional(const Polytope& p, const PLConvexFn& f) {
  return lp_functional(p, f.linearity_cells(p));
}

Rational lp_functional(const Polytope& p, const Polynomial& f) {
  return integrate(p, f, Region::Boundary) - p.average_A() * integrate(p, f, Region::Interior);
}

bool NormalizedPL::is_zero() const {
  return std::all_of(f_tilde.begin(), f_tilde.end(), [](const PolyCell& c) { return c.poly.is_zero(); });
}

NormalizedPL normalize_pl(const Polytope& p, const PiecewisePolynomial& f) {
  const int d = p.dim();
  std::vector<Polynomial> basis{Polynomial(Rational(1))};
  for (int j = 0; j < d; ++j) basis.push_back(Polynomial::variable(j));
  std::vector<RVec> gram(d + 1, RVec(d + 1));
  RVec rhs(d + 1);
  for (int k = 0; k <= d; ++k) {
    for (int l = 0; l <= d; ++l) gram[k][l] = integrate(p, basis[k] * basis[l], Region::Interior);
    PiecewisePolynomial weighted = f;
    for (auto& c : weighted) c.poly = c.poly * basis[k];
    rhs[k] = integrate(p, weighted, Region::Interior);
  }
  auto coef = geom::solve_exact(gram, rhs);
  if (!coef) throw Error(ErrorKind::DegenerateGram, "affine Gram matrix is singular on " + p.name());
  AffinePiece affine{RVec(coef->begin() + 1, coef->end()), (*coef)[0]};
  NormalizedPL out{f, affine};
  const Polynomial ap = affine.polynomial();
  for (auto& c : out.f_tilde) c.poly -= ap;
  return out;
}

NormalizedPL normalize_pl(const Polytope& p, const PLConvexFn& f) {
  return normalize_pl(p, f.linearity_cells(p));
}

namespace {

// Reads an affine polynomial back as (a, b).
AffinePiece affine_of(const Polynomial& poly, int dim) {
  if (poly.degree() > 1) throw Error(ErrorKind::BadDocument, "expected a piecewise-affine function");
  AffinePiece out{RVec(dim, 0), 0};
  for (const auto& [e, c] : poly.terms()) {
    int j = -1;
    for (int k = 0; k < 3; ++k)
      if (e[k] == 1) j = k;
    if (j < 0) {
      out.b = c;
    } else {
      out.a.at(j) = c;
    }
  }
  return out;
}

Rational signed_part(const Polytope& p, const std::vector<HalfSpace>& cell, const AffinePiece& g, int sign) {
  auto region = p.facets();
  region.insert(region.end(), cell.begin(), cell.end());
  HalfSpace side{g.a, g.b};
  if (sign < 0) {
    for (auto& x : side.normal) x = -x;
    side.offset = -side.offset;
  }
  region.push_back(side);
  Rational s = 0;
  for (const auto& t : geom::triangulate(p.dim(), region)) s += integrate_over_simplex(g.polynomial(), t.verts, t.measure);
  return s;
}

}  // namespace

Rational abs_integral(const Polytope& p, const PiecewisePolynomial& g) {
  Rational total = 0;
  for (const auto& cell : g) {
    if (cell.poly.is_zero()) continue;
    const AffinePiece piece = affine_of(cell.poly, p.dim());
    const bool constant = std::all_of(piece.a.begin(), piece.a.end(), [](const Rational& x) { return x == 0; });
    if (constant) {
      auto region = p.facets();
      region.insert(region.end(), cell.constraints.begin(), cell.constraints.end());
      const Rational vol = geom::total_measure(geom::triangulate(p.dim(), region));
      total += (piece.b < 0 ? Rational(-piece.b) : piece.b) * vol;
      continue;
    }
    total += signed_part(p, cell.constraints, piece, 1) - signed_part(p, cell.constraints, piece, -1);
  }
  return total;
}

FutakiResult futaki(const Polytope& p) {
  FutakiResult r;
  for (int j = 0; j < p.dim(); ++j) r.gradient.push_back(lp_functional(p, Polynomial::variable(j)));
  r.constant = lp_functional(p, Polynomial(Rational(1)));
  return r;
}

std::string to_string(Criterion c) { return c == Criterion::K ? "K" : "uniform"; }

Criterion criterion_from_string(const std::string& s) {
  if (s == "K" || s == "k" || s == "filtrated") return Criterion::K;
  if (s == "uniform" || s == "L1") return Criterion::Uniform;
  throw Error(ErrorKind::BadDocument, "unknown criterion '" + s + "' (expected K, filtrated, uniform or L1)");
}

namespace {

bool vanishes_on(const Polytope& p, const Crease& c) {
  return std::all_of(p.vertices().begin(), p.vertices().end(),
                     [&](const RVec& v) { return dot(c.a, v) - c.c <= 0; });
}

PLConvexFn candidate_fn(const std::vector<Crease>& creases) {
  PLConvexFn f = PLConvexFn::crease(creases[0].a, creases[0].c);
  for (std::size_t k = 1; k < creases.size(); ++k) f = f + PLConvexFn::crease(creases[k].a, creases[k].c);
  return f;
}

}  // namespace

StabilityReport stability_scan(const Polytope& p, const ScanFamily& family, Criterion criterion, unsigned jobs) {
  std::vector<Crease> singles;
  for (const auto& d : family.directions) {
    if (static_cast<int>(d.a.size()) != p.dim())
      throw Error(ErrorKind::BadDocument, "scan direction has wrong dimension");
    for (const auto& c : d.offsets) singles.push_back({d.a, c});
  }
  std::sort(singles.begin(), singles.end());
  singles.erase(std::unique(singles.begin(), singles.end()), singles.end());
  if (singles.empty()) throw Error(ErrorKind::EmptyFamily, "scan family has no candidates");

  std::size_t skipped = 0;
  std::vector<Crease> live;
  for (const auto& s : singles) {
    if (vanishes_on(p, s)) {
      ++skipped;
    } else {
      live.push_back(s);
    }
  }
  std::vector<std::vector<Crease>> keys;
  for (const auto& s : live) keys.push_back({s});
  if (family.include_pairs) {
    for (std::size_t i = 0; i < live.size(); ++i)
      for (std::size_t j = i + 1; j < live.size(); ++j) keys.push_back({live[i], live[j]});
  }
  std::sort(keys.begin(), keys.end());

  std::vector<ScanRow> rows(keys.size());
  parallel_for(keys.size(), jobs, [&](std::size_t i) {
    const auto cells = candidate_fn(keys[i]).linearity_cells(p);
    ScanRow& row = rows[i];
    row.creases = keys[i];
    row.lp = lp_functional(p, cells);
    row.abs_tilde = abs_integral(p, normalize_pl(p, cells).f_tilde);
    if (row.abs_tilde > 0) row.ratio = row.lp / row.abs_tilde;
  });

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (criterion == Criterion::K) {
      if (!best || rows[i].lp < rows[*best].lp) best = i;
    } else if (!rows[i].ratio) {
      ++skipped;
    } else if (!best || *rows[i].ratio < *rows[*best].ratio) {
      best = i;
    }
  }
  if (!best) throw Error(ErrorKind::EmptyFamily, "every candidate was skipped (zero on P or affine after normalization)");

  StabilityReport report{criterion, 0, std::nullopt, candidate_fn(keys[*best]), keys[*best], rows.size(), skipped, {}};
  if (criterion == Criterion::K) {
    report.min_value = rows[*best].lp;
  } else {
    report.min_value = *rows[*best].ratio;
    report.margin = std::max(Rational(0), report.min_value);
    report.scan_size = rows.size() - (skipped - (singles.size() - live.size()));
  }
  report.rows = std::move(rows);
  return report;
}

}  // namespace csck
