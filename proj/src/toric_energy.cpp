#include "csck/toric_energy.hpp"

#include "csck/error.hpp"
#include "csck/format.hpp"
#include "csck/quadrature.hpp"
#include "csck/spline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace csck {

namespace {

double sigmoid(double z) { return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z)); }

double xlogx(double l) { return l > 0 ? l * std::log(l) : 0.0; }

struct FacetD {
  std::vector<double> nu;
  double c;
  double eval(const Point& x) const {
    double s = c;
    for (std::size_t j = 0; j < nu.size(); ++j) s += nu[j] * x[j];
    return s;
  }
};

std::vector<FacetD> facets_d(const Polytope& p) {
  std::vector<FacetD> out;
  for (const auto& f : p.facets()) out.push_back({to_double(f.normal), to_double(f.offset)});
  return out;
}

std::string where(const Point& x) {
  std::ostringstream s;
  s << "at x = (";
  for (std::size_t j = 0; j < x.size(); ++j) s << (j ? ", " : "") << x[j];
  s << ")";
  return s.str();
}

}  // namespace

double Guillemin::value(const Polytope& p, const Point& x) {
  double s = 0;
  for (const auto& f : facets_d(p)) s += xlogx(f.eval(x));
  return 0.5 * s;
}

Point Guillemin::gradient(const Polytope& p, const Point& x) {
  Point g(p.dim(), 0.0);
  for (const auto& f : facets_d(p)) {
    const double l = f.eval(x);
    for (int j = 0; j < p.dim(); ++j) g[j] += 0.5 * (std::log(l) + 1.0) * f.nu[j];
  }
  return g;
}

std::vector<double> Guillemin::hessian(const Polytope& p, const Point& x) {
  const int d = p.dim();
  std::vector<double> h(d * d, 0.0);
  for (const auto& f : facets_d(p)) {
    const double l = f.eval(x);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) h[i * d + j] += 0.5 * f.nu[i] * f.nu[j] / l;
  }
  return h;
}

SymplecticPotential::SymplecticPotential(std::shared_ptr<const Polytope> p, int n, std::vector<double> v)
    : poly_(std::move(p)), n_(n), v_(std::move(v)) {
  if (poly_->dim() > 2) throw Error(ErrorKind::BadDocument, "symplectic potentials are supported in dimension 1 and 2");
  if (n_ < 4) throw Error(ErrorKind::GridMismatch, "grid needs at least 4 intervals");
  std::size_t expect = 1;
  for (int j = 0; j < poly_->dim(); ++j) expect *= static_cast<std::size_t>(n_ + 1);
  if (v_.size() != expect)
    throw Error(ErrorKind::GridMismatch, "correction has " + std::to_string(v_.size()) + " values, grid has " + std::to_string(expect));
  for (double x : v_)
    if (!std::isfinite(x)) throw Error(ErrorKind::BadDocument, "correction has non-finite values");
  for (const auto& [lo, hi] : poly_->bounding_box()) {
    lo_.push_back(to_double(lo));
    hi_.push_back(to_double(hi));
  }
}

SymplecticPotential SymplecticPotential::guillemin(std::shared_ptr<const Polytope> p, int n) {
  if (n < 16) throw Error(ErrorKind::GridMismatch, "Guillemin potential needs N >= 16");
  std::size_t count = 1;
  for (int j = 0; j < p->dim(); ++j) count *= static_cast<std::size_t>(n + 1);
  return SymplecticPotential(std::move(p), n, std::vector<double>(count, 0.0));
}

SymplecticPotential SymplecticPotential::from_function(std::shared_ptr<const Polytope> p, int n,
                                                       const std::function<double(const Point&)>& v) {
  auto u = guillemin(std::move(p), n);
  u.v_ = u.sample(v);
  return u;
}

Point SymplecticPotential::node(std::size_t index) const {
  if (dim() == 1) return {coord(0, static_cast<int>(index))};
  return {coord(0, static_cast<int>(index / (n_ + 1))), coord(1, static_cast<int>(index % (n_ + 1)))};
}

bool SymplecticPotential::same_grid(const SymplecticPotential& o) const {
  return o.n_ == n_ && o.lo_ == lo_ && o.hi_ == hi_ && o.dim() == dim() &&
         o.poly_->facets().size() == poly_->facets().size() &&
         std::equal(o.poly_->facets().begin(), o.poly_->facets().end(), poly_->facets().begin(),
                    [](const HalfSpace& a, const HalfSpace& b) { return a.normal == b.normal && a.offset == b.offset; });
}

void require_same_grid(const SymplecticPotential& a, const SymplecticPotential& b) {
  if (!a.same_grid(b)) throw Error(ErrorKind::GridMismatch, "potentials live on different polytopes or grids");
}

SymplecticPotential SymplecticPotential::plus(const std::vector<double>& dv, double s) const {
  if (dv.size() != v_.size()) throw Error(ErrorKind::GridMismatch, "increment does not match the grid");
  auto out = *this;
  for (std::size_t i = 0; i < v_.size(); ++i) out.v_[i] += s * dv[i];
  return out;
}

std::vector<double> SymplecticPotential::sample(const std::function<double(const Point&)>& f) const {
  std::vector<double> out(v_.size());
  for (std::size_t i = 0; i < v_.size(); ++i) out[i] = f(node(i));
  return out;
}

namespace {

// --- dimension 1 helpers -------------------------------------------------

// 3-point second difference at interior nodes (0 at the two ends).
std::vector<double> second_diff_3pt(const std::vector<double>& v, double h) {
  std::vector<double> d(v.size(), 0.0);
  for (std::size_t i = 1; i + 1 < v.size(); ++i) d[i] = (v[i - 1] - 2 * v[i] + v[i + 1]) / (h * h);
  return d;
}

// 4th-order centred second difference, 3-point next to the ends.
std::vector<double> second_diff_4th(const std::vector<double>& v, double h) {
  const std::size_t n = v.size() - 1;
  std::vector<double> d = second_diff_3pt(v, h);
  for (std::size_t i = 2; i + 2 <= n; ++i)
    d[i] = (-v[i - 2] + 16 * v[i - 1] - 30 * v[i] + 16 * v[i + 1] - v[i + 2]) / (12 * h * h);
  return d;
}

// Composite Simpson; an odd interval count closes with the 3/8 rule.
double simpson(const std::vector<double>& f, double h) {
  const std::size_t n = f.size() - 1;
  const std::size_t even = (n % 2 == 0) ? n : n - 3;
  double s = 0;
  for (std::size_t i = 0; i + 2 <= even; i += 2) s += h / 3 * (f[i] + 4 * f[i + 1] + f[i + 2]);
  if (even != n) s += 3 * h / 8 * (f[n - 3] + 3 * f[n - 2] + 3 * f[n - 1] + f[n]);
  return s;
}

double guillemin_d2_1d(double a, double b, double x) { return 0.5 * (1.0 / (x - a) + 1.0 / (b - x)); }

double trapezoid(const std::vector<double>& f, double h) {
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * h;
}

double entropy_1d(const SymplecticPotential& u) {
  const double a = u.lo(0), b = u.hi(0), h = u.h(0);
  const auto d2 = second_diff_3pt(u.v(), h);
  double s = 0;
  for (int i = 1; i < u.n(); ++i) {
    const double x = u.coord(0, i);
    const double g = guillemin_d2_1d(a, b, x);
    const double uu = g + d2[i];
    if (!(uu > 0)) throw Error(ErrorKind::HessianDegenerate, "u'' = " + format_double(uu) + " " + where({x}));
    s += std::log(uu / g);
  }
  return -0.5 * h * s;
}

double lp_1d(const SymplecticPotential& u) {
  const auto& p = u.polytope();
  return u.v().front() + u.v().back() - to_double(p.average_A()) * trapezoid(u.v(), u.h(0));
}

// --- dimension 2 helpers -------------------------------------------------

struct Grid2 {
  const SymplecticPotential& u;
  int n;
  double hx, hy;

  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * (n + 1) + j; }

  // cell index and local coordinates of a point
  void locate(const Point& x, int& i, int& j, double& s, double& t) const {
    const double fx = (x[0] - u.lo(0)) / hx, fy = (x[1] - u.lo(1)) / hy;
    i = std::clamp(static_cast<int>(std::floor(fx)), 0, n - 1);
    j = std::clamp(static_cast<int>(std::floor(fy)), 0, n - 1);
    s = fx - i;
    t = fy - j;
  }

  double interp(const std::vector<double>& f, const Point& x) const {
    int i, j;
    double s, t;
    locate(x, i, j, s, t);
    return (1 - s) * (1 - t) * f[idx(i, j)] + s * (1 - t) * f[idx(i + 1, j)] + (1 - s) * t * f[idx(i, j + 1)] +
           s * t * f[idx(i + 1, j + 1)];
  }
};

// First derivative along a line of samples: centred inside, one-sided 2nd order at the ends.
double d1(const std::vector<double>& f, std::size_t k, std::size_t n, std::size_t stride, std::size_t base, double h) {
  auto at = [&](std::size_t m) { return f[base + m * stride]; };
  if (k == 0) return (-3 * at(0) + 4 * at(1) - at(2)) / (2 * h);
  if (k == n) return (3 * at(n) - 4 * at(n - 1) + at(n - 2)) / (2 * h);
  return (at(k + 1) - at(k - 1)) / (2 * h);
}

double d2(const std::vector<double>& f, std::size_t k, std::size_t n, std::size_t stride, std::size_t base, double h) {
  auto at = [&](std::size_t m) { return f[base + m * stride]; };
  if (k == 0) return (2 * at(0) - 5 * at(1) + 4 * at(2) - at(3)) / (h * h);
  if (k == n) return (2 * at(n) - 5 * at(n - 1) + 4 * at(n - 2) - at(n - 3)) / (h * h);
  return (at(k - 1) - 2 * at(k) + at(k + 1)) / (h * h);
}

struct NodalHessian {
  std::vector<double> xx, xy, yy;
};

NodalHessian nodal_hessian(const SymplecticPotential& u) {
  const std::size_t n = u.n(), m = n + 1;
  const double hx = u.h(0), hy = u.h(1);
  const auto& v = u.v();
  NodalHessian H{std::vector<double>(m * m), std::vector<double>(m * m), std::vector<double>(m * m)};
  std::vector<double> vy(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      H.xx[i * m + j] = d2(v, i, n, m, j, hx);
      H.yy[i * m + j] = d2(v, j, n, 1, i * m, hy);
      vy[i * m + j] = d1(v, j, n, 1, i * m, hy);
    }
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) H.xy[i * m + j] = d1(vy, i, n, m, j, hx);
  return H;
}

struct QuadPoint {
  Point x;
  double w;
};

// Interior rule on P: each simplex of P split into k^2 similar triangles, 3 interior points each.
std::vector<QuadPoint> interior_rule_2d(const Polytope& p, int k) {
  std::vector<QuadPoint> out;
  static const double bary[3][3] = {{2.0 / 3, 1.0 / 6, 1.0 / 6}, {1.0 / 6, 2.0 / 3, 1.0 / 6}, {1.0 / 6, 1.0 / 6, 2.0 / 3}};
  for (const auto& s : p.interior_simplices()) {
    const auto A = to_double(s.verts[0]), B = to_double(s.verts[1]), C = to_double(s.verts[2]);
    const double area = to_double(s.measure) / (k * k);
    auto pt = [&](double i, double j) {
      return Point{A[0] + (B[0] - A[0]) * i / k + (C[0] - A[0]) * j / k, A[1] + (B[1] - A[1]) * i / k + (C[1] - A[1]) * j / k};
    };
    auto emit = [&](const Point& P0, const Point& P1, const Point& P2) {
      for (const auto& l : bary)
        out.push_back({{l[0] * P0[0] + l[1] * P1[0] + l[2] * P2[0], l[0] * P0[1] + l[1] * P1[1] + l[2] * P2[1]}, area / 3});
    };
    for (int i = 0; i < k; ++i) {
      for (int j = 0; i + j < k; ++j) {
        emit(pt(i, j), pt(i + 1, j), pt(i, j + 1));
        if (i + j + 2 <= k) emit(pt(i + 1, j), pt(i + 1, j + 1), pt(i, j + 1));
      }
    }
  }
  return out;
}

// Boundary rule: composite 3-point Gauss on each facet segment, weights in the lattice measure.
std::vector<QuadPoint> boundary_rule_2d(const Polytope& p, int panels) {
  const auto g = gauss_unit<3>();
  std::vector<QuadPoint> out;
  for (const auto& f : p.facets()) {
    for (const auto& s : geom::triangulate_on_facet(2, p.facets(), f)) {
      const auto A = to_double(s.verts[0]), B = to_double(s.verts[1]);
      const double mass = to_double(s.measure);
      for (int k = 0; k < panels; ++k) {
        for (std::size_t q = 0; q < g.x.size(); ++q) {
          const double r = (k + g.x[q]) / panels;
          out.push_back({{A[0] + (B[0] - A[0]) * r, A[1] + (B[1] - A[1]) * r}, mass * g.w[q] / panels});
        }
      }
    }
  }
  return out;
}

double entropy_2d(const SymplecticPotential& u) {
  const Grid2 grid{u, u.n(), u.h(0), u.h(1)};
  const auto H = nodal_hessian(u);
  double s = 0;
  for (const auto& q : interior_rule_2d(u.polytope(), u.n())) {
    const auto G = Guillemin::hessian(u.polytope(), q.x);
    const double a = G[0] + grid.interp(H.xx, q.x);
    const double b = G[1] + grid.interp(H.xy, q.x);
    const double c = G[3] + grid.interp(H.yy, q.x);
    const double det = a * c - b * b;
    if (!(det > 0 && a > 0)) throw Error(ErrorKind::HessianDegenerate, "Hess u not positive definite " + where(q.x));
    s += q.w * std::log(det / (G[0] * G[3] - G[1] * G[2]));
  }
  return -0.5 * s;
}

double lp_2d(const SymplecticPotential& u) {
  const Grid2 grid{u, u.n(), u.h(0), u.h(1)};
  double boundary = 0, interior = 0;
  for (const auto& q : boundary_rule_2d(u.polytope(), u.n())) boundary += q.w * grid.interp(u.v(), q.x);
  for (const auto& q : interior_rule_2d(u.polytope(), u.n())) interior += q.w * grid.interp(u.v(), q.x);
  return boundary - to_double(u.polytope().average_A()) * interior;
}

void require_dim1(const SymplecticPotential& u, const char* op) {
  if (u.dim() != 1) throw Error(ErrorKind::BadDocument, std::string(op) + " is implemented in dimension 1 only");
}

}  // namespace

SymplecticPotential SymplecticPotential::gauged() const {
  double mean;
  if (dim() == 1) {
    mean = trapezoid(v_, h(0)) / to_double(poly_->volume());
  } else {
    const Grid2 grid{*this, n_, h(0), h(1)};
    double s = 0;
    for (const auto& q : interior_rule_2d(*poly_, n_)) s += q.w * grid.interp(v_, q.x);
    mean = s / to_double(poly_->volume());
  }
  auto out = *this;
  for (auto& x : out.v_) x -= mean;
  return out;
}

std::vector<double> node_weights(const SymplecticPotential& u) {
  if (u.dim() == 1) return trapezoid_weights(u.n(), u.h(0));
  const Grid2 grid{u, u.n(), u.h(0), u.h(1)};
  std::vector<double> w(u.node_count(), 0.0);
  for (const auto& q : interior_rule_2d(u.polytope(), u.n())) {
    int i, j;
    double s, t;
    grid.locate(q.x, i, j, s, t);
    w[grid.idx(i, j)] += q.w * (1 - s) * (1 - t);
    w[grid.idx(i + 1, j)] += q.w * s * (1 - t);
    w[grid.idx(i, j + 1)] += q.w * (1 - s) * t;
    w[grid.idx(i + 1, j + 1)] += q.w * s * t;
  }
  return w;
}

ScalarCurvature abreu_scalar_curvature(const SymplecticPotential& u) {
  require_dim1(u, "abreu_scalar_curvature");
  const int n = u.n();
  const double a = u.lo(0), b = u.hi(0), h = u.h(0);
  const auto vpp = second_diff_4th(u.v(), h);
  std::vector<double> w(n + 1, 0.0);
  for (int i = 1; i < n; ++i) {
    const double x = u.coord(0, i);
    const double upp = guillemin_d2_1d(a, b, x) + vpp[i];
    if (!(upp > 0)) throw Error(ErrorKind::HessianDegenerate, "u'' = " + format_double(upp) + " " + where({x}));
    w[i] = 1.0 / upp;
  }
  ScalarCurvature out;
  out.s.assign(n + 1, 0.0);
  const double h2 = 12 * h * h;
  // 4th-order one-sided rows at the ends, centred rows inside
  out.s[0] = -(45 * w[0] - 154 * w[1] + 214 * w[2] - 156 * w[3] + 61 * w[4] - 10 * w[5]) / h2;
  out.s[1] = -(10 * w[0] - 15 * w[1] - 4 * w[2] + 14 * w[3] - 6 * w[4] + w[5]) / h2;
  out.s[n] = -(45 * w[n] - 154 * w[n - 1] + 214 * w[n - 2] - 156 * w[n - 3] + 61 * w[n - 4] - 10 * w[n - 5]) / h2;
  out.s[n - 1] = -(10 * w[n] - 15 * w[n - 1] - 4 * w[n - 2] + 14 * w[n - 3] - 6 * w[n - 4] + w[n - 5]) / h2;
  for (int i = 2; i <= n - 2; ++i) out.s[i] = -(-w[i - 2] + 16 * w[i - 1] - 30 * w[i] + 16 * w[i + 1] - w[i + 2]) / h2;
  out.average = simpson(out.s, h) / (b - a);
  return out;
}

double guillemin_inverse_1d(double a, double b, double eta) { return a + (b - a) * sigmoid(2 * eta); }

ComplexPotential legendre_dual(const SymplecticPotential& u, const LegendreOptions& opt) {
  require_dim1(u, "legendre_dual");
  const double a = u.lo(0), b = u.hi(0), len = b - a;
  const int m = opt.m > 0 ? opt.m : 4 * u.n();
  const auto& v = u.v();
  const Spline spline = make_spline(v, a, u.h(0));
  double vmax = 0;
  for (int i = 0; i <= 4 * u.n(); ++i) vmax = std::max(vmax, std::abs(spline.prime(a + len * i / (4.0 * u.n()))));

  ComplexPotential c;
  c.L = opt.L;
  auto ells = [&](double eta) { return std::pair{len * sigmoid(2 * eta), len * sigmoid(-2 * eta)}; };
  double eta_prev = -opt.L;
  double max_phi = 0;
  for (int k = 0; k <= m; ++k) {
    const double xi = -opt.L + 2 * opt.L * k / m;
    // eta + v'(x(eta)) = xi; g is increasing exactly when u is convex
    auto g = [&](double eta) { return eta + spline.prime(guillemin_inverse_1d(a, b, eta)) - xi; };
    double lo = xi - vmax - 1, hi = xi + vmax + 1;
    double eta = std::clamp(k == 0 ? xi : eta_prev, lo, hi);
    for (int it = 0; it < 200; ++it) {
      const double val = g(eta);
      if (val > 0) hi = eta; else lo = eta;
      const auto [l1, l2] = ells(eta);
      const double x = a + l1;
      const double dxdeta = 2 * l1 * l2 / len;
      const double gp = 1 + spline.double_prime(x) * dxdeta;
      double next = gp > 0 ? eta - val / gp : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - eta) < 1e-15 * std::max(1.0, std::abs(eta)) || hi - lo < 1e-15) {
        eta = next;
        break;
      }
      eta = next;
    }
    eta_prev = eta;
    const auto [l1, l2] = ells(eta);
    const double x = a + l1;
    const double upp = 0.5 * (1 / l1 + 1 / l2) + spline.double_prime(x);
    if (!(upp > 0)) throw Error(ErrorKind::LegendreFailure, "u is not convex near x = " + format_double(x));
    const double uval = 0.5 * (xlogx(l1) + xlogx(l2)) + spline(x);
    const auto [m1, m2] = ells(xi);
    const double x0 = a + m1;
    const double g0 = 0.5 * (1 / m1 + 1 / m2);
    c.xi.push_back(xi);
    c.x.push_back(x);
    c.psi.push_back(x * xi - uval);
    c.psi2.push_back(1 / upp);
    c.psi0.push_back(x0 * xi - 0.5 * (xlogx(m1) + xlogx(m2)));
    c.psi0_2.push_back(1 / g0);
    c.phi.push_back(c.psi.back() - c.psi0.back());
    c.F.push_back(std::log(g0) - std::log(upp));
    max_phi = std::max(max_phi, std::abs(c.phi.back()));
  }
  for (std::size_t k = 1; k < c.x.size(); ++k) {
    if (!(c.x[k] > c.x[k - 1]))
      throw Error(ErrorKind::LegendreFailure, "x(xi) is not increasing near xi = " + format_double(c.xi[k]));
  }
  const auto [lo1, lo2] = ells(-opt.L);
  (void)lo2;
  const auto [hi1, hi2] = ells(opt.L);
  (void)hi1;
  c.tail = (max_phi + 1) * ((c.x.front() - a) + (b - c.x.back()) + lo1 + hi2);
  if (c.tail > opt.tail_tol)
    throw Error(ErrorKind::LegendreFailure, "xi-tail mass " + format_double(c.tail) + " exceeds tolerance; increase L");
  return c;
}

double j_omega0(const ComplexPotential& c) {
  const auto lam = gauss_unit<32>();
  const double h = c.h();
  double total = 0;
  for (std::size_t q = 0; q < lam.x.size(); ++q) {
    std::vector<double> f(c.xi.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
      const double psil = c.psi0_2[k] + lam.x[q] * (c.psi2[k] - c.psi0_2[k]);
      f[k] = c.phi[k] * (c.psi0_2[k] - psil) * 0.5;
    }
    total += lam.w[q] * trapezoid(f, h);
  }
  return total;
}

double aubin_j(const ComplexPotential& c) {
  std::vector<double> f(c.xi.size());
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = c.phi[k] * 0.5 * (c.psi0_2[k] - c.psi2[k]);
  return trapezoid(f, c.h());
}

double i_functional(const ComplexPotential& c) {
  std::vector<double> f(c.xi.size());
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = 0.5 * c.phi[k] * 0.5 * (c.psi0_2[k] + c.psi2[k]);
  return trapezoid(f, c.h());
}

double entropy_term(const SymplecticPotential& u) { return u.dim() == 1 ? entropy_1d(u) : entropy_2d(u); }

double lp_term(const SymplecticPotential& u) { return u.dim() == 1 ? lp_1d(u) : lp_2d(u); }

EnergyRecord mabuchi_energy(const SymplecticPotential& u, bool with_complex, const LegendreOptions& opt) {
  EnergyRecord r;
  r.entropy_term = entropy_term(u);
  r.lp_term = lp_term(u);
  r.k_energy = r.entropy_term + r.lp_term;
  if (with_complex && u.dim() == 1) {
    const auto c = legendre_dual(u, opt);
    r.j_omega0 = j_omega0(c);
    r.aubin_j = aubin_j(c);
    r.i_functional = i_functional(c);
  }
  return r;
}

EnergyRecord twisted_energy(const SymplecticPotential& u, double t, const LegendreOptions& opt) {
  require_dim1(u, "twisted_energy");
  if (!(t > 0 && t <= 1)) throw Error(ErrorKind::OutOfDomain, "t must lie in (0, 1]");
  auto r = mabuchi_energy(u, true, opt);
  r.t = t;
  r.twisted = t == 1 ? r.k_energy : t * r.k_energy + (1 - t) * *r.j_omega0;
  return r;
}

double twisted_energy_derivative(const SymplecticPotential& u, const std::vector<double>& dv, double t,
                                 const LegendreOptions& opt) {
  require_dim1(u, "twisted_energy_derivative");
  if (dv.size() != u.v().size()) throw Error(ErrorKind::GridMismatch, "direction does not match the grid");
  const auto s = abreu_scalar_curvature(u);
  std::vector<double> k_integrand(dv.size());
  for (std::size_t i = 0; i < dv.size(); ++i) k_integrand[i] = 0.5 * (s.s[i] - s.average) * dv[i];
  const double dk = trapezoid(k_integrand, u.h(0));
  if (t == 1) return dk;
  const auto c = legendre_dual(u, opt);
  const Spline spline = make_spline(dv, u.lo(0), u.h(0));
  std::vector<double> j_integrand(c.xi.size());
  for (std::size_t k = 0; k < c.xi.size(); ++k) j_integrand[k] = -spline(c.x[k]) * 0.5 * (c.psi0_2[k] - c.psi2[k]);
  return t * dk + (1 - t) * trapezoid(j_integrand, c.h());
}

nlohmann::json potential_to_json(const SymplecticPotential& u) {
  return {{"polytope", u.polytope().name()}, {"N", u.n()}, {"v", u.v()}};
}

SymplecticPotential potential_from_json(const nlohmann::json& doc,
                                        const std::function<std::shared_ptr<const Polytope>(const std::string&)>& resolve) {
  try {
    return SymplecticPotential(resolve(doc.at("polytope").get<std::string>()), doc.at("N").get<int>(),
                               doc.at("v").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::BadDocument, std::string("potential document: ") + e.what());
  }
}

std::vector<std::string> energy_csv_header() {
  return {"entropy_term", "lp_term", "k_energy", "t", "twisted", "j_omega0", "aubin_j", "i_functional"};
}

std::vector<std::string> energy_csv_row(const EnergyRecord& r) {
  auto opt = [](const std::optional<double>& x) { return x ? format_double(*x) : std::string("nan"); };
  return {format_double(r.entropy_term), format_double(r.lp_term), format_double(r.k_energy), opt(r.t),
          opt(r.twisted), opt(r.j_omega0), opt(r.aubin_j), opt(r.i_functional)};
}

}  // namespace csck
