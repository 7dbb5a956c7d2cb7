#include "csck/mabuchi_appendix.hpp"

#include "csck/error.hpp"
#include "csck/format.hpp"
#include "csck/parallel.hpp"

#include "toml.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace csck {

namespace {
constexpr double kTwoPi = 2 * std::numbers::pi;
}

double TorusGrid::h1() const { return kTwoPi / m1; }
double TorusGrid::h2() const { return kTwoPi / m2; }
double TorusGrid::xi1(int p) const { return h1() * (p / m2); }
double TorusGrid::xi2(int p) const { return m2 == 1 ? 0.0 : h2() * (p % m2); }

namespace torus {

namespace {

int idx(const TorusGrid& g, int i1, int i2) { return ((i1 + g.m1) % g.m1) * g.m2 + ((i2 + g.m2) % g.m2); }

void require_size(const TorusGrid& g, const Field& u) {
  if (static_cast<int>(u.size()) != g.nodes()) throw Error(ErrorKind::GridMismatch, "field does not match the torus grid");
}

}  // namespace

Field d1(const TorusGrid& g, const Field& u) {
  require_size(g, u);
  Field d(u.size());
  const double s = 1 / (2 * g.h1());
  for (int i1 = 0; i1 < g.m1; ++i1)
    for (int i2 = 0; i2 < g.m2; ++i2) d[idx(g, i1, i2)] = s * (u[idx(g, i1 + 1, i2)] - u[idx(g, i1 - 1, i2)]);
  return d;
}

Field d2(const TorusGrid& g, const Field& u) {
  require_size(g, u);
  Field d(u.size(), 0.0);
  if (g.m2 == 1) return d;
  const double s = 1 / (2 * g.h2());
  for (int i1 = 0; i1 < g.m1; ++i1)
    for (int i2 = 0; i2 < g.m2; ++i2) d[idx(g, i1, i2)] = s * (u[idx(g, i1, i2 + 1)] - u[idx(g, i1, i2 - 1)]);
  return d;
}

Field laplacian(const TorusGrid& g, const Field& u) {
  require_size(g, u);
  Field d(u.size());
  const double a = 1 / (g.h1() * g.h1()), b = g.m2 == 1 ? 0.0 : 1 / (g.h2() * g.h2());
  for (int i1 = 0; i1 < g.m1; ++i1) {
    for (int i2 = 0; i2 < g.m2; ++i2) {
      const int p = idx(g, i1, i2);
      double v = a * (u[idx(g, i1 + 1, i2)] - 2 * u[p] + u[idx(g, i1 - 1, i2)]);
      if (b != 0) v += b * (u[idx(g, i1, i2 + 1)] - 2 * u[p] + u[idx(g, i1, i2 - 1)]);
      d[p] = v;
    }
  }
  return d;
}

Field metric(const TorusGrid& g, const Field& phi) {
  Field m = laplacian(g, phi);
  for (auto& x : m) x = 1 + 0.5 * x;
  return m;
}

double integrate(const TorusGrid& g, const Field& phi, const Field& u) {
  require_size(g, u);
  const Field m = metric(g, phi);
  double s = 0;
  for (std::size_t p = 0; p < u.size(); ++p) s += u[p] * m[p];
  return s * g.h1() * g.h2() / (kTwoPi * kTwoPi);
}

Field dot(const TorusGrid& g, const Field& phi, const Field& u, const Field& v) {
  const Field m = metric(g, phi);
  const Field u1 = d1(g, u), u2 = d2(g, u), v1 = d1(g, v), v2 = d2(g, v);
  Field out(u.size());
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = (u1[p] * v1[p] + u2[p] * v2[p]) / (2 * m[p]);
  return out;
}

Field laplacian_phi(const TorusGrid& g, const Field& phi, const Field& u) {
  const Field m = metric(g, phi);
  Field l = laplacian(g, u);
  for (std::size_t p = 0; p < l.size(); ++p) l[p] /= 2 * m[p];
  return l;
}

double inner(const TorusGrid& g, const Field& phi, const Field& u, const Field& v) {
  Field w(u.size());
  for (std::size_t p = 0; p < w.size(); ++p) w[p] = u[p] * v[p];
  return integrate(g, phi, w);
}

Field sample(const TorusGrid& g, const std::function<double(double, double)>& f) {
  Field out(g.nodes());
  for (int p = 0; p < g.nodes(); ++p) out[p] = f(g.xi1(p), g.xi2(p));
  return out;
}

}  // namespace torus

namespace {

double sup_norm(const std::vector<Field>& r) {
  double m = 0;
  for (const auto& f : r)
    for (double x : f) m = std::isfinite(x) ? std::max(m, std::abs(x)) : std::numeric_limits<double>::infinity();
  return m;
}

double min_metric(const TorusGrid& grid, const std::vector<Field>& phi) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& f : phi)
    for (double x : torus::metric(grid, f)) m = std::min(m, x);
  return m;
}

struct NewtonOutcome {
  bool converged;
  double residual;
  int iters;
};

// Newton on interior levels of `phi` (levels 0 and nt stay fixed).
NewtonOutcome newton(const TorusGrid& grid, std::vector<Field>& phi, double eps, const EpsGeodesicOptions& opt) {
  const int M = grid.nodes(), nt = grid.nt;
  const int N = (nt - 1) * M;
  const double tau = grid.tau();
  const double a = 1 / (grid.h1() * grid.h1()), b = grid.m2 == 1 ? 0.0 : 1 / (grid.h2() * grid.h2());
  const double g1 = 1 / (2 * grid.h1()), g2 = grid.m2 == 1 ? 0.0 : 1 / (2 * grid.h2());
  auto id = [&](int i1, int i2) { return ((i1 + grid.m1) % grid.m1) * grid.m2 + ((i2 + grid.m2) % grid.m2); };

  auto r = eps_geodesic_residual(grid, phi, eps);
  double rn = sup_norm(r);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  bool analysed = false;
  for (int it = 0; it <= opt.max_iter; ++it) {
    if (rn <= opt.tol) return {true, rn, it};
    if (it == opt.max_iter) break;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(N) * 13);
    auto add = [&](int row, int level, int node, double v) {
      if (level <= 0 || level >= nt) return;
      trip.emplace_back(row, (level - 1) * M + node, v);
    };
    for (int j = 1; j < nt; ++j) {
      const Field g = torus::metric(grid, phi[j]);
      Field V(M);
      for (int p = 0; p < M; ++p) V[p] = (phi[j + 1][p] - phi[j - 1][p]) / (2 * tau);
      const Field V1 = torus::d1(grid, V), V2 = torus::d2(grid, V);
      for (int i1 = 0; i1 < grid.m1; ++i1) {
        for (int i2 = 0; i2 < grid.m2; ++i2) {
          const int p = id(i1, i2);
          const int row = (j - 1) * M + p;
          const double A = (phi[j + 1][p] - 2 * phi[j][p] + phi[j - 1][p]) / (tau * tau);
          add(row, j + 1, p, g[p] / (tau * tau));
          add(row, j - 1, p, g[p] / (tau * tau));
          add(row, j, p, -2 * g[p] / (tau * tau) - A * (a + (b != 0 ? b : 0)));
          add(row, j, id(i1 + 1, i2), 0.5 * A * a);
          add(row, j, id(i1 - 1, i2), 0.5 * A * a);
          if (b != 0) {
            add(row, j, id(i1, i2 + 1), 0.5 * A * b);
            add(row, j, id(i1, i2 - 1), 0.5 * A * b);
          }
          // -1/2 |grad V|^2 with V = (phi^{j+1} - phi^{j-1}) / (2 tau)
          const double c1 = -V1[p] * g1 / (2 * tau), c2 = -V2[p] * g2 / (2 * tau);
          add(row, j + 1, id(i1 + 1, i2), c1);
          add(row, j + 1, id(i1 - 1, i2), -c1);
          add(row, j - 1, id(i1 + 1, i2), -c1);
          add(row, j - 1, id(i1 - 1, i2), c1);
          if (g2 != 0) {
            add(row, j + 1, id(i1, i2 + 1), c2);
            add(row, j + 1, id(i1, i2 - 1), -c2);
            add(row, j - 1, id(i1, i2 + 1), -c2);
            add(row, j - 1, id(i1, i2 - 1), c2);
          }
        }
      }
    }
    Eigen::SparseMatrix<double> J(N, N);
    J.setFromTriplets(trip.begin(), trip.end());
    J.makeCompressed();
    if (!analysed) {
      lu.analyzePattern(J);
      analysed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success) return {false, rn, it};
    Eigen::VectorXd rhs(N);
    for (int j = 1; j < nt; ++j)
      for (int p = 0; p < M; ++p) rhs[(j - 1) * M + p] = -r[j - 1][p];
    const Eigen::VectorXd step = lu.solve(rhs);

    double alpha = 1;
    bool accepted = false;
    while (alpha >= 1.0 / 1024) {
      std::vector<Field> trial = phi;
      for (int j = 1; j < nt; ++j)
        for (int p = 0; p < M; ++p) trial[j][p] += alpha * step[(j - 1) * M + p];
      if (min_metric(grid, trial) > 0) {
        auto rt = eps_geodesic_residual(grid, trial, eps);
        const double rtn = sup_norm(rt);
        if (rtn < (1 - 1e-4 * alpha) * rn) {
          phi.swap(trial);
          r.swap(rt);
          rn = rtn;
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!accepted) return {false, rn, it + 1};
  }
  return {false, rn, opt.max_iter};
}

}  // namespace

std::vector<Field> eps_geodesic_residual(const TorusGrid& grid, const std::vector<Field>& phi, double eps) {
  if (static_cast<int>(phi.size()) != grid.nt + 1) throw Error(ErrorKind::GridMismatch, "path has the wrong number of levels");
  const double tau = grid.tau();
  std::vector<Field> r;
  for (int j = 1; j < grid.nt; ++j) {
    const Field g = torus::metric(grid, phi[j]);
    Field V(grid.nodes());
    for (int p = 0; p < grid.nodes(); ++p) V[p] = (phi[j + 1][p] - phi[j - 1][p]) / (2 * tau);
    const Field V1 = torus::d1(grid, V), V2 = torus::d2(grid, V);
    Field e(grid.nodes());
    for (int p = 0; p < grid.nodes(); ++p) {
      const double A = (phi[j + 1][p] - 2 * phi[j][p] + phi[j - 1][p]) / (tau * tau);
      e[p] = A * g[p] - 0.5 * (V1[p] * V1[p] + V2[p] * V2[p]) - eps;
    }
    r.push_back(std::move(e));
  }
  return r;
}

TorusPotentialPath solve_eps_geodesic(const TorusGrid& grid, const Field& phi0, const Field& phi1, double eps,
                                      const EpsGeodesicOptions& opt) {
  if (grid.m1 < 4 || grid.m2 < 1 || (grid.m2 > 1 && grid.m2 < 4) || grid.nt < 2)
    throw Error(ErrorKind::OutOfDomain, "torus grid needs m1 >= 4, m2 = 1 or >= 4, nt >= 2");
  if (!(eps >= 1e-4 && eps <= 1)) throw Error(ErrorKind::OutOfDomain, "eps must lie in [1e-4, 1]");
  torus::laplacian(grid, phi0);
  torus::laplacian(grid, phi1);
  for (const auto* end : {&phi0, &phi1})
    for (double x : torus::metric(grid, *end))
      if (!(x > 0)) throw Error(ErrorKind::InadmissibleEndpoint, "endpoint has 1 + Delta phi / 2 <= 0");

  auto initial = [&](double e) {
    std::vector<Field> phi(grid.nt + 1, Field(grid.nodes()));
    for (int j = 0; j <= grid.nt; ++j) {
      const double t = static_cast<double>(j) / grid.nt;
      for (int p = 0; p < grid.nodes(); ++p) phi[j][p] = (1 - t) * phi0[p] + t * phi1[p] + 0.5 * e * t * (t - 1);
    }
    phi.front() = phi0;
    phi.back() = phi1;
    return phi;
  };

  TorusPotentialPath path;
  path.grid = grid;
  path.eps = eps;
  path.phi = initial(eps);
  auto out = newton(grid, path.phi, eps, opt);
  path.eps_schedule = {eps};
  if (!out.converged) {
    // continuation in eps from 1 downward
    path.eps_schedule.clear();
    path.phi = initial(1.0);
    int total = 0;
    double current = 1.0;
    out = newton(grid, path.phi, current, opt);
    total += out.iters;
    path.eps_schedule.push_back(current);
    if (!out.converged)
      throw Error(ErrorKind::NewtonDiverged, "eps-geodesic did not converge even at eps = 1; residual " + format_double(out.residual));
    while (current > eps) {
      double next = std::max(eps, current / 2);
      while (true) {
        auto trial = path.phi;
        auto o = newton(grid, trial, next, opt);
        total += o.iters;
        if (o.converged) {
          path.phi.swap(trial);
          current = next;
          path.eps_schedule.push_back(current);
          out = o;
          break;
        }
        next = 0.5 * (current + next);
        if (current - next < 1e-6 * current)
          throw Error(ErrorKind::NewtonDiverged, "eps continuation stalled at eps = " + format_double(current) +
                                                     "; residual " + format_double(o.residual));
      }
    }
    out.iters = total;
  }
  path.residual = out.residual;
  path.newton_iters = out.iters;
  path.admissibility_margin = min_metric(grid, path.phi);
  return path;
}

std::vector<Field> TorusPotentialPath::velocity() const {
  const int nt = grid.nt;
  const double tau = grid.tau();
  std::vector<Field> X(nt + 1, Field(grid.nodes()));
  for (int p = 0; p < grid.nodes(); ++p) {
    for (int j = 1; j < nt; ++j) X[j][p] = (phi[j + 1][p] - phi[j - 1][p]) / (2 * tau);
    if (nt >= 2) {
      X[0][p] = (-3 * phi[0][p] + 4 * phi[1][p] - phi[2][p]) / (2 * tau);
      X[nt][p] = (3 * phi[nt][p] - 4 * phi[nt - 1][p] + phi[nt - 2][p]) / (2 * tau);
    }
  }
  return X;
}

double geodesic_slack(const TorusPotentialPath& path) {
  const auto& grid = path.grid;
  const double tau = grid.tau();
  double s = 0;
  for (int j = 1; j < grid.nt; ++j) {
    const Field g = torus::metric(grid, path.phi[j]);
    Field V(grid.nodes());
    for (int p = 0; p < grid.nodes(); ++p) V[p] = (path.phi[j + 1][p] - path.phi[j - 1][p]) / (2 * tau);
    const Field V1 = torus::d1(grid, V), V2 = torus::d2(grid, V);
    Field w(grid.nodes());
    for (int p = 0; p < grid.nodes(); ++p) {
      const double A = (path.phi[j + 1][p] - 2 * path.phi[j][p] + path.phi[j - 1][p]) / (tau * tau);
      w[p] = std::abs(A - (V1[p] * V1[p] + V2[p] * V2[p]) / (2 * g[p]));
    }
    s += tau * torus::integrate(grid, path.phi[j], w);
  }
  return s;
}

ConnectionField mabuchi_connection(const TorusPotentialPath& path, const std::vector<Field>& U) {
  const auto& grid = path.grid;
  if (static_cast<int>(U.size()) != grid.nt + 1) throw Error(ErrorKind::GridMismatch, "U must have one field per time level");
  const auto X = path.velocity();
  const double tau = grid.tau();
  ConnectionField out;
  for (int j = 1; j < grid.nt; ++j) {
    const Field d = torus::dot(grid, path.phi[j], X[j], U[j]);
    Field v(grid.nodes());
    for (int p = 0; p < grid.nodes(); ++p) v[p] = (U[j + 1][p] - U[j - 1][p]) / (2 * tau) - d[p];
    out.values.push_back(std::move(v));
  }
  return out;
}

Field poisson_bracket(const TorusGrid& g, const Field& phi, const Field& f, const Field& h) {
  const Field m = torus::metric(g, phi);
  const Field f1 = torus::d1(g, f), f2 = torus::d2(g, f), h1 = torus::d1(g, h), h2 = torus::d2(g, h);
  Field out(f.size());
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = (f1[p] * h2[p] - f2[p] * h1[p]) / (2 * m[p]);
  return out;
}

Chi Chi::half_square() {
  return {[](double x) { return 0.5 * x * x; }, [](double x) { return x; }, [](double) { return 1.0; }};
}

Chi Chi::square() {
  return {[](double x) { return x * x; }, [](double x) { return 2 * x; }, [](double) { return 2.0; }};
}

Chi Chi::regularized(double p, double delta) {
  if (!(p >= 1) || !(delta > 0)) throw Error(ErrorKind::OutOfDomain, "regularized chi needs p >= 1 and delta > 0");
  const double d2 = delta * delta;
  return {[=](double x) { return std::pow(x * x + d2, p / 2); },
          [=](double x) { return p * x * std::pow(x * x + d2, p / 2 - 1); },
          [=](double x) {
            const double q = x * x + d2;
            return p * std::pow(q, p / 2 - 1) + p * (p - 2) * x * x * std::pow(q, p / 2 - 2);
          }};
}

Field ModeFamily::sample(const TorusGrid& g, double s, double t, int ds, int dt) const {
  Field out(g.nodes(), 0.0);
  auto falling = [](int n, int k) {
    double r = 1;
    for (int i = 0; i < k; ++i) r *= n - i;
    return r;
  };
  for (const auto& m : modes) {
    double c = 0;
    for (std::size_t a = 0; a < m.coef.size(); ++a) {
      for (std::size_t b = 0; b < m.coef[a].size(); ++b) {
        if (static_cast<int>(a) < ds || static_cast<int>(b) < dt) continue;
        c += m.coef[a][b] * falling(static_cast<int>(a), ds) * falling(static_cast<int>(b), dt) *
             std::pow(s, static_cast<double>(a) - ds) * std::pow(t, static_cast<double>(b) - dt);
      }
    }
    if (c == 0) continue;
    for (int p = 0; p < g.nodes(); ++p) {
      const double arg = m.k1 * g.xi1(p) + m.k2 * g.xi2(p);
      out[p] += c * (m.sine ? std::sin(arg) : std::cos(arg));
    }
  }
  return out;
}

CurvatureCheck curvature_identity_check(const ModeFamily& family, const Chi& chi, const TorusGrid& grid, double s,
                                        double t) {
  using namespace torus;
  const Field phi = family.sample(grid, s, t);
  const Field Y = family.sample(grid, s, t, 1, 0);
  const Field X = family.sample(grid, s, t, 0, 1);
  const Field Xt = family.sample(grid, s, t, 0, 2);
  const Field Xs = family.sample(grid, s, t, 1, 1);
  const Field Xts = family.sample(grid, s, t, 1, 2);
  const Field g = metric(grid, phi);
  const Field gs = laplacian(grid, Y), gt = laplacian(grid, X);  // 2 dg/ds, 2 dg/dt
  const Field X1 = d1(grid, X), X2 = d2(grid, X), Y1 = d1(grid, Y), Y2 = d2(grid, Y);
  const Field Xs1 = d1(grid, Xs), Xs2 = d2(grid, Xs), Xt1 = d1(grid, Xt), Xt2 = d2(grid, Xt);
  const std::size_t n = phi.size();

  Field W(n), Ws(n), Z(n), Zt(n);
  for (std::size_t p = 0; p < n; ++p) {
    const double gx = X1[p] * X1[p] + X2[p] * X2[p];
    const double yx = Y1[p] * X1[p] + Y2[p] * X2[p];
    W[p] = Xt[p] - gx / (2 * g[p]);
    Ws[p] = Xts[p] - (X1[p] * Xs1[p] + X2[p] * Xs2[p]) / g[p] + gx * (0.5 * gs[p]) / (2 * g[p] * g[p]);
    Z[p] = Xs[p] - yx / (2 * g[p]);
    Zt[p] = Xts[p] - (Xs1[p] * X1[p] + Xs2[p] * X2[p] + Y1[p] * Xt1[p] + Y2[p] * Xt2[p]) / (2 * g[p]) +
            yx * (0.5 * gt[p]) / (2 * g[p] * g[p]);
  }
  const Field yw = dot(grid, phi, Y, W);
  const Field xz = dot(grid, phi, X, Z);
  const Field br = poisson_bracket(grid, phi, X, Y);
  Field l(n), r(n);
  for (std::size_t p = 0; p < n; ++p) {
    l[p] = chi.d1(Y[p]) * ((Ws[p] - yw[p]) - (Zt[p] - xz[p]));
    r[p] = -chi.d2(Y[p]) * br[p] * br[p];
  }
  CurvatureCheck c;
  c.lhs = integrate(grid, phi, l);
  c.rhs = integrate(grid, phi, r);
  c.defect = std::abs(c.lhs - c.rhs);
  return c;
}

std::vector<SecondVariationCheck> convexity_along_family(const ModeFamily& c0, const ModeFamily& c1,
                                                const std::vector<Chi>& chis, double eps, const TorusGrid& grid,
                                                double s, double ds, const EpsGeodesicOptions& opt) {
  using namespace torus;
  const double ss[3] = {s - ds, s, s + ds};
  std::vector<TorusPotentialPath> paths(3);
  parallel_for(3, 3, [&](std::size_t k) {
    paths[k] = solve_eps_geodesic(grid, c0.sample(grid, ss[k], 0), c1.sample(grid, ss[k], 0), eps, opt);
  });
  const auto& mid = paths[1];
  const int nt = grid.nt, M = grid.nodes();
  const double tau = grid.tau();
  std::vector<Field> Y(nt + 1, Field(M));
  for (int j = 0; j <= nt; ++j)
    for (int p = 0; p < M; ++p) Y[j][p] = (paths[2].phi[j][p] - paths[0].phi[j][p]) / (2 * ds);
  const auto nxy = mabuchi_connection(mid, Y);
  std::vector<SecondVariationCheck> out;
  for (const auto& chi : chis) {
    std::vector<double> Q(nt + 1);
    for (int j = 0; j <= nt; ++j) {
      Field c(M);
      for (int p = 0; p < M; ++p) c[p] = chi.f(Y[j][p]);
      Q[j] = integrate(grid, mid.phi[j], c);
    }
    SecondVariationCheck r;
    r.min_defect = std::numeric_limits<double>::infinity();
    for (int j = 1; j < nt; ++j) {
      Field w(M);
      for (int p = 0; p < M; ++p) w[p] = chi.d2(Y[j][p]) * nxy.values[j - 1][p] * nxy.values[j - 1][p];
      const double d = (Q[j + 1] - 2 * Q[j] + Q[j - 1]) / (tau * tau) - integrate(grid, mid.phi[j], w);
      r.defect.push_back(d);
      r.min_defect = std::min(r.min_defect, d);
    }
    out.push_back(std::move(r));
  }
  return out;
}

SecondVariationCheck convexity_along_family(const ModeFamily& c0, const ModeFamily& c1, const Chi& chi, double eps,
                                   const TorusGrid& grid, double s, double ds, const EpsGeodesicOptions& opt) {
  return convexity_along_family(c0, c1, std::vector<Chi>{chi}, eps, grid, s, ds, opt).front();
}

LengthProfile length_profile(const ModeFamily& c0, const ModeFamily& c1, double p, double eps, const TorusGrid& grid,
                             int S, unsigned jobs, const EpsGeodesicOptions& opt) {
  if (S < 8) throw Error(ErrorKind::OutOfDomain, "length profile needs S >= 8 samples");
  if (!(p >= 1)) throw Error(ErrorKind::OutOfDomain, "p must be >= 1");
  std::vector<TorusPotentialPath> paths(S + 1);
  parallel_for(S + 1, jobs, [&](std::size_t a) {
    const double s = static_cast<double>(a) / S;
    try {
      paths[a] = solve_eps_geodesic(grid, c0.sample(grid, s, 0), c1.sample(grid, s, 0), eps, opt);
    } catch (const Error& e) {
      throw Error(e.kind(), "s = " + format_double(s) + ": " + e.what());
    }
  });
  const double hs = 1.0 / S;
  const int M = grid.nodes();
  LengthProfile out;
  for (int j = 0; j <= grid.nt; ++j) {
    std::vector<double> lam(S + 1);
    for (int a = 0; a <= S; ++a) {
      Field y(M);
      for (int q = 0; q < M; ++q) {
        double d;
        if (a == 0) d = (-3 * paths[0].phi[j][q] + 4 * paths[1].phi[j][q] - paths[2].phi[j][q]) / (2 * hs);
        else if (a == S) d = (3 * paths[S].phi[j][q] - 4 * paths[S - 1].phi[j][q] + paths[S - 2].phi[j][q]) / (2 * hs);
        else d = (paths[a + 1].phi[j][q] - paths[a - 1].phi[j][q]) / (2 * hs);
        y[q] = std::pow(std::abs(d), p);
      }
      lam[a] = std::pow(torus::integrate(grid, paths[a].phi[j], y), 1 / p);
    }
    double L = 0.5 * (lam.front() + lam.back());
    for (int a = 1; a < S; ++a) L += lam[a];
    out.t.push_back(static_cast<double>(j) / grid.nt);
    out.L.push_back(L * hs);
  }
  out.convexity_defect = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j + 1 < out.L.size(); ++j)
    out.convexity_defect = std::min(out.convexity_defect, out.L[j - 1] - 2 * out.L[j] + out.L[j + 1]);
  return out;
}

double eps_distance(const TorusGrid& grid, const Field& a, const Field& b, double p, double eps,
                    const EpsGeodesicOptions& opt) {
  const auto path = solve_eps_geodesic(grid, a, b, eps, opt);
  const auto X = path.velocity();
  std::vector<double> lam(grid.nt + 1);
  for (int j = 0; j <= grid.nt; ++j) {
    Field y(grid.nodes());
    for (int q = 0; q < grid.nodes(); ++q) y[q] = std::pow(std::abs(X[j][q]), p);
    lam[j] = std::pow(torus::integrate(grid, path.phi[j], y), 1 / p);
  }
  double L = 0.5 * (lam.front() + lam.back());
  for (int j = 1; j < grid.nt; ++j) L += lam[j];
  return L * grid.tau();
}

ModeFamily mode_family_from_toml(const std::string& text, const std::string& table) {
  toml::table doc;
  try {
    doc = toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw Error(ErrorKind::BadDocument, std::string("family: ") + std::string(e.description()));
  }
  const auto* modes = doc[table]["mode"].as_array();
  if (!modes) throw Error(ErrorKind::BadDocument, "family '" + table + "': expected [[" + table + ".mode]] tables");
  ModeFamily fam;
  for (const auto& node : *modes) {
    const auto* t = node.as_table();
    if (!t) throw Error(ErrorKind::BadDocument, "family '" + table + "': mode must be a table");
    ModeFamily::Mode m;
    m.k1 = (*t)["k1"].value_or(0);
    m.k2 = (*t)["k2"].value_or(0);
    const std::string kind = (*t)["kind"].value_or(std::string("cos"));
    if (kind != "cos" && kind != "sin") throw Error(ErrorKind::BadDocument, "mode kind must be \"cos\" or \"sin\"");
    m.sine = kind == "sin";
    const auto* coef = (*t)["coef"].as_array();
    if (!coef || coef->empty()) throw Error(ErrorKind::BadDocument, "mode needs a nonempty coef array");
    for (const auto& row : *coef) {
      std::vector<double> r;
      if (const auto* arr = row.as_array()) {
        for (const auto& x : *arr) {
          const auto v = x.value<double>();
          if (!v) throw Error(ErrorKind::BadDocument, "coef entries must be numbers");
          r.push_back(*v);
        }
      } else if (const auto v = row.value<double>()) {
        r.push_back(*v);  // s-polynomial only
      } else {
        throw Error(ErrorKind::BadDocument, "coef entries must be numbers or arrays");
      }
      m.coef.push_back(std::move(r));
    }
    fam.modes.push_back(std::move(m));
  }
  return fam;
}

nlohmann::json path_to_json(const TorusPotentialPath& path) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& f : path.phi) levels.push_back(f);
  return {{"m1", path.grid.m1},        {"m2", path.grid.m2},           {"nt", path.grid.nt},
          {"eps", path.eps},           {"residual", path.residual},    {"newton_iters", path.newton_iters},
          {"admissibility_margin", path.admissibility_margin}, {"phi", levels}};
}

}  // namespace csck
