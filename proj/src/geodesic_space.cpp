#include "csck/geodesic_space.hpp"

#include "csck/error.hpp"
#include "csck/format.hpp"

#include <Eigen/Dense>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>

namespace csck {

double weighted_norm(const std::vector<double>& f, const std::vector<double>& w, double p) {
  if (!(p >= 1)) throw Error(ErrorKind::OutOfDomain, "p must be >= 1");
  if (std::isinf(p)) {
    double m = 0;
    for (std::size_t i = 0; i < f.size(); ++i)
      if (w[i] > 0) m = std::max(m, std::abs(f[i]));
    return m;
  }
  double s = 0;
  for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * std::pow(std::abs(f[i]), p);
  return std::pow(s, 1.0 / p);
}

namespace {

std::vector<double> difference(const SymplecticPotential& u0, const SymplecticPotential& u1) {
  require_same_grid(u0, u1);
  std::vector<double> d(u0.node_count());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = u0.v()[i] - u1.v()[i];
  return d;
}

}  // namespace

double dp_distance(const SymplecticPotential& u0, const SymplecticPotential& u1, double p) {
  return weighted_norm(difference(u0, u1), node_weights(u0), p);
}

double AffineFn::operator()(const Point& x) const {
  double s = b;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * x[j];
  return s;
}

namespace {

struct AffineFit {
  const std::vector<double>& g;
  const std::vector<double>& w;
  Eigen::MatrixXd basis;  // nodes x (dim + 1): 1, x_j - centre_j
  double p;

  std::vector<double> residual(const double* theta) const {
    std::vector<double> r(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      double s = 0;
      for (Eigen::Index k = 0; k < basis.cols(); ++k) s += basis(i, k) * theta[k];
      r[i] = g[i] - s;
    }
    return r;
  }
  double objective(const double* theta) const { return weighted_norm(residual(theta), w, p); }
};

double gsl_objective(const gsl_vector* x, void* params) {
  return static_cast<const AffineFit*>(params)->objective(x->data);
}

}  // namespace

DpGResult dpG_of(const SymplecticPotential& grid, const std::vector<double>& g, double p) {
  if (g.size() != grid.node_count()) throw Error(ErrorKind::GridMismatch, "difference does not match the grid");
  const int d = grid.dim();
  const auto w = node_weights(grid);
  std::vector<double> centre(d);
  for (int j = 0; j < d; ++j) centre[j] = to_double(grid.polytope().barycenter()[j]);
  AffineFit fit{g, w, Eigen::MatrixXd(g.size(), d + 1), p};
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point x = grid.node(i);
    fit.basis(i, 0) = 1;
    for (int j = 0; j < d; ++j) fit.basis(i, j + 1) = x[j] - centre[j];
  }
  // weighted least squares start (exact for p = 2)
  const Eigen::VectorXd W = Eigen::Map<const Eigen::VectorXd>(w.data(), w.size());
  const Eigen::VectorXd G = Eigen::Map<const Eigen::VectorXd>(g.data(), g.size());
  const Eigen::MatrixXd BtW = fit.basis.transpose() * W.asDiagonal();
  Eigen::VectorXd theta = (BtW * fit.basis).ldlt().solve(BtW * G);

  if (p != 2) {
    std::vector<double> best(theta.data(), theta.data() + theta.size());
    double best_val = fit.objective(best.data());
    double scale = 0;
    for (double x : g) scale = std::max(scale, std::abs(x));
    // subgradient descent with diminishing steps
    std::vector<double> th = best;
    for (int it = 0; it < 200 && !std::isinf(p); ++it) {
      const auto r = fit.residual(th.data());
      Eigen::VectorXd sub = Eigen::VectorXd::Zero(d + 1);
      for (std::size_t i = 0; i < r.size(); ++i) {
        const double s = r[i] > 0 ? 1 : (r[i] < 0 ? -1 : 0);
        sub -= fit.basis.row(i).transpose() * (w[i] * s * std::pow(std::abs(r[i]), p - 1));
      }
      const double n = sub.norm();
      if (n == 0) break;
      const double step = 0.1 * (scale + 1e-12) / std::sqrt(it + 1.0);
      for (int k = 0; k <= d; ++k) th[k] -= step * sub[k] / n;
      const double val = fit.objective(th.data());
      if (val < best_val) {
        best_val = val;
        best = th;
      }
    }
    // Nelder-Mead polish, restarted from the best point until it stops improving
    const gsl_multimin_fminimizer_type* type = gsl_multimin_fminimizer_nmsimplex2;
    gsl_multimin_function fn{&gsl_objective, static_cast<std::size_t>(d + 1), &fit};
    bool converged = false;
    for (int restart = 0; restart < 8; ++restart) {
      gsl_vector* x = gsl_vector_alloc(d + 1);
      gsl_vector* step = gsl_vector_alloc(d + 1);
      for (int k = 0; k <= d; ++k) {
        gsl_vector_set(x, k, best[k]);
        gsl_vector_set(step, k, 1e-2 * (scale + 1e-6) / (restart + 1));
      }
      gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(type, d + 1);
      gsl_multimin_fminimizer_set(s, &fn, x, step);
      int status = GSL_CONTINUE;
      for (int it = 0; it < 20000 && status == GSL_CONTINUE; ++it) {
        if (gsl_multimin_fminimizer_iterate(s)) break;
        status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-7 * (scale + 1e-12));
      }
      const double val = s->fval;
      const double before = best_val;
      if (val <= best_val) {
        best_val = val;
        for (int k = 0; k <= d; ++k) best[k] = gsl_vector_get(s->x, k);
      }
      gsl_multimin_fminimizer_free(s);
      gsl_vector_free(x);
      gsl_vector_free(step);
      if (status == GSL_SUCCESS && before - val <= 1e-8 * (best_val + 1e-12 * scale)) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw Error(ErrorKind::NoConvergence, "affine L^" + format_double(p) + " fit stalled; best value " + format_double(best_val));
    for (int k = 0; k <= d; ++k) theta[k] = best[k];
  }

  DpGResult out;
  out.value = fit.objective(theta.data());
  out.minimizer.a.assign(theta.data() + 1, theta.data() + d + 1);
  out.minimizer.b = theta[0];
  for (int j = 0; j < d; ++j) out.minimizer.b -= out.minimizer.a[j] * centre[j];
  return out;
}

DpGResult dpG_distance(const SymplecticPotential& u0, const SymplecticPotential& u1, double p) {
  return dpG_of(u0, difference(u0, u1), p);
}

SymplecticPotential geodesic_point(const SymplecticPotential& u0, const SymplecticPotential& u1, double t) {
  if (!(t >= 0 && t <= 1)) throw Error(ErrorKind::OutOfDomain, "geodesic parameter must lie in [0, 1]");
  require_same_grid(u0, u1);
  if (t == 0) return u0;
  if (t == 1) return u1;
  std::vector<double> v(u0.node_count());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (1 - t) * u0.v()[i] + t * u1.v()[i];
  return SymplecticPotential(u0.polytope_ptr(), u0.n(), std::move(v));
}

double convexity_defect(const SymplecticPotential& grid, const std::vector<double>& f) {
  const int n = grid.n();
  double worst = kInfinity;
  if (grid.dim() == 1) {
    for (int i = 1; i < n; ++i) worst = std::min(worst, f[i - 1] - 2 * f[i] + f[i + 1]);
    return worst;
  }
  auto at = [&](int i, int j) { return f[static_cast<std::size_t>(i) * (n + 1) + j]; };
  const int dirs[4][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
  for (const auto& d : dirs) {
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        const int i0 = i - d[0], j0 = j - d[1], i1 = i + d[0], j1 = j + d[1];
        if (i0 < 0 || j0 < 0 || i1 > n || j1 > n || j0 > n || j1 < 0) continue;
        worst = std::min(worst, at(i0, j0) - 2 * at(i, j) + at(i1, j1));
      }
    }
  }
  return worst;
}

GeodesicRay::GeodesicRay(SymplecticPotential base, std::vector<double> f, std::optional<PLConvexFn> pl, double p,
                         bool unit_speed)
    : base_(std::move(base)), f_(std::move(f)), pl_(std::move(pl)), p_(p), unit_speed_(unit_speed) {
  if (f_.size() != base_.node_count()) throw Error(ErrorKind::GridMismatch, "ray direction does not match the base grid");
  double fmax = 0;
  for (double x : f_) fmax = std::max(fmax, std::abs(x));
  if (convexity_defect(base_, f_) < -1e-12 * std::max(1.0, fmax))
    throw Error(ErrorKind::BadDocument, "ray direction is not convex on the grid");
  if (unit_speed_) {
    const double norm = weighted_norm(f_, node_weights(base_), p_);
    if (!(norm > 0)) throw Error(ErrorKind::BadDocument, "unit-speed ray needs a nonzero direction");
    scale_ = 1 / norm;
    for (auto& x : f_) x *= scale_;
  }
  speed_ = dpG_of(base_, f_, p_).value;
}

GeodesicRay GeodesicRay::from_pl(const SymplecticPotential& base, const PLConvexFn& f, double p, bool unit_speed) {
  if (f.dim() != base.dim()) throw Error(ErrorKind::GridMismatch, "PL direction has the wrong dimension");
  auto samples = base.sample([&](const Point& x) { return f.evaluate(x); });
  return GeodesicRay(base, std::move(samples), f, p, unit_speed);
}

GeodesicRay GeodesicRay::from_grid(const SymplecticPotential& base, std::vector<double> f, double p, bool unit_speed) {
  return GeodesicRay(base, std::move(f), std::nullopt, p, unit_speed);
}

GeodesicRay GeodesicRay::with_base(const SymplecticPotential& base) const {
  require_same_grid(base_, base);
  GeodesicRay r = *this;
  r.base_ = base;
  return r;
}

YenResult yen_invariant(const GeodesicRay& ray, int k_max) {
  if (k_max < 4) throw Error(ErrorKind::OutOfDomain, "k_max must be at least 4");
  std::vector<double> k(k_max + 1);
  for (int j = 0; j <= k_max; ++j) k[j] = mabuchi_energy(ray.at(j)).k_energy;
  YenResult r;
  for (int j = 0; j < k_max; ++j) r.increments.push_back(k[j + 1] - k[j]);
  r.yen = r.increments.back();
  r.monotonicity_defect = kInfinity;
  for (int j = 0; j + 1 < k_max; ++j) r.monotonicity_defect = std::min(r.monotonicity_defect, r.increments[j + 1] - r.increments[j]);
  return r;
}

GeodesicRay transplant_ray(const GeodesicRay& ray, const SymplecticPotential& new_base) { return ray.with_base(new_base); }

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::StrictlyStable: return "strictly_stable";
    case Verdict::BorderlineHolomorphic: return "borderline_holomorphic";
    case Verdict::Destabilizing: return "destabilizing";
  }
  return "?";
}

RayClassification classify_ray(const GeodesicRay& ray, int k_max, double tol) {
  if (k_max < 8) throw Error(ErrorKind::OutOfDomain, "classification needs k_max >= 8");
  const auto y = yen_invariant(ray, k_max);
  RayClassification c;
  c.yen = y.yen;
  c.increments = y.increments;
  c.affine_residual = dpG_of(ray.base(), ray.direction(), 1).value;
  if (c.yen > tol) {
    c.verdict = Verdict::StrictlyStable;
  } else if (std::abs(c.yen) <= tol && c.affine_residual <= tol) {
    c.verdict = Verdict::BorderlineHolomorphic;
  } else {
    c.verdict = Verdict::Destabilizing;
  }
  return c;
}

std::vector<double> ray_gap_profile(const GeodesicRay& r1, const GeodesicRay& r2, double p, const std::vector<double>& ts) {
  require_same_grid(r1.base(), r2.base());
  const auto w = node_weights(r1.base());
  std::vector<double> out;
  std::vector<double> diff(w.size());
  for (double t : ts) {
    for (std::size_t i = 0; i < diff.size(); ++i)
      diff[i] = (r1.base().v()[i] + t * r1.direction()[i]) - (r2.base().v()[i] + t * r2.direction()[i]);
    out.push_back(weighted_norm(diff, w, p));
  }
  return out;
}

DichotomyReport dichotomy_check(const GeodesicRay& r1, const GeodesicRay& r2, double p, double t0, double t1, int points,
                                double trend_tol, double flat_tol) {
  std::vector<double> ts;
  for (int k = 0; k < points; ++k) ts.push_back(t0 * std::pow(t1 / t0, static_cast<double>(k) / (points - 1)));
  const auto d = ray_gap_profile(r1, r2, p, ts);
  std::vector<double> slope;
  DichotomyReport r{};
  r.increase_defect = -kInfinity;
  for (int k = 0; k + 1 < points; ++k) {
    slope.push_back((d[k + 1] - d[k]) / (ts[k + 1] - ts[k]));
    r.increase_defect = std::max(r.increase_defect, d[k + 1] - d[k]);
  }
  r.limit_slope = slope.back();
  r.slope_trend = std::abs(slope.back() - slope[slope.size() - 2]);
  r.slope_branch = r.slope_trend <= trend_tol && r.limit_slope > trend_tol;
  r.nonincreasing_branch = r.increase_defect <= flat_tol;
  return r;
}

}  // namespace csck
