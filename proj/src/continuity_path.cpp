#include "csck/continuity_path.hpp"

#include "csck/error.hpp"
#include "csck/format.hpp"
#include "csck/spline.hpp"

#include "toml.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace csck {

double Background::value(double xi) {
  return xi > 0 ? xi + 0.5 * std::log1p(std::exp(-2 * xi)) : 0.5 * std::log1p(std::exp(2 * xi));
}

double Background::first(double xi) { return 1 / (1 + std::exp(-2 * xi)); }

double Background::second(double xi) {
  const double e = std::exp(-2 * std::abs(xi));
  return 2 * e / ((1 + e) * (1 + e));
}

double Background::log_second(double xi) {
  return std::log(2.0) - 2 * std::abs(xi) - 2 * std::log1p(std::exp(-2 * std::abs(xi)));
}

double Background::log_second_d1(double xi) { return -2 * std::tanh(xi); }

double Background::log_second_d2(double xi) { return -4 * second(xi); }

Background make_background(int n, double L) {
  if (n < 8 || !(L > 0)) throw Error(ErrorKind::OutOfDomain, "background grid needs n >= 8 and L > 0");
  Background bg;
  bg.n = n;
  bg.L = L;
  for (int i = 0; i <= n; ++i) {
    const double x = -L + 2 * L * i / n;
    bg.xi.push_back(x);
    bg.psi0.push_back(Background::value(x));
    bg.psi0_1.push_back(Background::first(x));
    bg.psi0_2.push_back(Background::second(x));
    bg.ric0.push_back(-Background::log_second_d2(x));
  }
  // Gauss-Bonnet over the window: int Ric0 / int omega0 from the boundary derivatives
  bg.rbar = (Background::log_second_d1(-L) - Background::log_second_d1(L)) / (Background::first(L) - Background::first(-L));
  return bg;
}

double Recentring::at(double s) const {
  if (t.empty()) return 0;
  if (s <= t.front()) return c.front();
  if (s >= t.back()) return c.back();
  const auto it = std::upper_bound(t.begin(), t.end(), s);
  const std::size_t k = static_cast<std::size_t>(it - t.begin());
  const double w = (s - t[k - 1]) / (t[k] - t[k - 1]);
  return (1 - w) * c[k - 1] + w * c[k];
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sup_norm(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::isfinite(x) ? std::max(m, std::abs(x)) : kInf;
  return m;
}

// 5-point second difference with F(0) = F(n) = 0 and odd reflection beyond the ends.
double d2_reflected(const std::vector<double>& F, int i, double h) {
  const int n = static_cast<int>(F.size()) - 1;
  auto at = [&](int k) { return k < 0 ? -F[-k] : (k > n ? -F[2 * n - k] : F[k]); };
  return (-at(i - 2) + 16 * at(i - 1) - 30 * at(i) + 16 * at(i + 1) - at(i + 2)) / (12 * h * h);
}

// 4th-order second derivative at every node, one-sided rows at the two end pairs.
std::vector<double> d2_full(const std::vector<double>& f, double h) {
  const std::size_t n = f.size() - 1;
  std::vector<double> d(f.size());
  const double s = 12 * h * h;
  for (std::size_t i = 2; i + 2 <= n; ++i) d[i] = (-f[i - 2] + 16 * f[i - 1] - 30 * f[i] + 16 * f[i + 1] - f[i + 2]) / s;
  d[0] = (45 * f[0] - 154 * f[1] + 214 * f[2] - 156 * f[3] + 61 * f[4] - 10 * f[5]) / s;
  d[1] = (10 * f[0] - 15 * f[1] - 4 * f[2] + 14 * f[3] - 6 * f[4] + f[5]) / s;
  d[n] = (45 * f[n] - 154 * f[n - 1] + 214 * f[n - 2] - 156 * f[n - 3] + 61 * f[n - 4] - 10 * f[n - 5]) / s;
  d[n - 1] = (10 * f[n] - 15 * f[n - 1] - 4 * f[n - 2] + 14 * f[n - 3] - 6 * f[n - 4] + f[n - 5]) / s;
  return d;
}

// 4th-order first derivative at every node.
std::vector<double> d1_full(const std::vector<double>& f, double h) {
  const std::size_t n = f.size() - 1;
  std::vector<double> d(f.size());
  for (std::size_t i = 2; i + 2 <= n; ++i) d[i] = (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]) / (12 * h);
  d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h);
  d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h);
  d[n] = (25 * f[n] - 48 * f[n - 1] + 36 * f[n - 2] - 16 * f[n - 3] + 3 * f[n - 4]) / (12 * h);
  d[n - 1] = (3 * f[n] + 10 * f[n - 1] - 18 * f[n - 2] + 6 * f[n - 3] - f[n - 4]) / (12 * h);
  return d;
}

double trapezoid(const std::vector<double>& f, double h) {
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * h;
}

// w with w'' = q, w(-L) = w'(-L) = 0, by end-corrected trapezoid sums (4th order).
std::vector<double> integrate_twice(const std::vector<double>& q, double h) {
  const auto dq = d1_full(q, h);
  const std::size_t n = q.size() - 1;
  std::vector<double> w1(n + 1, 0.0), w(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    w1[i + 1] = w1[i] + 0.5 * h * (q[i] + q[i + 1]) - h * h / 12 * (dq[i + 1] - dq[i]);
    w[i + 1] = w[i] + 0.5 * h * (w1[i] + w1[i + 1]) - h * h / 12 * (q[i + 1] - q[i]);
  }
  return w;
}

PathState make_state(const Background& bg, double t, std::vector<double> F) {
  PathState s;
  s.t = t;
  s.L = bg.L;
  s.xi = bg.xi;
  std::vector<double> q(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) q[i] = bg.psi0_2[i] * std::expm1(F[i]);
  const auto w = integrate_twice(q, bg.h());
  s.phi.resize(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) s.phi[i] = bg.psi0[i] + w[i];
  s.core = F;
  s.F = std::move(F);
  return s;
}

std::string history_text(const std::vector<double>& h) {
  std::string out;
  for (std::size_t i = 0; i < h.size(); ++i) out += (i ? ", " : "") + format_double(h[i]);
  return out;
}

}  // namespace

std::vector<double> path_residual(const Background& bg, double t, const std::vector<double>& F,
                                  const std::vector<double>& forcing) {
  const int n = bg.n;
  if (static_cast<int>(F.size()) != n + 1) throw Error(ErrorKind::GridMismatch, "F does not match the background grid");
  const double c = t * bg.rbar - (1 - t);
  std::vector<double> e(n + 1, 0.0);
  for (int i = 1; i < n; ++i) {
    e[i] = -bg.psi0_2[i] * std::expm1(F[i]) * c - t * d2_reflected(F, i, bg.h());
    if (!forcing.empty()) e[i] -= forcing[i];
  }
  return e;
}

PathState solve_state(const Background& bg, double t, std::vector<double> F, const NewtonOptions& opt,
                      const std::vector<double>& forcing) {
  if (!(t > 0 && t < 1)) throw Error(ErrorKind::OutOfDomain, "path parameter must lie in (0, 1)");
  const int n = bg.n;
  const int m = n - 1;
  const double h = bg.h();
  const double c = t * bg.rbar - (1 - t);
  const double k = t / (12 * h * h);
  F.resize(n + 1, 0.0);
  F.front() = F.back() = 0;

  std::vector<double> history;
  auto e = path_residual(bg, t, F, forcing);
  double r = sup_norm(e);
  int iters = 0;
  while (true) {
    history.push_back(r);
    if (r <= opt.tol) break;
    if (iters == opt.max_iter)
      throw Error(ErrorKind::NewtonDiverged, "t = " + format_double(t) + ": no convergence in " +
                                                 std::to_string(opt.max_iter) + " iterations; residuals " + history_text(history));
    // banded Jacobian, kl = ku = 2, LAPACK band storage
    const int kl = 2, ku = 2, ldab = 2 * kl + ku + 1;
    std::vector<double> ab(static_cast<std::size_t>(ldab) * m, 0.0);
    auto set = [&](int row, int col, double v) {
      if (col < 0 || col >= m) return;
      ab[static_cast<std::size_t>(kl + ku + row - col) + static_cast<std::size_t>(col) * ldab] += v;
    };
    std::vector<double> rhs(m);
    for (int i = 1; i < n; ++i) {
      const int row = i - 1;
      set(row, row, -bg.psi0_2[i] * std::exp(F[i]) * c + 30 * k);
      set(row, row - 1, -16 * k);
      set(row, row + 1, -16 * k);
      set(row, row - 2, k);
      set(row, row + 2, k);
      if (i == 1) set(row, row, -k);  // F_{-1} = -F_1
      if (i == n - 1) set(row, row, -k);
      rhs[row] = -e[i];
    }
    std::vector<lapack_int> ipiv(m);
    const lapack_int info = LAPACKE_dgbsv(LAPACK_COL_MAJOR, m, kl, ku, 1, ab.data(), ldab, ipiv.data(), rhs.data(), m);
    if (info != 0) throw Error(ErrorKind::HessianDegenerate, "t = " + format_double(t) + ": singular path Jacobian");

    double alpha = opt.damping;
    bool accepted = false;
    std::vector<double> trial(F);
    while (alpha >= 1.0 / 1024) {
      for (int i = 1; i < n; ++i) trial[i] = F[i] + alpha * rhs[i - 1];
      auto et = path_residual(bg, t, trial, forcing);
      const double rt = sup_norm(et);
      if (rt < (1 - 1e-4 * alpha) * r) {
        F.swap(trial);
        e.swap(et);
        r = rt;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    ++iters;
    if (!accepted)
      throw Error(ErrorKind::NewtonDiverged, "t = " + format_double(t) + ": line search failed; residuals " + history_text(history));
  }
  PathState s = make_state(bg, t, std::move(F));
  s.residual_norm = r;
  s.newton_iters = iters;
  s.residual_history = std::move(history);
  return s;
}

std::vector<PathState> solve_path(const PathConfig& config) {
  const auto& ts = config.t_grid;
  if (ts.empty()) throw Error(ErrorKind::BadDocument, "t_grid is empty");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!(ts[i] > 0 && ts[i] < 1)) throw Error(ErrorKind::OutOfDomain, "t_grid values must lie in (0, 1)");
    if (i && !(ts[i] > ts[i - 1])) throw Error(ErrorKind::BadDocument, "t_grid must be increasing");
  }
  const Background bg = make_background(config.n, config.L);

  std::function<PathState(double, const std::vector<double>&, double, int)> advance =
      [&](double t_from, const std::vector<double>& F_from, double t_to, int depth) -> PathState {
    try {
      return solve_state(bg, t_to, F_from, config.newton);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::NewtonDiverged || depth >= config.newton.max_halvings) throw;
    }
    const double mid = 0.5 * (t_from + t_to);
    const PathState half = advance(t_from, F_from, mid, depth + 1);
    return advance(mid, half.F, t_to, depth + 1);
  };

  std::vector<PathState> out;
  double t_prev = 0;
  std::vector<double> F_prev(config.n + 1, 0.0);
  for (double t : ts) {
    out.push_back(advance(t_prev, F_prev, t, 0));
    t_prev = t;
    F_prev = out.back().F;
  }
  return out;
}

std::vector<double> scalar_curvature(const PathState& s) {
  const auto c2 = d2_full(s.core, s.h());
  std::vector<double> r(s.xi.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double y = s.xi[i] + s.shift;
    r[i] = (-Background::log_second_d2(y) - c2[i]) / (Background::second(y) * std::exp(s.core[i]));
  }
  return r;
}

double curvature_deviation(const PathState& s, double rbar) {
  double m = 0;
  for (double r : scalar_curvature(s)) m = std::max(m, std::abs(r - rbar));
  return m;
}

double TwistData::beta_min() const {
  const double h = xi[1] - xi[0];
  double m = kInf;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) m = std::min(m, beta0[i] + (f[i - 1] - 2 * f[i] + f[i + 1]) / (h * h));
  return m;
}

TwistData make_twist(const Background& bg, double t, double shift, double p_max) {
  if (!(t > 0 && t < 1)) throw Error(ErrorKind::OutOfDomain, "path parameter must lie in (0, 1)");
  TwistData tw;
  tw.t = t;
  tw.shift = shift;
  tw.xi = bg.xi;
  const double k = (1 - t) / t;
  const double top = std::max(shift, 0.0);
  for (std::size_t i = 0; i < bg.xi.size(); ++i) {
    const double x = bg.xi[i];
    tw.beta0.push_back(k * bg.psi0_2[i]);
    const double th = Background::value(x + shift) - bg.psi0[i] - top;
    tw.theta.push_back(th);
    tw.f.push_back(k * th);
    tw.f1.push_back(k * (Background::first(x + shift) - bg.psi0_1[i]));
    tw.f2.push_back(k * (Background::second(x + shift) - bg.psi0_2[i]));
  }
  std::vector<double> g(bg.xi.size());
  tw.p_check = 0;
  for (int p = 1; p <= p_max; ++p) {
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::exp(-p * tw.f[i]) * bg.psi0_2[i];
    if (trapezoid(g, bg.h()) > 10) break;
    tw.p_check = p;
  }
  return tw;
}

std::pair<PathState, TwistData> pullback_solution(const PathState& s, double c) {
  if (std::abs(c) > s.L / 2) throw Error(ErrorKind::OutOfDomain, "translation must satisfy |c| <= L/2");
  const int n = s.n();
  const double h = s.h();
  const double lo = s.xi.front(), hi = s.xi.back();
  std::vector<double> w(n + 1);
  for (int i = 0; i <= n; ++i) w[i] = s.phi[i] - Background::value(s.xi[i] + s.shift) + std::max(s.shift, 0.0);
  const Spline core = make_spline(s.core, lo, h);
  const Spline ws = make_spline(w, lo, h);
  const double w_lo = ws.prime(lo), w_hi = ws.prime(hi);

  PathState out = s;
  out.shift = s.shift + c;
  const double offset = std::max(out.shift, 0.0) - std::max(s.shift, 0.0) - std::max(c, 0.0);
  for (int i = 0; i <= n; ++i) {
    const double y = s.xi[i] + c;
    // beyond the window the core has decayed and w is linear
    const double cv = (y < lo || y > hi) ? 0.0 : core(y);
    const double wv = y < lo ? w.front() + w_lo * (y - lo) : (y > hi ? w.back() + w_hi * (y - hi) : ws(y));
    const double z = s.xi[i] + out.shift;
    out.core[i] = cv;
    out.F[i] = cv + Background::log_second(z) - Background::log_second(s.xi[i]);
    out.phi[i] = Background::value(z) - std::max(out.shift, 0.0) + wv + offset;
  }
  const Background bg = make_background(n, s.L);
  return {std::move(out), make_twist(bg, s.t, s.shift + c)};
}

double twisted_scalar_residual(const PathState& s, const TwistData& tw, double rbar) {
  if (tw.f.size() != s.xi.size()) throw Error(ErrorKind::GridMismatch, "twist data does not match the state grid");
  const auto r = scalar_curvature(s);
  const double big_r = rbar - (1 - s.t) / s.t;
  double m = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double phi2 = Background::second(s.xi[i] + s.shift) * std::exp(s.core[i]);
    m = std::max(m, std::abs(r[i] - (tw.beta0[i] + tw.f2[i]) / phi2 - big_r));
  }
  return m;
}

ObservableRecord section_observables(const PathState& s, const TwistData& tw, double p) {
  if (tw.f.size() != s.xi.size()) throw Error(ErrorKind::GridMismatch, "twist data does not match the state grid");
  if (!(p >= 1)) throw Error(ErrorKind::OutOfDomain, "observable exponent must be >= 1");
  const std::size_t n = s.xi.size();
  const double h = s.h();
  const auto dcore = d1_full(s.core, h);
  ObservableRecord r;
  r.t = s.t;
  r.sup_F_plus_f = -kInf;
  r.inf_F_plus_f = kInf;
  r.grad_bound = 0;
  std::vector<double> ent(n), lap(n), w(n), af(n), e4(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = s.xi[i];
    const double z = x + s.shift;
    const double dv0 = Background::second(x);
    const double phi2 = Background::second(z) * std::exp(s.core[i]);
    const double g = s.F[i] + tw.f[i];
    r.sup_F_plus_f = std::max(r.sup_F_plus_f, g);
    r.inf_F_plus_f = std::min(r.inf_F_plus_f, g);
    const double dg = dcore[i] + Background::log_second_d1(z) - Background::log_second_d1(x) + tw.f1[i];
    const double grad = std::abs(dg) / std::sqrt(phi2);
    r.grad_bound = std::max(r.grad_bound, grad);
    ent[i] = s.F[i] * std::exp(s.F[i]) * dv0;
    lap[i] = std::exp((p - 1) * tw.f[i] + p * s.F[i]) * dv0;
    w[i] = (std::pow(std::abs(g), 2 * p) + std::pow(grad, 2 * p)) * phi2;
    af[i] = std::abs(tw.f[i]) * dv0;
    e4[i] = std::exp(-4 * tw.f[i]) * dv0;
  }
  r.entropy = trapezoid(ent, h);
  r.lap_bound_p = trapezoid(lap, h);
  r.w12p = std::pow(trapezoid(w, h), 1 / (2 * p));
  r.int_abs_f = trapezoid(af, h);
  r.int_exp_m4f = trapezoid(e4, h);
  r.tail = 1 - std::tanh(s.L);
  const Background bg = make_background(s.n(), s.L);
  r.twisted_scalar_residual = twisted_scalar_residual(s, tw, bg.rbar);
  return r;
}

double split_equation_mismatch(const Background& bg, double t, const std::vector<double>& F) {
  const auto e = path_residual(bg, t, F);
  const double k = (1 - t) / t;
  double m = 0;
  for (int i = 1; i < bg.n; ++i) {
    const double phi2 = bg.psi0_2[i] * std::exp(F[i]);  // phi'' = psi0'' e^F
    const double d2 = d2_reflected(F, i, bg.h());
    // Delta_phi F - [-(Rbar - k) + tr_phi(Ric0 - k omega0)]
    const double q = d2 / phi2 + (bg.rbar - k) - (bg.ric0[i] - k * bg.psi0_2[i]) / phi2;
    const double scale = 1 + std::abs(e[i]) + t * std::abs(d2) + bg.psi0_2[i] * std::abs(std::expm1(F[i])) * (1 + bg.rbar);
    m = std::max(m, std::abs(-t * phi2 * q - e[i]) / scale);
  }
  return m;
}

SymplecticPotential symplectic_potential(const PathState& s, std::shared_ptr<const Polytope> interval, int n) {
  if (interval->dim() != 1) throw Error(ErrorKind::BadDocument, "symplectic potential of a path state needs the interval");
  const int m = s.n();
  const double h = s.h();
  const double lo = s.xi.front(), hi = s.xi.back();
  const double top = std::max(s.shift, 0.0);
  std::vector<double> w(m + 1);
  for (int i = 0; i <= m; ++i) w[i] = s.phi[i] - Background::value(s.xi[i] + s.shift) + top;
  const Spline ws = make_spline(w, lo, h);
  const double w_lo = ws.prime(lo), w_hi = ws.prime(hi);
  auto wv = [&](double y) { return y < lo ? w.front() + w_lo * (y - lo) : (y > hi ? w.back() + w_hi * (y - hi) : ws(y)); };
  auto wd = [&](double y) { return y < lo ? w_lo : (y > hi ? w_hi : ws.prime(y)); };
  auto dphi = [&](double y) { return Background::first(y + s.shift) + wd(y); };
  auto phi = [&](double y) { return Background::value(y + s.shift) - top + wv(y); };

  std::vector<double> v(n + 1);
  v[0] = top - w.front();
  v[n] = top - s.shift - w.back();
  for (int k = 1; k < n; ++k) {
    const double x = static_cast<double>(k) / n;
    // solve phi'(y) = x: bracket by the background inverse, then bisection and Newton
    double y = 0.5 * std::log(x / (1 - x)) - s.shift;
    double a = y - 1, b = y + 1;
    while (dphi(a) > x) a -= 1;
    while (dphi(b) < x) b += 1;
    for (int it = 0; it < 200 && b - a > 1e-15 * (1 + std::abs(a)); ++it) {
      const double mid = 0.5 * (a + b);
      (dphi(mid) < x ? a : b) = mid;
    }
    y = 0.5 * (a + b);
    const double u = x * y - phi(y);
    v[k] = u - 0.5 * (x * std::log(x) + (1 - x) * std::log1p(-x));
  }
  return SymplecticPotential(std::move(interval), n, std::move(v));
}

PathRun run_path(const PathConfig& config) {
  PathRun run;
  run.background = make_background(config.n, config.L);
  run.states = solve_path(config);
  for (const auto& s : run.states) {
    auto [pulled, tw] = pullback_solution(s, config.recentring.at(s.t));
    run.observables.push_back(section_observables(pulled, tw, config.p));
    run.recentred.push_back(std::move(pulled));
    run.twists.push_back(std::move(tw));
  }
  return run;
}

PathConfig path_config_from_toml(const std::string& text) {
  toml::table doc;
  try {
    doc = toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw Error(ErrorKind::BadDocument, std::string("config: ") + std::string(e.description()));
  }
  PathConfig cfg;
  if (auto g = doc["grid"]) {
    cfg.n = g["n"].value_or(cfg.n);
    cfg.L = g["L"].value_or(cfg.L);
  }
  if (auto* arr = doc["t_grid"].as_array()) {
    cfg.t_grid.clear();
    for (const auto& x : *arr) {
      const auto v = x.value<double>();
      if (!v) throw Error(ErrorKind::BadDocument, "t_grid: expected numbers");
      cfg.t_grid.push_back(*v);
    }
  }
  if (auto nw = doc["newton"]) {
    cfg.newton.max_iter = nw["max_iter"].value_or(cfg.newton.max_iter);
    cfg.newton.damping = nw["damping"].value_or(cfg.newton.damping);
    cfg.newton.tol = nw["tol"].value_or(cfg.newton.tol);
    cfg.newton.max_halvings = nw["max_halvings"].value_or(cfg.newton.max_halvings);
  }
  if (auto rc = doc["recentring"]) {
    if (auto c = rc["c"].value<double>()) {
      cfg.recentring.t = {0.0};
      cfg.recentring.c = {*c};
    } else {
      const auto* ts = rc["t"].as_array();
      const auto* cs = rc["c"].as_array();
      if (!ts || !cs || ts->size() != cs->size() || ts->empty())
        throw Error(ErrorKind::BadDocument, "recentring: give c = number or equal-length arrays t and c");
      for (std::size_t i = 0; i < ts->size(); ++i) {
        cfg.recentring.t.push_back(ts->get(i)->value<double>().value_or(0));
        cfg.recentring.c.push_back(cs->get(i)->value<double>().value_or(0));
        if (i && !(cfg.recentring.t[i] > cfg.recentring.t[i - 1]))
          throw Error(ErrorKind::BadDocument, "recentring: t must be increasing");
      }
    }
  }
  cfg.p = doc["p"].value_or(cfg.p);
  if (cfg.n < 8) throw Error(ErrorKind::BadDocument, "grid.n must be at least 8");
  if (!(cfg.L > 0)) throw Error(ErrorKind::BadDocument, "grid.L must be positive");
  if (!(cfg.newton.tol > 0) || cfg.newton.max_iter < 1 || !(cfg.newton.damping > 0 && cfg.newton.damping <= 1))
    throw Error(ErrorKind::BadDocument, "newton: need tol > 0, max_iter >= 1, 0 < damping <= 1");
  return cfg;
}

nlohmann::json path_state_to_json(const PathState& s) {
  return {{"t", s.t}, {"L", s.L}, {"shift", s.shift}, {"residual_norm", s.residual_norm},
          {"newton_iters", s.newton_iters}, {"xi", s.xi}, {"phi", s.phi}, {"F", s.F}};
}

std::vector<std::string> path_csv_header() {
  return {"t", "residual", "newton_iters", "shift", "sup_F_plus_f", "inf_F_plus_f", "entropy", "lap_bound_p",
          "grad_bound", "w12p", "twisted_scalar_residual", "int_abs_f", "int_exp_m4f"};
}

std::vector<std::string> path_csv_row(const PathState& s, const ObservableRecord& r) {
  return {format_double(s.t), format_double(s.residual_norm), std::to_string(s.newton_iters), format_double(s.shift),
          format_double(r.sup_F_plus_f), format_double(r.inf_F_plus_f), format_double(r.entropy),
          format_double(r.lap_bound_p), format_double(r.grad_bound), format_double(r.w12p),
          format_double(r.twisted_scalar_residual), format_double(r.int_abs_f), format_double(r.int_exp_m4f)};
}

}  // namespace csck
