#include "doctest.h"

#include "csck/continuity_path.hpp"
#include "csck/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <random>

using namespace csck;

namespace {

// Independent closed forms of the round metric: psi0'' = sech^2 / 2.
double sech2(double x) { return 1 / (std::cosh(x) * std::cosh(x)); }
double psi0(double x) { return 0.5 * std::log1p(std::exp(2 * x)); }
double psi0_2(double x) { return 0.5 * sech2(x); }
double log_psi0_2(double x) { return std::log(0.5 * sech2(x)); }

// The integrands below decay like e^{-2|x|}; [-30, 30] leaves < 1e-25 outside.
double integrate_line(const std::function<double(double)>& f) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -30.0, 30.0, 15, 1e-13);
}

// Manufactured F = a exp(-xi^2) with forcing chosen so that it solves the forced equation.
struct Manufactured {
  double a = 0.5;
  double F(double x) const { return a * std::exp(-x * x); }
  double F2(double x) const { return a * (4 * x * x - 2) * std::exp(-x * x); }
  double forcing(double x, double t) const {
    return psi0_2(x) * (1 - std::exp(F(x))) * (4 * t - (1 - t)) - t * F2(x);
  }
  double curvature(double x) const { return (2 * sech2(x) - F2(x)) / (psi0_2(x) * std::exp(F(x))); }
};

double manufactured_error(int n, double t) {
  const Manufactured m;
  const auto bg = make_background(n, 12);
  std::vector<double> g(n + 1);
  for (int i = 0; i <= n; ++i) g[i] = m.forcing(bg.xi[i], t);
  const auto s = solve_state(bg, t, std::vector<double>(n + 1, 0.0), NewtonOptions{}, g);
  double e = 0;
  for (int i = 0; i <= n; ++i) e = std::max(e, std::abs(s.F[i] - m.F(bg.xi[i])));
  return e;
}

double curvature_error(int n) {
  const Manufactured m;
  const auto bg = make_background(n, 12);
  PathState s;
  s.t = 0.5;
  s.xi = bg.xi;
  for (int i = 0; i <= n; ++i) s.F.push_back(m.F(bg.xi[i]));
  s.core = s.F;
  s.phi = bg.psi0;
  const auto r = scalar_curvature(s);
  double e = 0;
  for (int i = 0; i <= n; ++i) e = std::max(e, std::abs(r[i] - m.curvature(bg.xi[i])));
  return e;
}

PathState manufactured_state(int n, double t) {
  const Manufactured m;
  const auto bg = make_background(n, 12);
  std::vector<double> g(n + 1);
  for (int i = 0; i <= n; ++i) g[i] = m.forcing(bg.xi[i], t);
  return solve_state(bg, t, std::vector<double>(n + 1, 0.0), NewtonOptions{}, g);
}

}  // namespace

TEST_CASE("background matches the Legendre dual of the Guillemin potential") {
  const auto bg = make_background(512, 12);
  for (int i = 0; i <= 512; i += 7) {
    const double x = bg.xi[i];
    CHECK(bg.psi0[i] == doctest::Approx(psi0(x)).epsilon(1e-14));
    CHECK(bg.psi0_2[i] == doctest::Approx(psi0_2(x)).epsilon(1e-13));
    CHECK(Background::log_second(x) == doctest::Approx(log_psi0_2(x)).epsilon(1e-13));
    CHECK(bg.ric0[i] == doctest::Approx(4 * psi0_2(x)).epsilon(1e-13));
  }
  CHECK(bg.rbar == doctest::Approx(4).epsilon(1e-14));
  auto iv = std::make_shared<const Polytope>(standard_polytope("interval"));
  const auto uG = SymplecticPotential::guillemin(iv, 512);
  CHECK(std::abs(abreu_scalar_curvature(uG).average - bg.rbar) <= 1e-6);
  const auto c = legendre_dual(uG);
  for (std::size_t i = 0; i < c.xi.size(); i += 97) {
    if (std::abs(c.xi[i]) > 5) continue;
    CHECK(std::abs(c.psi0[i] - Background::value(c.xi[i])) <= 1e-8);
    CHECK(std::abs(c.psi0_2[i] - Background::second(c.xi[i])) <= 1e-6);
  }
}

TEST_CASE("path on CP1 stays at the round metric") {
  PathConfig cfg;
  cfg.n = 1024;
  cfg.t_grid = {0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.999};
  const auto states = solve_path(cfg);
  REQUIRE(states.size() == cfg.t_grid.size());
  const auto bg = make_background(cfg.n, cfg.L);
  for (const auto& s : states) {
    CHECK(s.residual_norm <= 1e-9);
    double fmax = 0;
    for (double f : s.F) fmax = std::max(fmax, std::abs(f));
    CHECK(fmax <= 1e-12);
    CHECK(curvature_deviation(s, bg.rbar) <= 1e-3);
    // anchored to the background at both ends
    for (int i : {0, 1, 2, cfg.n - 2, cfg.n - 1, cfg.n}) CHECK(std::abs(s.phi[i] - bg.psi0[i]) <= 1e-8);
  }
  CHECK(curvature_deviation(states.back(), 4) <= 1e-10);
}

TEST_CASE("Newton recovers the solution from a perturbed start") {
  const auto bg = make_background(1024, 12);
  for (double t : {0.15, 0.5, 0.9, 0.999}) {
    std::vector<double> F0(bg.xi.size());
    for (std::size_t i = 0; i < F0.size(); ++i) F0[i] = 0.3 * std::exp(-bg.xi[i] * bg.xi[i] / 4);
    const auto s = solve_state(bg, t, F0, NewtonOptions{});
    CHECK(s.residual_norm <= 1e-9);
    CHECK(s.newton_iters >= 1);
    double fmax = 0;
    for (double f : s.F) fmax = std::max(fmax, std::abs(f));
    CHECK(fmax <= 1e-9);
    CHECK(s.residual_history.front() > s.residual_history.back());
  }
  NewtonOptions tight;
  tight.max_iter = 1;
  std::vector<double> F0(bg.xi.size());
  for (std::size_t i = 0; i < F0.size(); ++i) F0[i] = 2 * std::exp(-bg.xi[i] * bg.xi[i]);
  CHECK_THROWS_WITH_AS(solve_state(bg, 0.5, F0, tight), doctest::Contains("t = 0.5"), Error);
  PathConfig bad;
  bad.t_grid = {0.5, 0.3};
  CHECK_THROWS_AS(solve_path(bad), Error);
  bad.t_grid = {0.5, 1.0};
  CHECK_THROWS_AS(solve_path(bad), Error);
}

TEST_CASE("manufactured solutions converge at least at second order") {
  for (double t : {0.3, 0.9}) {
    const double e1 = manufactured_error(256, t), e2 = manufactured_error(512, t), e3 = manufactured_error(1024, t);
    CHECK(e1 / e2 >= 4);
    CHECK(e2 / e3 >= 4);
    CHECK(e3 <= 1e-6);
  }
  const double c1 = curvature_error(256), c2 = curvature_error(512);
  CHECK(c1 / c2 >= 4);
  CHECK(c2 <= 1e-4);
}

TEST_CASE("split form agrees with the path equation") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1, 1);
  const auto bg = make_background(512, 12);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = U(rng), b = U(rng), t = 0.5 * (U(rng) + 1) * 0.98 + 0.01;
    std::vector<double> F(bg.xi.size());
    for (std::size_t i = 1; i + 1 < F.size(); ++i) F[i] = a * std::exp(-bg.xi[i] * bg.xi[i] / 3) + b * std::sin(bg.xi[i]) / std::cosh(bg.xi[i]);
    CHECK(split_equation_mismatch(bg, t, F) <= 1e-10);
  }
}

TEST_CASE("solutions minimise the twisted energy") {
  auto iv = std::make_shared<const Polytope>(standard_polytope("interval"));
  PathConfig cfg;
  cfg.n = 1024;
  cfg.t_grid = {0.5, 0.9};
  const auto states = solve_path(cfg);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1, 1);
  for (const auto& s : states) {
    const auto u = symplectic_potential(s, iv, 256);
    for (double v : u.v()) CHECK(std::abs(v) <= 1e-9);
    const double e0 = *twisted_energy(u, s.t).twisted;
    CHECK(e0 <= *twisted_energy(SymplecticPotential::guillemin(iv, 256), s.t).twisted + 1e-10);
    for (int k = 0; k < 20; ++k) {
      const double c1 = 0.02 * U(rng), c2 = 0.02 * U(rng), c3 = 0.02 * U(rng);
      const auto dv = u.sample([&](const Point& x) {
        const double y = x[0];
        return y * y * (1 - y) * (1 - y) * (c1 + c2 * y + c3 * y * y);
      });
      CHECK(*twisted_energy(u.plus(dv), s.t).twisted >= e0 - 1e-8);
    }
  }
}

TEST_CASE("pullback by translation") {
  PathConfig cfg;
  cfg.n = 1024;
  cfg.t_grid = {0.5, 0.9, 0.999};
  const auto states = solve_path(cfg);
  const auto bg = make_background(cfg.n, cfg.L);

  auto [same, tw0] = pullback_solution(states[0], 0);
  for (std::size_t i = 0; i < same.F.size(); ++i) {
    CHECK(std::abs(same.F[i] - states[0].F[i]) <= 1e-14);
    CHECK(std::abs(same.phi[i] - states[0].phi[i]) <= 1e-12);
    CHECK(tw0.theta[i] == 0);
    CHECK(tw0.f[i] == 0);
  }
  CHECK_THROWS_AS(pullback_solution(states[0], 7), Error);

  for (const auto& s : states) {
    auto [moved, tw] = pullback_solution(s, 1);
    double fmax = -1;
    for (double f : tw.f) fmax = std::max(fmax, f);
    CHECK(fmax <= 0);
    CHECK(fmax >= -1e-9);
    CHECK(tw.beta_min() >= -1e-12);
    CHECK(twisted_scalar_residual(moved, tw, bg.rbar) <= 1e-7);
    if (s.t >= 0.9) CHECK(tw.p_check >= 8);
    // u of the translated potential is u_G - c x + max(c, 0)
    auto iv = std::make_shared<const Polytope>(standard_polytope("interval"));
    const auto u = symplectic_potential(moved, iv, 128);
    for (int k = 0; k <= 128; ++k) CHECK(std::abs(u.v()[k] - (1 - static_cast<double>(k) / 128)) <= 1e-9);
  }

  // round trips on the solution and on a state with a nontrivial core
  for (const auto& s : {states[1], manufactured_state(1024, 0.7)}) {
    for (double c : {1.0, -2.5, 0.37}) {
      const auto there = pullback_solution(s, c).first;
      const auto back = pullback_solution(there, -c).first;
      CHECK(back.shift == doctest::Approx(s.shift));
      const double k = back.phi[cfg.n / 2] - s.phi[cfg.n / 2];
      for (std::size_t i = 0; i < s.F.size(); ++i) {
        CHECK(std::abs(back.F[i] - s.F[i]) <= 1e-8);
        CHECK(std::abs(back.phi[i] - s.phi[i] - k) <= 1e-8);
      }
    }
  }
}

TEST_CASE("observables against direct quadrature") {
  PathConfig cfg;
  cfg.n = 2048;
  cfg.t_grid = {0.5, 0.9, 0.99, 0.999};
  cfg.recentring = {{0.0}, {1.0}};
  const auto run = run_path(cfg);
  // entropy of the translated round metric: int (l(x+1) - l(x)) psi0''(x+1) dx, l = log psi0''
  const double entropy = integrate_line([](double x) { return (log_psi0_2(x + 1) - log_psi0_2(x)) * psi0_2(x + 1); });
  const double abs_theta = integrate_line([](double x) { return std::abs(psi0(x + 1) - psi0(x) - 1) * psi0_2(x); });
  for (std::size_t k = 0; k < run.states.size(); ++k) {
    const auto& r = run.observables[k];
    const double t = run.states[k].t;
    CHECK(r.entropy == doctest::Approx(entropy).epsilon(1e-8));
    CHECK(r.int_abs_f == doctest::Approx((1 - t) / t * abs_theta).epsilon(1e-8));
    CHECK(r.twisted_scalar_residual <= 1e-7);
    CHECK(std::isfinite(r.grad_bound));
    CHECK(std::isfinite(r.w12p));
    CHECK(r.int_exp_m4f <= 10);
  }
  CHECK(run.observables.back().int_abs_f <= 0.01 * run.observables[1].int_abs_f);

  // untranslated at t = 0.5: f = 0, so sup(F + f) = sup F
  PathConfig plain;
  plain.n = 1024;
  plain.t_grid = {0.5};
  const auto r0 = run_path(plain);
  double supF = -1e300;
  for (double f : r0.recentred[0].F) supF = std::max(supF, f);
  CHECK(r0.observables[0].sup_F_plus_f == supF);
  CHECK(r0.observables[0].twisted_scalar_residual <= 1e-7);
}

TEST_CASE("path config from TOML") {
  const auto cfg = path_config_from_toml(R"(
t_grid = [0.1, 0.5, 0.9]
p = 3
[grid]
n = 512
L = 10.0
[newton]
max_iter = 20
tol = 1e-10
[recentring]
t = [0.0, 1.0]
c = [0.0, 2.0]
)");
  CHECK(cfg.n == 512);
  CHECK(cfg.L == 10);
  CHECK(cfg.t_grid == std::vector<double>{0.1, 0.5, 0.9});
  CHECK(cfg.p == 3);
  CHECK(cfg.newton.max_iter == 20);
  CHECK(cfg.newton.tol == 1e-10);
  CHECK(cfg.recentring.at(0.5) == doctest::Approx(1.0));
  CHECK(path_config_from_toml("[recentring]\nc = 1.5\n").recentring.at(0.99) == 1.5);
  CHECK_THROWS_AS(path_config_from_toml("[grid]\nn = 4\n"), Error);
  CHECK_THROWS_AS(path_config_from_toml("t_grid = [0.1, \"x\"]"), Error);
  CHECK_THROWS_AS(path_config_from_toml("[recentring]\nt = [0.0]\nc = [1.0, 2.0]\n"), Error);
  CHECK_THROWS_AS(path_config_from_toml("[newton\n"), Error);
  CHECK(path_csv_header().size() == 13);
}
