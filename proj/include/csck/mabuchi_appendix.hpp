#pragma once

#include "json.hpp"

#include <functional>
#include <string>
#include <vector>

namespace csck {

/// Periodic m1 x m2 grid on [0, 2pi)^2 (m2 = 1: functions of xi1 only) and
/// nt time intervals on [0, 1]. Node p = i1 * m2 + i2.
struct TorusGrid {
  int m1 = 32, m2 = 32, nt = 16;
  int nodes() const { return m1 * m2; }
  double h1() const;
  double h2() const;
  double tau() const { return 1.0 / nt; }
  double xi1(int p) const;
  double xi2(int p) const;
};

using Field = std::vector<double>;

/// Conventions of the flat torus: g_phi = 1 + (1/2) Delta phi relative to the flat
/// metric, <grad u, grad v>_phi = (u1 v1 + u2 v2) / (2 g), dvol_phi = g dxi1 dxi2 / (2pi)^2.
namespace torus {

Field d1(const TorusGrid& g, const Field& u);  // centered d/dxi1
Field d2(const TorusGrid& g, const Field& u);  // centered d/dxi2 (0 when m2 = 1)
Field laplacian(const TorusGrid& g, const Field& u);  // flat 5-point (3-point when m2 = 1)
Field metric(const TorusGrid& g, const Field& phi);   // 1 + Delta phi / 2
double integrate(const TorusGrid& g, const Field& phi, const Field& u);  // int u dvol_phi
Field dot(const TorusGrid& g, const Field& phi, const Field& u, const Field& v);
/// Delta_phi u = Delta u / (2 g), self-adjoint for int . dvol_phi.
Field laplacian_phi(const TorusGrid& g, const Field& phi, const Field& u);
/// <u, v>_phi = int u v dvol_phi.
double inner(const TorusGrid& g, const Field& phi, const Field& u, const Field& v);

Field sample(const TorusGrid& g, const std::function<double(double, double)>& f);

}  // namespace torus

struct EpsGeodesicOptions {
  int max_iter = 40;
  double tol = 1e-9;  // sup norm of the residual
};

/// phi(., t_j), j = 0..nt, solving phi_tt g - |grad phi_t|^2 / 2 = eps.
struct TorusPotentialPath {
  TorusGrid grid;
  double eps = 0;
  std::vector<Field> phi;
  double residual = 0;
  int newton_iters = 0;
  double admissibility_margin = 0;  // min over nodes of g
  std::vector<double> eps_schedule;  // continuation values used, ending at eps

  /// X = phi_t at every level (centered inside, one-sided 2nd order at the ends).
  std::vector<Field> velocity() const;
};

/// Residual of the discrete eps-geodesic equation at interior levels.
std::vector<Field> eps_geodesic_residual(const TorusGrid& grid, const std::vector<Field>& phi, double eps);

/// Newton with a sparse direct solve; on divergence, continues in eps from 1 downward.
TorusPotentialPath solve_eps_geodesic(const TorusGrid& grid, const Field& phi0, const Field& phi1, double eps,
                                      const EpsGeodesicOptions& opt = {});

/// L^1(dt dvol_phi) norm of phi_tt - |grad phi_t|^2_phi over interior levels.
double geodesic_slack(const TorusPotentialPath& path);

/// (nabla_X U)(t_j) = U_t - <grad X, grad U>_phi with X = phi_t, at interior levels 1..nt-1.
struct ConnectionField {
  std::vector<Field> values;  // index j - 1
};

ConnectionField mabuchi_connection(const TorusPotentialPath& path, const std::vector<Field>& U);

/// {f, h}_phi = (f1 h2 - f2 h1) / (2 g).
Field poisson_bracket(const TorusGrid& g, const Field& phi, const Field& f, const Field& h);

/// Convex chi with first and second derivatives.
struct Chi {
  std::function<double(double)> f, d1, d2;
  static Chi half_square();                 // x^2 / 2
  static Chi square();                      // x^2
  static Chi regularized(double p, double delta);  // (x^2 + delta^2)^{p/2}
};

/// phi(xi, s, t) = sum over modes of c(s, t) * trig(k1 xi1 + k2 xi2), with c a
/// polynomial sum_{a,b} coef[a][b] s^a t^b.
struct ModeFamily {
  struct Mode {
    int k1 = 0, k2 = 0;
    bool sine = false;
    std::vector<std::vector<double>> coef;
  };
  std::vector<Mode> modes;

  /// d^a/ds^a d^b/dt^b phi at (s, t) sampled on the grid.
  Field sample(const TorusGrid& g, double s, double t, int ds = 0, int dt = 0) const;
};

struct CurvatureCheck {
  double lhs;  // (chi'(Y), nabla_Y nabla_X X - nabla_X nabla_Y X)
  double rhs;  // -int chi''(Y) {X, Y}^2 dvol_phi
  double defect;
};

/// Curvature identity at (s, t) for an analytic family; s and t derivatives are
/// exact, spatial derivatives are centered differences.
CurvatureCheck curvature_identity_check(const ModeFamily& family, const Chi& chi, const TorusGrid& grid, double s,
                                        double t);

/// d^2/dt^2 int chi(Y) dvol_phi - int chi''(Y) (nabla_X Y)^2 dvol_phi on a family of
/// eps-geodesics with endpoints c0(s), c1(s); Y by centered differences in s.
struct SecondVariationCheck {
  std::vector<double> defect;  // interior levels
  double min_defect;
};

SecondVariationCheck convexity_along_family(const ModeFamily& c0, const ModeFamily& c1, const Chi& chi, double eps,
                                   const TorusGrid& grid, double s, double ds, const EpsGeodesicOptions& opt = {});
/// Same, sharing the three solves across several chi.
std::vector<SecondVariationCheck> convexity_along_family(const ModeFamily& c0, const ModeFamily& c1,
                                                const std::vector<Chi>& chis, double eps, const TorusGrid& grid,
                                                double s, double ds, const EpsGeodesicOptions& opt = {});

struct LengthProfile {
  std::vector<double> t;
  std::vector<double> L;
  double convexity_defect;  // min second difference of L
};

/// L(t) = int_0^1 (int |d_s phi|^p dvol_phi)^{1/p} ds over S + 1 samples of s,
/// one eps-geodesic per sample (solved with `jobs` workers).
LengthProfile length_profile(const ModeFamily& c0, const ModeFamily& c1, double p, double eps, const TorusGrid& grid,
                             int S, unsigned jobs = 1, const EpsGeodesicOptions& opt = {});

/// Length int_0^1 (int |phi_t|^p dvol_phi)^{1/p} dt of the eps-geodesic joining a and b.
double eps_distance(const TorusGrid& grid, const Field& a, const Field& b, double p, double eps,
                    const EpsGeodesicOptions& opt = {});

ModeFamily mode_family_from_toml(const std::string& text, const std::string& table);
nlohmann::json path_to_json(const TorusPotentialPath& path);

}  // namespace csck
