#pragma once

#include "csck/toric_energy.hpp"

#include "json.hpp"

#include <functional>
#include <string>
#include <vector>

namespace csck {

/// Fubini-Study data on the xi-grid of [-L, L]: psi0 = 1/2 log(1 + e^{2 xi}),
/// the Legendre dual of the Guillemin potential of [0, 1].
struct Background {
  int n = 0;  // intervals
  double L = 12;
  std::vector<double> xi;
  std::vector<double> psi0, psi0_1, psi0_2;  // value, first and second derivative
  std::vector<double> ric0;                  // Ricci coefficient -(log psi0'')''
  double rbar = 0;                           // average scalar curvature of the class

  double h() const { return 2 * L / n; }

  static double value(double xi);
  static double first(double xi);
  static double second(double xi);
  /// log psi0'' and its first two derivatives.
  static double log_second(double xi);
  static double log_second_d1(double xi);
  static double log_second_d2(double xi);
};

Background make_background(int n, double L = 12);

struct NewtonOptions {
  int max_iter = 50;
  double damping = 1.0;  // first trial step
  double tol = 1e-9;     // sup norm of the residual
  int max_halvings = 10; // continuation step halvings per requested t
};

/// Piecewise-linear translation schedule c(t); empty means no recentring.
struct Recentring {
  std::vector<double> t, c;
  double at(double s) const;
  bool empty() const { return t.empty(); }
};

struct PathConfig {
  int n = 1024;
  double L = 12;
  std::vector<double> t_grid{0.1, 0.3, 0.5, 0.7, 0.9};
  NewtonOptions newton;
  Recentring recentring;
  double p = 2;  // exponent of the L^p observables
};

/// phi = psi0(. + shift) - max(shift, 0) + w with w decaying at -L, and
/// F = log(phi'' / psi0'') = core(. + shift) + log psi0''(. + shift) - log psi0''.
struct PathState {
  double t = 0;
  double L = 12;
  double shift = 0;
  std::vector<double> xi;
  std::vector<double> phi;
  std::vector<double> F;
  std::vector<double> core;  // decaying part of F, sampled at xi + shift
  double residual_norm = 0;
  int newton_iters = 0;
  std::vector<double> residual_history;

  double h() const { return xi[1] - xi[0]; }
  int n() const { return static_cast<int>(xi.size()) - 1; }
};

/// Residual of t(R - Rbar) = (1 - t)(psi0''/phi'' - 1) multiplied through by
/// phi'': psi0''(1 - e^F)(t Rbar - (1 - t)) - t F'' - g, at interior nodes,
/// with F(+-L) = 0 and odd reflection beyond the ends. `forcing` may be empty.
std::vector<double> path_residual(const Background& bg, double t, const std::vector<double>& F,
                                  const std::vector<double>& forcing = {});

/// Damped Newton for one t from the initial guess F0 (banded direct solve).
PathState solve_state(const Background& bg, double t, std::vector<double> F0, const NewtonOptions& opt,
                      const std::vector<double>& forcing = {});

/// Continuation over config.t_grid, warm-starting each t from the previous one
/// and halving the step on divergence.
std::vector<PathState> solve_path(const PathConfig& config);

/// Scalar curvature R = -(log phi'')''/phi'' on the grid; the background
/// contribution is taken in closed form and the core by a 5-point difference.
std::vector<double> scalar_curvature(const PathState& s);

/// sup over the grid of |R - rbar|.
double curvature_deviation(const PathState& s, double rbar);

struct TwistData {
  double t = 0;
  double shift = 0;
  std::vector<double> xi;
  std::vector<double> beta0;  // ((1 - t)/t) psi0''
  std::vector<double> theta;  // psi0(. + shift) - psi0 - max(shift, 0), so sup theta = 0
  std::vector<double> f;      // ((1 - t)/t) theta
  std::vector<double> f1, f2; // derivatives of f
  double p_check = 0;         // largest scanned p with int e^{-p f} dvol0 <= 10 vol

  /// min over interior nodes of beta0 + (second difference of f): beta >= 0 on the grid.
  double beta_min() const;
};

/// Twist data for translation by `shift` at parameter t.
TwistData make_twist(const Background& bg, double t, double shift, double p_max = 64);

/// Translation xi -> xi + c of a state. Returns the pulled-back state and the
/// twist data of its accumulated shift.
std::pair<PathState, TwistData> pullback_solution(const PathState& s, double c);

/// Residual of R_phi = tr_phi beta + R, R = Rbar - (1 - t)/t, sup over the grid.
double twisted_scalar_residual(const PathState& s, const TwistData& tw, double rbar);

struct ObservableRecord {
  double t = 0;
  double sup_F_plus_f = 0, inf_F_plus_f = 0;
  double entropy = 0;       // int F e^F dvol0
  double lap_bound_p = 0;   // int e^{(p-1) f} (1 + Delta phi)^p dvol0
  double grad_bound = 0;    // sup |grad_phi (F + f)|_phi
  double w12p = 0;          // (int |F + f|^{2p} + |grad (F + f)|^{2p} dvol_phi)^{1/2p}
  double twisted_scalar_residual = 0;
  double int_abs_f = 0;     // int |f| dvol0
  double int_exp_m4f = 0;   // int e^{-4 f} dvol0
  double tail = 0;          // dvol0 mass outside [-L, L]
};

ObservableRecord section_observables(const PathState& s, const TwistData& tw, double p);

/// Split form of the path equation: phi'' = psi0'' e^F together with
/// Delta_phi F = -(Rbar - (1 - t)/t) + tr_phi(Ric0 - ((1 - t)/t) omega0).
/// Returns the max relative mismatch of -t phi'' (second relation) against path_residual.
double split_equation_mismatch(const Background& bg, double t, const std::vector<double>& F);

/// Symplectic potential u = Legendre transform of the state's phi on an n-interval grid of [0, 1].
SymplecticPotential symplectic_potential(const PathState& s, std::shared_ptr<const Polytope> interval, int n);

/// Solved states, their recentred pullbacks c(t) with twist data, and the observables of each.
struct PathRun {
  Background background;
  std::vector<PathState> states;
  std::vector<PathState> recentred;
  std::vector<TwistData> twists;
  std::vector<ObservableRecord> observables;
};

PathRun run_path(const PathConfig& config);

PathConfig path_config_from_toml(const std::string& text);
nlohmann::json path_state_to_json(const PathState& s);

std::vector<std::string> path_csv_header();
std::vector<std::string> path_csv_row(const PathState& s, const ObservableRecord& r);

}  // namespace csck
