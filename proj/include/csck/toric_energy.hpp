#pragma once

#include "csck/polytope.hpp"

#include "json.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace csck {

using Point = std::vector<double>;

/// Closed-form Guillemin data u_G = 1/2 sum l_k log l_k, l_k = <nu_k, x> + c_k.
struct Guillemin {
  static double value(const Polytope& p, const Point& x);
  static Point gradient(const Polytope& p, const Point& x);
  /// Row-major dim x dim.
  static std::vector<double> hessian(const Polytope& p, const Point& x);
};

/// u = u_G + v with v sampled on the (N+1)^dim tensor grid spanning the
/// bounding box of P, node-major (index i*(N+1)+j in dim 2).
class SymplecticPotential {
 public:
  SymplecticPotential(std::shared_ptr<const Polytope> p, int n, std::vector<double> v);

  static SymplecticPotential guillemin(std::shared_ptr<const Polytope> p, int n);
  static SymplecticPotential from_function(std::shared_ptr<const Polytope> p, int n,
                                           const std::function<double(const Point&)>& v);

  const Polytope& polytope() const { return *poly_; }
  const std::shared_ptr<const Polytope>& polytope_ptr() const { return poly_; }
  int n() const { return n_; }
  int dim() const { return poly_->dim(); }
  std::size_t node_count() const { return v_.size(); }
  const std::vector<double>& v() const { return v_; }

  double h(int axis) const { return (hi_[axis] - lo_[axis]) / n_; }
  double lo(int axis) const { return lo_[axis]; }
  double hi(int axis) const { return hi_[axis]; }
  /// Coordinate of grid index k along an axis.
  double coord(int axis, int k) const { return lo_[axis] + (hi_[axis] - lo_[axis]) * k / n_; }
  Point node(std::size_t index) const;

  bool same_grid(const SymplecticPotential& other) const;

  /// v + s * dv on the same grid.
  SymplecticPotential plus(const std::vector<double>& dv, double s = 1.0) const;
  /// Correction shifted so that int_P v dmu = 0 (trapezoid in dim 1).
  SymplecticPotential gauged() const;

  /// Nodal samples of a function on this grid.
  std::vector<double> sample(const std::function<double(const Point&)>& f) const;

 private:
  std::shared_ptr<const Polytope> poly_;
  int n_;
  std::vector<double> lo_, hi_;
  std::vector<double> v_;
};

/// Positive nodal weights w_i with sum_i w_i g_i approximating int_P g dmu
/// (trapezoid in dim 1, integrated bilinear hats in dim 2). Distances built on
/// them are weighted l^p norms, so Minkowski holds exactly.
std::vector<double> node_weights(const SymplecticPotential& u);

/// Grid validation shared by operations combining two potentials.
void require_same_grid(const SymplecticPotential& a, const SymplecticPotential& b);

/// Abreu scalar curvature S(u) = -(1/u'')'' at every node of a dim-1 potential.
struct ScalarCurvature {
  std::vector<double> s;
  double average;  // int S dx / vol
};

ScalarCurvature abreu_scalar_curvature(const SymplecticPotential& u);

/// Complex-side data on xi in [-L, L]: psi = Legendre transform of u, psi0 of u_G.
struct ComplexPotential {
  double L = 12;
  std::vector<double> xi;
  std::vector<double> x;      // x(xi) = psi'(xi)
  std::vector<double> psi;
  std::vector<double> psi2;   // psi''
  std::vector<double> psi0;
  std::vector<double> psi0_2;
  std::vector<double> phi;    // psi - psi0
  std::vector<double> F;      // log(psi'' / psi0'')
  double tail = 0;            // bound on the mass of the xi-integrals outside [-L, L]

  double h() const { return xi[1] - xi[0]; }
};

struct LegendreOptions {
  double L = 12;
  int m = 0;  // xi intervals; 0 means 4 * N
  double tail_tol = 1e-9;
};

ComplexPotential legendre_dual(const SymplecticPotential& u, const LegendreOptions& opt = {});

/// Inverse of u_G' on an interval [a, b]: the x with u_G'(x) = eta.
double guillemin_inverse_1d(double a, double b, double eta);

/// Complex-side functionals with the Kahler form represented by psi''/2 dxi.
double j_omega0(const ComplexPotential& c);
double aubin_j(const ComplexPotential& c);
double i_functional(const ComplexPotential& c);

struct EnergyRecord {
  double entropy_term = 0;
  double lp_term = 0;
  double k_energy = 0;
  std::optional<double> t;
  std::optional<double> twisted;
  std::optional<double> j_omega0;
  std::optional<double> aubin_j;
  std::optional<double> i_functional;
};

/// K(u) = -1/2 int_P log(det H_u / det H_G) dmu + L_P(u - u_G). Complex-side
/// functionals are filled in dimension 1 when `with_complex` is set.
EnergyRecord mabuchi_energy(const SymplecticPotential& u, bool with_complex = false,
                            const LegendreOptions& opt = {});

/// Entropy and L_P parts separately (dims 1, 2).
double entropy_term(const SymplecticPotential& u);
double lp_term(const SymplecticPotential& u);

/// t K + (1 - t) J_omega0 (dimension 1).
EnergyRecord twisted_energy(const SymplecticPotential& u, double t, const LegendreOptions& opt = {});

/// Directional derivative of the twisted energy at u along a correction dv,
/// assembled from the variational integrands: t/2 int (S - Sbar) dv dx and
/// (1 - t)/2 int (-dv o x)(psi0'' - psi'') dxi.
double twisted_energy_derivative(const SymplecticPotential& u, const std::vector<double>& dv, double t,
                                 const LegendreOptions& opt = {});

nlohmann::json potential_to_json(const SymplecticPotential& u);
/// The polytope is resolved by name through `resolve`.
SymplecticPotential potential_from_json(const nlohmann::json& doc,
                                        const std::function<std::shared_ptr<const Polytope>(const std::string&)>& resolve);

std::vector<std::string> energy_csv_header();
std::vector<std::string> energy_csv_row(const EnergyRecord& r);

}  // namespace csck
