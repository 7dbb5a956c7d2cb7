#pragma once

#include "csck/stability.hpp"
#include "csck/toric_energy.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace csck {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// (sum_i w_i |f_i|^p)^(1/p); the sup over nodes with w_i > 0 for p = kInfinity.
double weighted_norm(const std::vector<double>& f, const std::vector<double>& w, double p);

/// || u0 - u1 ||_{L^p(P, dmu)}; p = kInfinity gives the sup norm over nodes in P.
double dp_distance(const SymplecticPotential& u0, const SymplecticPotential& u1, double p);

struct AffineFn {
  std::vector<double> a;
  double b = 0;
  double operator()(const Point& x) const;
};

struct DpGResult {
  double value;
  AffineFn minimizer;  // l minimising || u0 - u1 - l ||_p
};

/// min over affine l of || u0 - u1 - l ||_p. p = 2 by weighted least squares;
/// other p by subgradient descent from the p = 2 solution and a Nelder-Mead polish.
DpGResult dpG_distance(const SymplecticPotential& u0, const SymplecticPotential& u1, double p);
/// Same for a nodal difference g on the grid of `grid`.
DpGResult dpG_of(const SymplecticPotential& grid, const std::vector<double>& g, double p);

/// (1 - t) u0 + t u1.
SymplecticPotential geodesic_point(const SymplecticPotential& u0, const SymplecticPotential& u1, double t);

/// s -> base + s f with f a convex direction sampled on the base grid.
class GeodesicRay {
 public:
  static GeodesicRay from_pl(const SymplecticPotential& base, const PLConvexFn& f, double p = 1, bool unit_speed = false);
  static GeodesicRay from_grid(const SymplecticPotential& base, std::vector<double> f, double p = 1, bool unit_speed = false);

  const SymplecticPotential& base() const { return base_; }
  const std::vector<double>& direction() const { return f_; }
  const std::optional<PLConvexFn>& pl() const { return pl_; }
  double p() const { return p_; }
  bool unit_speed() const { return unit_speed_; }
  /// || f - best affine ||_p.
  double speed() const { return speed_; }
  /// Scale applied to the supplied direction (1 unless unit_speed).
  double scale() const { return scale_; }

  SymplecticPotential at(double s) const { return base_.plus(f_, s); }

  GeodesicRay with_base(const SymplecticPotential& base) const;

 private:
  GeodesicRay(SymplecticPotential base, std::vector<double> f, std::optional<PLConvexFn> pl, double p, bool unit_speed);

  SymplecticPotential base_;
  std::vector<double> f_;
  std::optional<PLConvexFn> pl_;
  double p_;
  bool unit_speed_;
  double speed_ = 0;
  double scale_ = 1;
};

/// Minimum over grid lines of the second differences of f (axes and diagonals in dim 2).
double convexity_defect(const SymplecticPotential& grid, const std::vector<double>& f);

struct YenResult {
  double yen;
  std::vector<double> increments;  // K(u + (k+1) f) - K(u + k f), k < k_max
  double monotonicity_defect;      // min_k increments[k+1] - increments[k]
};

YenResult yen_invariant(const GeodesicRay& ray, int k_max);

GeodesicRay transplant_ray(const GeodesicRay& ray, const SymplecticPotential& new_base);

enum class Verdict { StrictlyStable, BorderlineHolomorphic, Destabilizing };
std::string to_string(Verdict v);

struct RayClassification {
  Verdict verdict;
  double yen;
  double affine_residual;  // d_1 distance from the direction to the affine functions
  std::vector<double> increments;
};

RayClassification classify_ray(const GeodesicRay& ray, int k_max = 8, double tol = 1e-6);

/// t -> d_p(r1(t), r2(t)) on the given parameter values.
std::vector<double> ray_gap_profile(const GeodesicRay& r1, const GeodesicRay& r2, double p, const std::vector<double>& ts);

struct DichotomyReport {
  bool slope_branch;          // d/t stabilises to a positive limit
  bool nonincreasing_branch;  // t -> d is nonincreasing
  double limit_slope;
  double slope_trend;         // |last two secant slopes|
  double increase_defect;     // max_k d(t_{k+1}) - d(t_k)
};

/// Secant slopes of the gap on a geometric grid over [t0, t1].
DichotomyReport dichotomy_check(const GeodesicRay& r1, const GeodesicRay& r2, double p, double t0 = 10,
                                double t1 = 1000, int points = 16, double trend_tol = 1e-4, double flat_tol = 1e-10);

}  // namespace csck
