#pragma once

#include "csck/polytope.hpp"

#include <optional>
#include <string>
#include <vector>

namespace csck {

struct AffinePiece {
  RVec a;
  Rational b;

  Rational evaluate(const RVec& x) const { return dot(a, x) + b; }
  double evaluate(const std::vector<double>& x) const;
  Polynomial polynomial() const { return Polynomial::affine(a, b); }
  friend bool operator==(const AffinePiece& x, const AffinePiece& y) { return x.a == y.a && x.b == y.b; }
  friend bool operator<(const AffinePiece& x, const AffinePiece& y) { return x.a != y.a ? x.a < y.a : x.b < y.b; }
};

/// f(x) = max_i <a_i, x> + b_i.
class PLConvexFn {
 public:
  explicit PLConvexFn(std::vector<AffinePiece> pieces);

  static PLConvexFn affine(RVec a, Rational b);
  /// max(0, <a, x> - c)
  static PLConvexFn crease(RVec a, Rational c);
  /// Sum of max(0, <a1,x> - c1) and max(0, <a2,x> - c2).
  static PLConvexFn crease_pair(const RVec& a1, const Rational& c1, const RVec& a2, const Rational& c2);

  const std::vector<AffinePiece>& pieces() const { return pieces_; }
  int dim() const { return static_cast<int>(pieces_.front().a.size()); }

  Rational evaluate(const RVec& x) const;
  double evaluate(const std::vector<double>& x) const;

  /// Cell decomposition of P on which each piece is the maximum. Pieces that
  /// never strictly dominate on P contribute no cell.
  PiecewisePolynomial linearity_cells(const Polytope& p) const;

  /// True if a single piece attains the max on all of P.
  bool is_affine_on(const Polytope& p) const;

  PLConvexFn scaled(const Rational& s) const;

 private:
  std::vector<AffinePiece> pieces_;
};

PLConvexFn operator+(const PLConvexFn& f, const PLConvexFn& g);

Rational lp_functional(const Polytope& p, const PLConvexFn& f);
Rational lp_functional(const Polytope& p, const PiecewisePolynomial& f);
Rational lp_functional(const Polytope& p, const Polynomial& f);

struct NormalizedPL {
  PiecewisePolynomial f_tilde;  // cells of f with the affine part subtracted
  AffinePiece affine_part;

  bool is_zero() const;
};

/// L^2(P, dmu) projection of f onto affine functions and the remainder.
NormalizedPL normalize_pl(const Polytope& p, const PLConvexFn& f);
NormalizedPL normalize_pl(const Polytope& p, const PiecewisePolynomial& f);

/// Exact integral of |g| over P for a piecewise-affine g.
Rational abs_integral(const Polytope& p, const PiecewisePolynomial& g);

struct FutakiResult {
  RVec gradient;  // gradient_j = L_P(x_j)
  Rational constant;
};

FutakiResult futaki(const Polytope& p);

enum class Criterion { K, Uniform };

std::string to_string(Criterion c);
Criterion criterion_from_string(const std::string& s);

struct CreaseDirection {
  RVec a;
  std::vector<Rational> offsets;
};

struct ScanFamily {
  std::vector<CreaseDirection> directions;
  bool include_pairs = false;
};

/// One crease of a scanned candidate.
struct Crease {
  RVec a;
  Rational c;
  friend bool operator==(const Crease& x, const Crease& y) { return x.a == y.a && x.c == y.c; }
  friend bool operator<(const Crease& x, const Crease& y) { return x.a != y.a ? x.a < y.a : x.c < y.c; }
};

struct ScanRow {
  std::vector<Crease> creases;  // one or two
  Rational lp;
  Rational abs_tilde;             // integral of |f~|
  std::optional<Rational> ratio;  // lp / abs_tilde when abs_tilde > 0
};

struct StabilityReport {
  Criterion criterion;
  Rational min_value;
  std::optional<Rational> margin;  // uniform only: max(0, inf ratio)
  PLConvexFn witness;
  std::vector<Crease> witness_creases;
  std::size_t scan_size = 0;  // candidates evaluated
  std::size_t skipped = 0;    // vanishing on P, or f~ = 0 for the uniform criterion
  std::vector<ScanRow> rows;  // in candidate order
};

/// Minimises L_P (K) or L_P / int|f~| (uniform) over crease candidates.
/// Ties resolve to the lexicographically smallest (direction, offset) key.
StabilityReport stability_scan(const Polytope& p, const ScanFamily& family, Criterion criterion,
                               unsigned jobs = 0);

}  // namespace csck
