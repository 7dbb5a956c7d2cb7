#pragma once

#include "csck/rational.hpp"

#include <array>
#include <map>

namespace csck {

/// Polynomial in at most three variables with exact rational coefficients.
class Polynomial {
 public:
  using Exponent = std::array<int, 3>;

  Polynomial() = default;
  explicit Polynomial(const Rational& constant);

  static Polynomial variable(int index);
  /// <a, x> + b
  static Polynomial affine(const RVec& a, const Rational& b);

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  int degree() const;
  bool is_zero() const { return terms_.empty(); }

  Rational evaluate(const RVec& x) const;
  double evaluate(const std::vector<double>& x) const;

  /// Composition x_j -> subs[j] (each subs[j] a polynomial in the same slots).
  Polynomial substitute(const std::array<Polynomial, 3>& subs) const;

  const std::map<Exponent, Rational>& terms() const { return terms_; }

 private:
  void add_term(const Exponent& e, const Rational& c);
  std::map<Exponent, Rational> terms_;
};

/// Integral of p over the k-simplex with the given vertices (k = verts.size() - 1),
/// where `measure` is the simplex's mass in the chosen measure.
Rational integrate_over_simplex(const Polynomial& p, const std::vector<RVec>& verts,
                                const Rational& measure);

}  // namespace csck
