#include "csck/polynomial.hpp"

#include <algorithm>

namespace csck {

Polynomial::Polynomial(const Rational& constant) { add_term({0, 0, 0}, constant); }

Polynomial Polynomial::variable(int index) {
  Polynomial p;
  Exponent e{0, 0, 0};
  e[index] = 1;
  p.add_term(e, 1);
  return p;
}

Polynomial Polynomial::affine(const RVec& a, const Rational& b) {
  Polynomial p(b);
  for (std::size_t j = 0; j < a.size(); ++j) p += variable(static_cast<int>(j)) * a[j];
  return p;
}

void Polynomial::add_term(const Exponent& e, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& s) {
  if (s == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      out.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, ca * cb);
    }
  }
  return out;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2]);
  return d;
}

Rational Polynomial::evaluate(const RVec& x) const {
  Rational s = 0;
  for (const auto& [e, c] : terms_) {
    Rational m = c;
    for (std::size_t j = 0; j < 3; ++j) {
      for (int k = 0; k < e[j]; ++k) m *= x.at(j);
    }
    s += m;
  }
  return s;
}

double Polynomial::evaluate(const std::vector<double>& x) const {
  double s = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = to_double(c);
    for (std::size_t j = 0; j < 3; ++j) {
      for (int k = 0; k < e[j]; ++k) m *= x.at(j);
    }
    s += m;
  }
  return s;
}

Polynomial Polynomial::substitute(const std::array<Polynomial, 3>& subs) const {
  // cache powers of each substitution
  std::array<std::vector<Polynomial>, 3> powers;
  for (std::size_t j = 0; j < 3; ++j) powers[j].push_back(Polynomial(Rational(1)));
  Polynomial out;
  for (const auto& [e, c] : terms_) {
    Polynomial m(c);
    for (std::size_t j = 0; j < 3; ++j) {
      while (static_cast<int>(powers[j].size()) <= e[j]) powers[j].push_back(powers[j].back() * subs[j]);
      if (e[j] > 0) m = m * powers[j][e[j]];
    }
    out += m;
  }
  return out;
}

namespace {

Rational factorial(int n) {
  Rational f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

Rational integrate_over_simplex(const Polynomial& p, const std::vector<RVec>& verts,
                                const Rational& measure) {
  const int k = static_cast<int>(verts.size()) - 1;
  const std::size_t dim = verts.front().size();
  if (k == 0) {
    RVec x(3, 0);
    std::copy(verts[0].begin(), verts[0].end(), x.begin());
    return measure * p.evaluate(x);
  }
  // x_j = v0_j + sum_m lambda_m (v_m - v0)_j, lambda in slots 0..k-1
  std::array<Polynomial, 3> subs;
  for (std::size_t j = 0; j < 3; ++j) {
    if (j >= dim) continue;
    Polynomial s(verts[0][j]);
    for (int m = 1; m <= k; ++m) s += Polynomial::variable(m - 1) * (verts[m][j] - verts[0][j]);
    subs[j] = s;
  }
  const Polynomial q = p.substitute(subs);
  Rational total = 0;
  for (const auto& [e, c] : q.terms()) {
    Rational num = 1;
    int deg = 0;
    for (int m = 0; m < k; ++m) {
      num *= factorial(e[m]);
      deg += e[m];
    }
    total += c * num / factorial(deg + k);
  }
  return measure * factorial(k) * total;
}

}  // namespace csck
