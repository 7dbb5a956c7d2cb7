#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <vector>

namespace csck {

/// Nodes and weights on [0, 1].
struct QuadRule {
  std::vector<double> x;
  std::vector<double> w;
};

/// N-point Gauss-Legendre rule mapped to [0, 1].
template <unsigned N>
QuadRule gauss_unit() {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& a = G::abscissa();
  const auto& wt = G::weights();
  QuadRule r;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double sides = (i == 0 && N % 2 == 1) ? 1 : 2;
    r.x.push_back(0.5 + 0.5 * a[i]);
    r.w.push_back(0.5 * wt[i]);
    if (sides == 2) {
      r.x.push_back(0.5 - 0.5 * a[i]);
      r.w.push_back(0.5 * wt[i]);
    }
  }
  return r;
}

/// Trapezoid weights for n + 1 equally spaced nodes with spacing h.
inline std::vector<double> trapezoid_weights(int n, double h) {
  std::vector<double> w(n + 1, h);
  w.front() = w.back() = h / 2;
  return w;
}

}  // namespace csck
