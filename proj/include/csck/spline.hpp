#pragma once

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include <vector>

namespace csck {

using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;

/// Cubic B-spline through nodal samples with 4th-order one-sided end slopes
/// (the library's own end-slope estimate is too crude in the last cell).
inline Spline make_spline(const std::vector<double>& v, double a, double h) {
  const std::size_t n = v.size() - 1;
  const double d0 = (-25 * v[0] + 48 * v[1] - 36 * v[2] + 16 * v[3] - 3 * v[4]) / (12 * h);
  const double dn = (25 * v[n] - 48 * v[n - 1] + 36 * v[n - 2] - 16 * v[n - 3] + 3 * v[n - 4]) / (12 * h);
  return Spline(v.data(), v.size(), a, h, d0, dn);
}

}  // namespace csck
