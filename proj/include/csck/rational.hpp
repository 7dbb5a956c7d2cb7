#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace csck {

using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using RVec = std::vector<Rational>;

/// Parses "p/q", "p" (optionally signed). Anything containing '.', 'e' or
/// other non-digit characters is rejected with ErrorKind::BadDocument.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);

double to_double(const Rational& r);

std::vector<double> to_double(const RVec& v);

Rational dot(const RVec& a, const RVec& b);

}  // namespace csck
