#pragma once

#include <string>
#include <vector>

namespace csck {

/// Shortest representation that round-trips (at most 17 significant digits);
/// "inf", "-inf", "nan" for non-finite values.
std::string format_double(double x);

/// Joins already-formatted fields with commas.
std::string csv_line(const std::vector<std::string>& fields);

}  // namespace csck
