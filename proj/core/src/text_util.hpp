#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace momliq::detail {

std::string_view trim(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char delim);

/// Finite decimal number; returns false on anything else.
bool parse_double(std::string_view s, double& out);

/// Shortest text that parses back to exactly `x`.
std::string format_exact(double x);

}  // namespace momliq::detail
