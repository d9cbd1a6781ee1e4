#pragma once

#include <string>
#include <string_view>

namespace d2t {

/// Shortest text that parses back to exactly `x`.
std::string format_double(double x);
double parse_double(std::string_view s);

}  // namespace d2t
