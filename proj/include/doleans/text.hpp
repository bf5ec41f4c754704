#pragma once

#include <string>
#include <string_view>

namespace doleans {

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double x);

/// Strict full-string parse; throws std::invalid_argument on junk.
double parse_double(std::string_view text);

}  // namespace doleans
