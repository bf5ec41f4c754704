#include "doleans/text.hpp"

#include <charconv>
#include <stdexcept>
#include <system_error>

namespace doleans {

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double x = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto res = std::from_chars(first, last, x);
  if (res.ec != std::errc() || res.ptr != last || first == last)
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  return x;
}

}  // namespace doleans
