#include "d2t/numfmt.hpp"

#include <charconv>

#include "d2t/error.hpp"

namespace d2t {

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double x = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorCode::BadFormat, "not a number: '" + std::string(s) + "'");
  }
  return x;
}

}  // namespace d2t
