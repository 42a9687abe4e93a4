#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

namespace osnorm {

/// Shortest decimal string that round-trips to the same double.
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) return std::to_string(v);
  return std::string(buf, end);
}

} // namespace osnorm
