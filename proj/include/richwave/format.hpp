#pragma once

#include <cstdio>
#include <string>

namespace richwave {

/// Round-trip decimal text with 17 significant digits.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace richwave
