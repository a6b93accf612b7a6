#pragma once

#include <cstdio>
#include <string>

namespace dff {

// Fixed 9 significant digits for every float written to a report or CSV.
inline std::string fmt_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace dff
