#pragma once

#include <cstdio>
#include <string>

namespace dimerstate {

/// Fixed numeric formatting for every CSV the tools emit: 12 significant
/// digits, '.' decimal separator, no signed zero. Identical inputs format
/// to identical bytes.
inline std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace dimerstate
