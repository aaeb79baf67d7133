#pragma once

#include <cstdio>
#include <optional>
#include <string>

namespace afrsa {

// Fixed numeric formatting so repeated runs produce byte-identical files.
inline std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

// Missing values (undefined metrics) become empty cells.
inline std::string csv_opt(const std::optional<double>& v) {
  return v ? csv_num(*v) : std::string();
}

}  // namespace afrsa
