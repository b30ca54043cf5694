#pragma once

// Deterministic number formatting shared by reports, certificates and the
// CLI: ten significant digits, plain snprintf, identical bytes for
// identical values on every run.

#include <cstdio>
#include <span>
#include <string>

namespace psl2z {

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string format_number_array(std::span<double const> vs) {
  std::string out = "[";
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ", ";
    out += format_number(vs[i]);
  }
  out += "]";
  return out;
}

}  // namespace psl2z
