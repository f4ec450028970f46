#pragma once

#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace cwave {

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Round-trippable text form of a double (17 significant digits).
inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Writes "# key=value" comment lines followed by the column header.
inline void write_csv_header(std::ostream& os, const Metadata& meta,
                             std::initializer_list<const char*> columns) {
  for (const auto& [k, v] : meta) os << "# " << k << '=' << v << '\n';
  bool first = true;
  for (const char* c : columns) {
    if (!first) os << ',';
    os << c;
    first = false;
  }
  os << '\n';
}

inline void write_csv_row(std::ostream& os, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) os << ',';
    os << fmt_double(v);
    first = false;
  }
  os << '\n';
}

}  // namespace cwave
