#pragma once

// Check result rows and their CSV / JSON renderings.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hypgeo {

struct CheckRow {
  std::string check;
  std::string space;
  std::size_t size = 0;
  double bound = 0.0;
  double measured = 0.0;
  double slack = 0.0;
  bool pass = true;
  /// Informational rows never fail a run.
  bool asserted = true;
};

/// Shortest-round-trip-safe decimal form; "inf", "-inf" and "nan" spelled out.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline bool all_pass(const std::vector<CheckRow>& rows) {
  for (const auto& r : rows)
    if (r.asserted && !r.pass) return false;
  return true;
}

inline std::string to_csv(const std::vector<CheckRow>& rows) {
  std::string out = "check,space,size,bound,measured,slack,pass\n";
  for (const auto& r : rows) {
    out += r.check + "," + r.space + "," + std::to_string(r.size) + "," + format_number(r.bound) +
           "," + format_number(r.measured) + "," + format_number(r.slack) + "," +
           (r.pass ? "true" : "false") + "\n";
  }
  return out;
}

inline nlohmann::json to_json(const std::vector<CheckRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows)
    out.push_back({{"check", r.check},
                   {"space", r.space},
                   {"size", r.size},
                   {"bound", format_number(r.bound)},
                   {"measured", format_number(r.measured)},
                   {"slack", format_number(r.slack)},
                   {"pass", r.pass},
                   {"asserted", r.asserted}});
  return out;
}

}  // namespace hypgeo
