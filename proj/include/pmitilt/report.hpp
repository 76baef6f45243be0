#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "pmitilt/dist_core.hpp"

namespace pmitilt {

struct ResidualEntry {
  std::string direction;                   // direction tag, or "both"
  std::map<std::string, Assignment> keys;  // e.g. {"context": ..., "outcome": ...} or {"triple": ...}
  double residual = 0.0;

  friend bool operator<(const ResidualEntry& a, const ResidualEntry& b) {
    return std::tie(a.direction, a.keys) < std::tie(b.direction, b.keys);
  }
};

struct SkipEntry {
  std::string direction;
  std::map<std::string, Assignment> keys;
  std::string reason;

  friend bool operator<(const SkipEntry& a, const SkipEntry& b) {
    return std::tie(a.direction, a.keys, a.reason) < std::tie(b.direction, b.keys, b.reason);
  }
};

// Result of one named check. Every skip carries a reason, so pass reduces to
// the residual bound; a NaN residual never passes.
struct CheckReport {
  std::string check;
  double tolerance = 0.0;
  std::vector<ResidualEntry> residuals;
  std::vector<SkipEntry> skipped;

  double max_residual() const;
  bool pass() const;
  // Sorts residuals and skips into canonical order.
  void normalize();
};

nlohmann::json to_json(const CheckReport& report);

}  // namespace pmitilt
