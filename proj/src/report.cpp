#include "pmitilt/report.hpp"

#include <algorithm>
#include <cmath>

#include "pmitilt/io.hpp"

namespace pmitilt {

double CheckReport::max_residual() const {
  double m = 0.0;
  for (const auto& e : residuals) {
    if (std::isnan(e.residual)) return e.residual;
    m = std::max(m, e.residual);
  }
  return m;
}

bool CheckReport::pass() const { return max_residual() <= tolerance; }

void CheckReport::normalize() {
  std::stable_sort(residuals.begin(), residuals.end());
  std::stable_sort(skipped.begin(), skipped.end());
}

nlohmann::json to_json(const CheckReport& report) {
  using nlohmann::json;
  json residuals = json::array();
  for (const auto& e : report.residuals) {
    json entry = {{"direction", e.direction}, {"residual", io::number_to_json(e.residual)}};
    for (const auto& [name, a] : e.keys) entry[name] = io::to_json(a);
    residuals.push_back(std::move(entry));
  }
  json skipped = json::array();
  for (const auto& s : report.skipped) {
    json entry = {{"direction", s.direction}, {"reason", s.reason}};
    for (const auto& [name, a] : s.keys) entry[name] = io::to_json(a);
    skipped.push_back(std::move(entry));
  }
  return {{"check", report.check},
          {"tolerance", report.tolerance},
          {"max_residual", io::number_to_json(report.max_residual())},
          {"pass", report.pass()},
          {"residuals", std::move(residuals)},
          {"skipped", std::move(skipped)}};
}

}  // namespace pmitilt
