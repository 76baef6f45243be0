#pragma once

#include <map>
#include <optional>

#include "pmitilt/dist_core.hpp"

namespace pmitilt {

// Values keyed by information events: unordered sets of (variable, label)
// pairs. The key is an Assignment, whose bindings are sorted by variable
// name, so V(x,y) and V(y,x) (or V(x,y,z) and V(z,y,x)) are one entry by
// construction rather than by a runtime check.
//
// Holds both exogenous terminal values (full events) and context values
// (partial events such as {Y=y, Z=z}).
class EventValueFunction {
 public:
  EventValueFunction() = default;

  // Every lookup without an explicit entry returns `v`.
  static EventValueFunction constant(double v);

  // Throws SpecError if `value` is not finite.
  void set(const Assignment& event, double value);

  std::optional<double> find(const Assignment& event) const;
  // Throws CoverageMismatch when no entry (and no fallback) exists.
  double at(const Assignment& event) const;

  void set_fallback(std::optional<double> v) { fallback_ = v; }
  const std::optional<double>& fallback() const noexcept { return fallback_; }
  const std::map<Assignment, double>& entries() const noexcept { return entries_; }

 private:
  std::map<Assignment, double> entries_;
  std::optional<double> fallback_;
};

}  // namespace pmitilt
