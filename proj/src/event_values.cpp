#include "pmitilt/event_values.hpp"

#include <cmath>

#include "pmitilt/errors.hpp"

namespace pmitilt {

EventValueFunction EventValueFunction::constant(double v) {
  EventValueFunction f;
  f.fallback_ = v;
  return f;
}

void EventValueFunction::set(const Assignment& event, double value) {
  if (!std::isfinite(value)) throw SpecError("event value for " + event.to_string() + " is not finite");
  entries_[event] = value;
}

std::optional<double> EventValueFunction::find(const Assignment& event) const {
  const auto it = entries_.find(event);
  if (it != entries_.end()) return it->second;
  return fallback_;
}

double EventValueFunction::at(const Assignment& event) const {
  const auto v = find(event);
  if (!v) throw CoverageMismatch("no value for event " + event.to_string());
  return *v;
}

}  // namespace pmitilt
