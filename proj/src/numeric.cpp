#include "pmitilt/numeric.hpp"

namespace pmitilt::numeric {

double compensated_sum(std::span<const double> xs) noexcept {
  CompensatedSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

void LogSumExp::add(double log_term) noexcept {
  if (log_term == kNegInf) return;
  if (std::isnan(log_term) || log_term == kInf) {
    max_ = log_term;
    scaled_ = CompensatedSum{};
    scaled_.add(1.0);
    return;
  }
  if (std::isnan(max_) || max_ == kInf) return;
  if (log_term <= max_) {
    scaled_.add(std::exp(log_term - max_));
    return;
  }
  // New maximum: rescale the existing partial sum into the new frame.
  const double rescale = empty() ? 0.0 : std::exp(max_ - log_term);
  const double previous = scaled_.value();
  scaled_ = CompensatedSum{};
  scaled_.add(previous * rescale);
  scaled_.add(1.0);
  max_ = log_term;
}

double LogSumExp::value() const noexcept {
  if (empty()) return kNegInf;
  if (std::isnan(max_) || max_ == kInf) return max_;
  return max_ + std::log(scaled_.value());
}

double log_sum_exp(std::span<const double> log_terms) noexcept {
  // Two-pass version: exact max first, then one shifted sum.
  double m = kNegInf;
  for (double a : log_terms) {
    if (std::isnan(a)) return a;
    if (a > m) m = a;
  }
  if (m == kNegInf || m == kInf) return m;
  CompensatedSum acc;
  for (double a : log_terms) {
    if (a != kNegInf) acc.add(std::exp(a - m));
  }
  return m + std::log(acc.value());
}

}  // namespace pmitilt::numeric
