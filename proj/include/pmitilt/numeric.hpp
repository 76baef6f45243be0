#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace pmitilt::numeric {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Neumaier's variant of Kahan summation. Order-dependent but deterministic.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double compensated_sum(std::span<const double> xs) noexcept;

// Streaming log(sum_i exp(a_i)). The running maximum is tracked and the
// scaled partial sum is rescaled whenever it moves, so no term is ever
// exponentiated unshifted. -inf terms contribute nothing.
class LogSumExp {
 public:
  void add(double log_term) noexcept;
  // log of the accumulated sum; -inf when empty or all terms were -inf.
  double value() const noexcept;
  double max() const noexcept { return max_; }
  bool empty() const noexcept { return max_ == kNegInf; }

 private:
  double max_ = kNegInf;
  CompensatedSum scaled_;  // sum_i exp(a_i - max_)
};

double log_sum_exp(std::span<const double> log_terms) noexcept;

}  // namespace pmitilt::numeric
