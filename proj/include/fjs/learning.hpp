#pragma once

#include <cassert>
#include <cmath>

#include "fjs/error.hpp"

namespace fjs {

/// Position-based learning effect: an operation with standard time p processed
/// at the r-th slot of its machine takes floor(100 p / r^alpha + 1/2).
class LearningFn {
 public:
  explicit LearningFn(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error("learning rate must be positive and finite");
  }

  double alpha() const noexcept { return alpha_; }

  Time operator()(Time standard_time, int position) const { return actual_time(standard_time, position, alpha_); }

  static Time actual_time(Time standard_time, int position, double alpha) {
    assert(position >= 1);
    assert(standard_time >= 0);
    if (position == 1) return 100 * standard_time;
    const double scaled = 100.0 * static_cast<double>(standard_time) / std::pow(static_cast<double>(position), alpha);
    return static_cast<Time>(std::floor(scaled + 0.5));
  }

 private:
  double alpha_;
};

}  // namespace fjs
