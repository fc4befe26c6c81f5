#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "msburden/errors.hpp"

namespace msburden {

// Right-continuous piecewise-constant function on [0, inf). The value on
// [jump_times[i], jump_times[i+1]) is values[i]; initial_value holds before the
// first jump and the last value carries forward past the last jump.
struct StepCurve {
  double initial_value = 0.0;
  std::vector<double> jump_times;  // strictly increasing
  std::vector<double> values;      // value at and after each jump

  bool operator==(const StepCurve&) const = default;

  std::size_t jump_count() const { return jump_times.size(); }

  double value(double t) const {
    auto it = std::upper_bound(jump_times.begin(), jump_times.end(), t);
    if (it == jump_times.begin()) return initial_value;
    return values[static_cast<std::size_t>(it - jump_times.begin()) - 1];
  }

  // Exact area on [a, b]: a sum of rectangle areas, no quadrature error.
  double integral(double a, double b) const {
    if (!(b >= a)) throw Error(errc::invalid_config, "integral bounds out of order");
    long double acc = 0.0L;
    double t = a;
    double cur = value(a);
    auto it = std::upper_bound(jump_times.begin(), jump_times.end(), a);
    for (; it != jump_times.end() && *it < b; ++it) {
      acc += static_cast<long double>(cur) * (*it - t);
      t = *it;
      cur = values[static_cast<std::size_t>(it - jump_times.begin())];
    }
    acc += static_cast<long double>(cur) * (b - t);
    return static_cast<double>(acc);
  }

  void validate() const {
    if (values.size() != jump_times.size())
      throw Error(errc::length_mismatch, "step curve jump/value size mismatch");
    for (std::size_t i = 0; i < jump_times.size(); ++i) {
      if (!std::isfinite(jump_times[i]))
        throw Error(errc::negative_time, "non-finite jump time");
      if (i > 0 && !(jump_times[i] > jump_times[i - 1]))
        throw Error(errc::monotonicity_violation, "jump times not strictly increasing");
    }
  }
};

// Sorted unique jump times of a set of curves, truncated to [0, cap].
inline std::vector<double> merged_jump_times(std::span<const StepCurve> curves, double cap) {
  std::vector<double> out;
  for (const auto& c : curves)
    for (double t : c.jump_times)
      if (t <= cap) out.push_back(t);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Walks a curve's values across an increasing grid without repeated searches.
class StepWalker {
 public:
  explicit StepWalker(const StepCurve& c) : curve_(&c) {}

  // value at t; successive calls must not decrease t
  double advance(double t) {
    while (i_ < curve_->jump_times.size() && curve_->jump_times[i_] <= t) ++i_;
    return i_ == 0 ? curve_->initial_value : curve_->values[i_ - 1];
  }

 private:
  const StepCurve* curve_;
  std::size_t i_ = 0;
};

}  // namespace msburden
