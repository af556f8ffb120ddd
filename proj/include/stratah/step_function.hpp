#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "stratah/errors.hpp"

namespace stratah {

// Right-continuous piecewise-constant function: f(t) equals the value at the
// largest breakpoint <= t, or value_before_first when t precedes them all.
class StepFunction {
public:
  StepFunction() : value_before_first_(0.0) {}

  StepFunction(std::vector<double> breakpoints, std::vector<double> values,
               double value_before_first)
      : breakpoints_(std::move(breakpoints)),
        values_(std::move(values)),
        value_before_first_(value_before_first) {
    if (breakpoints_.size() != values_.size())
      throw InvalidInput("StepFunction: breakpoints/values size mismatch");
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
      if (!std::isfinite(breakpoints_[i]) || breakpoints_[i] < 0.0)
        throw InvalidInput("StepFunction: breakpoints must be finite and >= 0");
      if (i > 0 && !(breakpoints_[i] > breakpoints_[i - 1]))
        throw InvalidInput("StepFunction: breakpoints must be strictly increasing");
    }
  }

  double operator()(double t) const {
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    if (it == breakpoints_.begin()) return value_before_first_;
    return values_[std::size_t(it - breakpoints_.begin()) - 1];
  }

  // Exact integral over [a,b], a <= b.
  double integral(double a, double b) const {
    if (!(b >= a)) throw InvalidInput("StepFunction::integral: requires b >= a");
    double area = 0.0;
    double t = a;
    double v = (*this)(a);
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), a);
    for (; it != breakpoints_.end() && *it < b; ++it) {
      area += v * (*it - t);
      t = *it;
      v = values_[std::size_t(it - breakpoints_.begin())];
    }
    area += v * (b - t);
    return area;
  }

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }
  double value_before_first() const { return value_before_first_; }
  bool empty() const { return breakpoints_.empty(); }

private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  double value_before_first_;
};

}  // namespace stratah
