#pragma once

#include "majorant.hpp"
#include "sample.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace grenander {

//! Piecewise-constant non-increasing density on [0, 1].
//!
//! breakpoints() = {0 = t_0 < t_1 < ... < t_k = 1}; the value on (t_{j-1}, t_j]
//! is heights()[j-1] and the value at 0 is heights()[0]. Outside [0, 1] the
//! density is 0.
class StepDensity
{
public:
  StepDensity(std::vector<double> breakpoints, std::vector<double> heights)
    : breakpoints_(std::move(breakpoints))
    , heights_(std::move(heights))
  {
    if (breakpoints_.size() < 2 || heights_.size() + 1 != breakpoints_.size())
      throw std::invalid_argument("step density needs k heights and k + 1 breakpoints");
    if (breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0)
      throw std::invalid_argument("step density breakpoints must span [0, 1]");
    for (std::size_t j = 1; j < breakpoints_.size(); ++j)
      if (!(breakpoints_[j] > breakpoints_[j - 1]))
        throw std::invalid_argument("step density breakpoints must be strictly increasing");
    for (std::size_t j = 0; j < heights_.size(); ++j) {
      if (!(heights_[j] >= 0.0))
        throw std::invalid_argument("step density heights must be nonnegative");
      if (j > 0 && heights_[j] > heights_[j - 1])
        throw std::invalid_argument("step density heights must be non-increasing");
    }
  }

  double operator()(double t) const
  {
    if (t < 0.0 || t > 1.0)
      return 0.0;
    if (t == 0.0)
      return heights_.front();
    auto it = std::lower_bound(breakpoints_.begin() + 1, breakpoints_.end(), t);
    return heights_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
  }

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& heights() const { return heights_; }
  std::size_t steps() const { return heights_.size(); }
  bool piecewise_linear() const { return true; }

  //! Σ f_j (t_j - t_{j-1}).
  double mass() const
  {
    double m = 0.0;
    for (std::size_t j = 0; j < heights_.size(); ++j)
      m += heights_[j] * (breakpoints_[j + 1] - breakpoints_[j]);
    return m;
  }

private:
  std::vector<double> breakpoints_;
  std::vector<double> heights_;
};

//! Left derivative of a concave majorant as a step density.
inline StepDensity left_derivative(const ConcaveMajorant& lcm)
{
  std::vector<double> breaks;
  breaks.reserve(lcm.vertices().size());
  for (const auto& v : lcm.vertices())
    breaks.push_back(v.x);
  return StepDensity(std::move(breaks), lcm.slopes());
}

//! Grenander estimator: the monotone non-increasing density MLE.
inline StepDensity grenander_fit(const Sample& sample)
{
  return left_derivative(least_concave_majorant(EmpiricalCDF(sample)));
}

} // namespace grenander
