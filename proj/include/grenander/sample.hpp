#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace grenander {

//! Sorted observations on [0, 1].
class Sample
{
public:
  //! Validates and sorts. Throws std::invalid_argument on an empty input or a
  //! value outside [0, 1] (NaN included).
  explicit Sample(std::vector<double> values)
    : values_(std::move(values))
  {
    if (values_.empty())
      throw std::invalid_argument("sample must contain at least one value");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      const double v = values_[i];
      if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("sample value at index " + std::to_string(i) +
                                    " is outside [0, 1]: " + std::to_string(v));
    }
    if (!std::is_sorted(values_.begin(), values_.end()))
      std::sort(values_.begin(), values_.end());
  }

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double min() const { return values_.front(); }
  double max() const { return values_.back(); }

private:
  std::vector<double> values_;
};

//! Right-continuous empirical distribution function of a Sample. Ties are
//! merged into a single jump of multiplicity / n.
class EmpiricalCDF
{
public:
  explicit EmpiricalCDF(const Sample& sample)
    : n_(sample.size())
  {
    auto v = sample.values();
    for (std::size_t i = 0; i < v.size();) {
      std::size_t j = i;
      while (j < v.size() && v[j] == v[i])
        ++j;
      jumps_.push_back(v[i]);
      counts_.push_back(j);
      i = j;
    }
  }

  //! F(t) = #{X_i <= t} / n.
  double operator()(double t) const
  {
    auto it = std::upper_bound(jumps_.begin(), jumps_.end(), t);
    if (it == jumps_.begin())
      return 0.0;
    return static_cast<double>(counts_[static_cast<std::size_t>(it - jumps_.begin()) - 1]) /
           static_cast<double>(n_);
  }

  std::size_t n() const { return n_; }
  //! Distinct jump locations, ascending.
  const std::vector<double>& jumps() const { return jumps_; }
  //! Cumulative counts #{X_i <= jumps()[k]}.
  const std::vector<std::size_t>& cumulative_counts() const { return counts_; }

private:
  std::size_t n_;
  std::vector<double> jumps_;
  std::vector<std::size_t> counts_;
};

inline EmpiricalCDF empirical_cdf(const Sample& sample)
{
  return EmpiricalCDF(sample);
}

} // namespace grenander
