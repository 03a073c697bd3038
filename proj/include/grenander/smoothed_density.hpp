#pragma once

#include "kernel.hpp"
#include "quadrature.hpp"
#include "sample.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace grenander {

//! Bandwidth h = R n^{-α}, clamped to (0, 1/2].
struct BandwidthRule
{
  enum class Regime
  {
    pointwise, // α in (0, 1/3)
    l1         // α in (1/6, 1/5)
  };

  double exponent = 0.30;
  double scale = 1.0;
  Regime regime = Regime::pointwise;

  static BandwidthRule pointwise(double exponent = 0.30, double scale = 1.0)
  {
    return { exponent, scale, Regime::pointwise };
  }
  static BandwidthRule l1(double exponent = 0.18, double scale = 1.0) { return { exponent, scale, Regime::l1 }; }

  static bool admissible(Regime regime, double exponent)
  {
    return regime == Regime::pointwise ? (exponent > 0.0 && exponent < 1.0 / 3.0)
                                       : (exponent > 1.0 / 6.0 && exponent < 1.0 / 5.0);
  }

  //! Throws std::invalid_argument for a non-positive scale or an exponent
  //! outside the regime's open interval.
  void validate() const
  {
    if (!(scale > 0.0) || !std::isfinite(scale))
      throw std::invalid_argument("bandwidth scale R must be positive");
    if (!admissible(regime, exponent))
      throw std::invalid_argument(std::string("bandwidth exponent ") + std::to_string(exponent) +
                                  (regime == Regime::pointwise ? " is outside (0, 1/3)" : " is outside (1/6, 1/5)"));
  }
};

inline double bandwidth(const BandwidthRule& rule, std::size_t n)
{
  if (n < 1)
    throw std::invalid_argument("bandwidth needs n >= 1");
  rule.validate();
  return std::min(rule.scale * std::pow(static_cast<double>(n), -rule.exponent), 0.5);
}

//! Thrown when the positive part of the boundary-extended estimate has
//! (numerically) zero mass.
class DegenerateEstimate : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! Boundary-corrected kernel density estimate on [0, 1].
//!
//! Inside [h, 1-h] the raw estimate is the usual kernel sum. On [0, h) and
//! (1-h, 1] it is continued linearly from the seam with the seam slope clamped
//! to be non-positive. The normalized estimate is the positive part divided by
//! its integral Z+, which is computed once at construction.
class SmoothedDensity
{
public:
  SmoothedDensity(const Sample& sample, Kernel kernel, double h)
    : x_(sample.values().begin(), sample.values().end())
    , kernel_(std::move(kernel))
    , h_(h)
  {
    if (!(h_ > 0.0 && h_ <= 0.5))
      throw std::invalid_argument("bandwidth must lie in (0, 1/2]");
    init();
  }

  SmoothedDensity(const Sample& sample, Kernel kernel, const BandwidthRule& rule)
    : SmoothedDensity(sample, std::move(kernel), bandwidth(rule, sample.size()))
  {
    rule_ = rule;
  }

  std::size_t n() const { return x_.size(); }
  double h() const { return h_; }
  const Kernel& kernel() const { return kernel_; }
  const std::vector<double>& observations() const { return x_; }
  const std::optional<BandwidthRule>& rule() const { return rule_; }
  double normalizer() const { return z_plus_; }

  //! (1/(n h)) Σ K((t - X_i)/h) for t in [h, 1-h].
  double raw_estimate(double t) const
  {
    check_interior(t);
    return kernel_sum(t, 0);
  }
  double raw_derivative(double t, int order) const
  {
    check_interior(t);
    if (order != 1 && order != 2)
      throw std::invalid_argument("derivative order must be 1 or 2");
    return kernel_sum(t, order);
  }

  //! Boundary-extended estimate on [0, 1] (may be negative near the ends).
  double extended_estimate(double t) const
  {
    if (t < 0.0 || t > 1.0)
      throw std::domain_error("extended estimate is defined on [0, 1], got " + std::to_string(t));
    if (t < h_)
      return left_value_ + (t - h_) * left_slope_;
    if (t > 1.0 - h_)
      return right_value_ + (t - 1.0 + h_) * right_slope_;
    return kernel_sum(t, 0);
  }

  //! Slope of the extended estimate (clamped constant on the extensions).
  double extended_slope(double t) const
  {
    if (t < h_)
      return left_slope_;
    if (t > 1.0 - h_)
      return right_slope_;
    return kernel_sum(t, 1);
  }

  double positive_part(double t) const { return std::max(extended_estimate(t), 0.0); }

  //! Normalized estimate; 0 outside [0, 1].
  double operator()(double t) const
  {
    if (t < 0.0 || t > 1.0)
      return 0.0;
    return positive_part(t) / z_plus_;
  }

  //! First derivative of the normalized estimate; 0 where truncation is active.
  double derivative(double t) const
  {
    if (t < 0.0 || t > 1.0 || extended_estimate(t) < 0.0)
      return 0.0;
    return extended_slope(t) / z_plus_;
  }

  //! Second derivative; 0 on the linear extensions and where truncation is
  //! active. Requires a kernel meeting the B6 conditions.
  double second_derivative(double t) const
  {
    if (!b6_)
      throw std::logic_error("second derivative needs a B6-level kernel; '" + kernel_.name() + "' is not");
    if (t < h_ || t > 1.0 - h_ || t < 0.0 || t > 1.0)
      return 0.0;
    return kernel_sum(t, 2) / z_plus_;
  }

  //! {0, h, 1-h, 1} plus zero crossings of the extensions.
  std::vector<double> breakpoints() const
  {
    std::vector<double> b{ 0.0, h_, 1.0 - h_, 1.0 };
    b.insert(b.end(), crossings_.begin(), crossings_.end());
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
  }
  bool piecewise_linear() const { return false; }

private:
  void check_interior(double t) const
  {
    if (t < h_ || t > 1.0 - h_)
      throw std::domain_error("raw estimate is defined on [h, 1-h]; use extended_estimate for t = " +
                              std::to_string(t));
  }

  double kernel_sum(double t, int order) const
  {
    const auto lo = std::lower_bound(x_.begin(), x_.end(), t - h_);
    const auto hi = std::upper_bound(lo, x_.end(), t + h_);
    double s = 0.0;
    switch (order) {
      case 0:
        for (auto it = lo; it != hi; ++it)
          s += kernel_((t - *it) / h_);
        return s / (static_cast<double>(x_.size()) * h_);
      case 1:
        for (auto it = lo; it != hi; ++it)
          s += kernel_.d1((t - *it) / h_);
        return s / (static_cast<double>(x_.size()) * h_ * h_);
      default:
        for (auto it = lo; it != hi; ++it)
          s += kernel_.d2((t - *it) / h_);
        return s / (static_cast<double>(x_.size()) * h_ * h_ * h_);
    }
  }

  // ∫ max(l, 0) over [p, q] for l linear with end values vp, vq
  static double positive_linear_integral(double vp, double vq, double width)
  {
    if (vp >= 0.0 && vq >= 0.0)
      return 0.5 * (vp + vq) * width;
    if (vp <= 0.0 && vq <= 0.0)
      return 0.0;
    const double pos = std::max(vp, vq);
    return 0.5 * width * pos * pos / (std::fabs(vp) + std::fabs(vq));
  }

  double interior_mass() const
  {
    const double a = h_;
    const double b = 1.0 - h_;
    if (b <= a)
      return 0.0;
    if (kernel_.has_antiderivative()) {
      double s = 0.0;
      for (double x : x_)
        s += kernel_.antiderivative((b - x) / h_) - kernel_.antiderivative((a - x) / h_);
      return s / static_cast<double>(x_.size());
    }
    return adaptive_simpson([this](double t) { return kernel_sum(t, 0); }, a, b, { .abs_tol = 1e-10 });
  }

  void init()
  {
    b6_ = kernel_.satisfies(KernelLevel::B6);
    left_value_ = kernel_sum(h_, 0);
    left_slope_ = std::min(kernel_sum(h_, 1), 0.0);
    right_value_ = kernel_sum(1.0 - h_, 0);
    right_slope_ = std::min(kernel_sum(1.0 - h_, 1), 0.0);

    const double at0 = left_value_ - h_ * left_slope_;
    const double at1 = right_value_ + h_ * right_slope_;
    // The kernel sum is nonnegative and the left extension rises towards 0,
    // so only the right extension can cross zero.
    if (right_slope_ < 0.0 && at1 < 0.0 && right_value_ > 0.0)
      crossings_.push_back(1.0 - h_ - right_value_ / right_slope_);

    z_plus_ = positive_linear_integral(at0, left_value_, h_) + interior_mass() +
              positive_linear_integral(right_value_, at1, h_);
    if (!(z_plus_ > 1e-12))
      throw DegenerateEstimate("positive part of the smoothed estimate has zero mass");
  }

  std::vector<double> x_;
  Kernel kernel_;
  double h_;
  std::optional<BandwidthRule> rule_;
  bool b6_ = false;
  double left_value_ = 0.0;
  double left_slope_ = 0.0;
  double right_value_ = 0.0;
  double right_slope_ = 0.0;
  double z_plus_ = 0.0;
  std::vector<double> crossings_;
};

inline double raw_estimate(const SmoothedDensity& sd, double t)
{
  return sd.raw_estimate(t);
}

inline double extended_estimate(const SmoothedDensity& sd, double t)
{
  return sd.extended_estimate(t);
}

inline double normalized_estimate(const SmoothedDensity& sd, double t)
{
  return sd(t);
}

inline double derivative_estimate(const SmoothedDensity& sd, double t, int order)
{
  if (order == 1)
    return sd.derivative(t);
  if (order == 2)
    return sd.second_derivative(t);
  throw std::invalid_argument("derivative order must be 1 or 2");
}

} // namespace grenander
