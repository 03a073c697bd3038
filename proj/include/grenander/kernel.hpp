#pragma once

#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace grenander {

//! Kernel regularity classes. B4 is what pointwise smoothing needs; B6 adds
//! the vanishing first moment and second-derivative conditions needed for the
//! L1 procedure.
enum class KernelLevel
{
  B4,
  B6
};

inline const char* to_string(KernelLevel level)
{
  return level == KernelLevel::B4 ? "B4" : "B6";
}

//! Compactly supported smoothing kernel on [-1, 1] with two derivatives.
//! Evaluators return 0 outside [-1, 1].
class Kernel
{
public:
  using Fn = std::function<double(double)>;

  Kernel(std::string name,
         Fn k,
         Fn dk,
         Fn d2k,
         std::optional<Fn> antiderivative = std::nullopt,
         std::optional<KernelLevel> known_level = std::nullopt)
    : name_(std::move(name))
    , k_(std::move(k))
    , dk_(std::move(dk))
    , d2k_(std::move(d2k))
    , antiderivative_(std::move(antiderivative))
    , known_level_(known_level)
  {
  }

  const std::string& name() const { return name_; }

  double operator()(double v) const { return std::fabs(v) > 1.0 ? 0.0 : k_(v); }
  double d1(double v) const { return std::fabs(v) > 1.0 ? 0.0 : dk_(v); }
  double d2(double v) const { return std::fabs(v) > 1.0 ? 0.0 : d2k_(v); }

  //! ∫_{-1}^{v} K when a closed form is known.
  bool has_antiderivative() const { return antiderivative_.has_value(); }
  double antiderivative(double v) const
  {
    if (v <= -1.0)
      return 0.0;
    if (v >= 1.0)
      return 1.0;
    return (*antiderivative_)(v);
  }

  //! Analytically established condition level, if any.
  std::optional<KernelLevel> known_level() const { return known_level_; }

  bool satisfies(KernelLevel level) const;

private:
  std::string name_;
  Fn k_;
  Fn dk_;
  Fn d2k_;
  std::optional<Fn> antiderivative_;
  std::optional<KernelLevel> known_level_;
};

//! K(v) = (3/4)(1 - v^2).
inline Kernel epanechnikov_kernel()
{
  return Kernel(
    "epanechnikov",
    [](double v) { return 0.75 * (1.0 - v * v); },
    [](double v) { return -1.5 * v; },
    [](double) { return -1.5; },
    [](double v) { return 0.75 * (v - v * v * v / 3.0) + 0.5; },
    KernelLevel::B4);
}

//! K(v) = (15/16)(1 - v^2)^2.
inline Kernel biweight_kernel()
{
  constexpr double c = 15.0 / 16.0;
  return Kernel(
    "biweight",
    [](double v) {
      const double u = 1.0 - v * v;
      return c * u * u;
    },
    [](double v) { return -4.0 * c * v * (1.0 - v * v); },
    [](double v) { return c * (12.0 * v * v - 4.0); },
    [](double v) {
      const double v2 = v * v;
      return c * (v - 2.0 * v2 * v / 3.0 + v2 * v2 * v / 5.0) + 0.5;
    },
    KernelLevel::B6);
}

inline Kernel kernel_by_name(const std::string& name)
{
  if (name == "epanechnikov")
    return epanechnikov_kernel();
  if (name == "biweight")
    return biweight_kernel();
  throw std::invalid_argument("unknown kernel '" + name + "' (expected epanechnikov or biweight)");
}

struct ConditionResult
{
  std::string name;
  bool passed;
  double residual;
};

struct KernelReport
{
  std::string kernel;
  KernelLevel level;
  std::vector<ConditionResult> conditions;

  bool passed() const
  {
    return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.passed; });
  }
};

namespace detail {

inline constexpr double kKernelTolerance = 1e-6;
inline constexpr double kBoundedCeiling = 1e8;
inline constexpr std::size_t kKernelGrid = 100000;

template<class F>
double grid_max_abs(const F& f)
{
  double m = 0.0;
  for (std::size_t i = 0; i < kKernelGrid; ++i) {
    const double v = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(kKernelGrid - 1);
    const double y = f(v);
    if (!std::isfinite(y))
      throw std::domain_error("non-finite kernel evaluation at v = " + std::to_string(v));
    m = std::max(m, std::fabs(y));
  }
  return m;
}

} // namespace detail

//! Numerically verifies B1-B4 (and B5-B6 for KernelLevel::B6). Integral
//! conditions pass when |residual| < 1e-6; boundedness conditions pass when
//! the grid maximum over 1e5 points is finite and below 1e8.
inline KernelReport check_kernel_conditions(const Kernel& kernel, KernelLevel level)
{
  using detail::kBoundedCeiling;
  using detail::kKernelGrid;
  using detail::kKernelTolerance;

  KernelReport report{ kernel.name(), level, {} };
  auto integral = [](auto f) { return adaptive_simpson(f, -1.0, 1.0, { .abs_tol = 1e-12 }); };
  auto add_integral = [&](std::string name, double value, double target) {
    const double r = std::fabs(value - target);
    report.conditions.push_back({ std::move(name), r < kKernelTolerance, r });
  };
  auto add_bounded = [&](std::string name, double grid_max) {
    report.conditions.push_back({ std::move(name), grid_max < kBoundedCeiling, grid_max });
  };

  // B1
  double negative_part = 0.0;
  double outside = 0.0;
  for (std::size_t i = 0; i < kKernelGrid; ++i) {
    const double v = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(kKernelGrid - 1);
    const double k = kernel(v);
    if (!std::isfinite(k))
      throw std::domain_error("non-finite kernel evaluation at v = " + std::to_string(v));
    negative_part = std::max(negative_part, -k);
    const double w = 1.0 + static_cast<double>(i + 1) / static_cast<double>(kKernelGrid);
    outside = std::max({ outside, std::fabs(kernel(w)), std::fabs(kernel(-w)) });
  }
  report.conditions.push_back({ "B1: K >= 0 on [-1,1]", negative_part == 0.0, negative_part });
  report.conditions.push_back({ "B1: K = 0 outside [-1,1]", outside == 0.0, outside });

  // B2
  add_bounded("B2: K bounded", detail::grid_max_abs([&](double v) { return kernel(v); }));
  add_integral("B2: int K = 1", integral([&](double v) { return kernel(v); }), 1.0);

  // B3
  add_bounded("B3: K' bounded", detail::grid_max_abs([&](double v) { return kernel.d1(v); }));
  double sign_violation = 0.0;
  for (std::size_t i = 0; i < kKernelGrid; ++i) {
    const double v = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(kKernelGrid - 1);
    sign_violation = std::max(sign_violation, v * kernel.d1(v));
  }
  report.conditions.push_back({ "B3: v K'(v) <= 0", sign_violation < kKernelTolerance, sign_violation });
  add_integral("B3: int K' = 0", integral([&](double v) { return kernel.d1(v); }), 0.0);
  add_integral("B3: int v K' = -1", integral([&](double v) { return v * kernel.d1(v); }), -1.0);

  // B4
  add_bounded("B4: K'' bounded", detail::grid_max_abs([&](double v) { return kernel.d2(v); }));

  if (level == KernelLevel::B6) {
    // B5
    add_integral("B5: int v K = 0", integral([&](double v) { return v * kernel(v); }), 0.0);
    add_integral("B5: int K'' = 0", integral([&](double v) { return kernel.d2(v); }), 0.0);
    add_integral("B5: int v K'' = 0", integral([&](double v) { return v * kernel.d2(v); }), 0.0);

    // B6: derivative of K'' by forward differences on the open interval
    const double step = 2.0 / static_cast<double>(kKernelGrid);
    double slope_max = 0.0;
    for (std::size_t i = 1; i + 1 < kKernelGrid; ++i) {
      const double v = -1.0 + step * static_cast<double>(i);
      const double s = (kernel.d2(v + step) - kernel.d2(v)) / step;
      if (!std::isfinite(s))
        throw std::domain_error("non-finite kernel evaluation near v = " + std::to_string(v));
      slope_max = std::max(slope_max, std::fabs(s));
    }
    add_bounded("B6: (K'')' bounded", slope_max);
  }
  return report;
}

inline bool Kernel::satisfies(KernelLevel level) const
{
  if (known_level_)
    return level == KernelLevel::B4 || *known_level_ == KernelLevel::B6;
  return check_kernel_conditions(*this, level).passed();
}

} // namespace grenander
