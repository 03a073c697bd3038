#pragma once

#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace grenander {

//! Anything evaluable as a density on [0, 1].
template<class D>
concept Density = requires(const D& d, double t) {
  { d(t) } -> std::convertible_to<double>;
};

template<class D>
concept DensityWithDerivative = Density<D> && requires(const D& d, double t) {
  { d.derivative(t) } -> std::convertible_to<double>;
};

//! Densities that report the points where they may fail to be smooth.
template<class D>
concept HasBreakpoints = requires(const D& d) {
  { d.breakpoints() } -> std::convertible_to<std::vector<double>>;
};

template<class D>
concept ReportsLinearity = requires(const D& d) {
  { d.piecewise_linear() } -> std::convertible_to<bool>;
};

namespace detail {

template<class D>
void append_breakpoints(const D& d, std::vector<double>& out)
{
  if constexpr (HasBreakpoints<D>) {
    for (double x : d.breakpoints())
      if (x > 0.0 && x < 1.0)
        out.push_back(x);
  }
}

template<class D>
bool is_piecewise_linear(const D& d)
{
  if constexpr (ReportsLinearity<D> && HasBreakpoints<D>)
    return d.piecewise_linear();
  else
    return false;
}

inline std::vector<double> finish_partition(std::vector<double> pts)
{
  pts.push_back(0.0);
  pts.push_back(1.0);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

inline double checked(double v, double t)
{
  if (!std::isfinite(v))
    throw std::domain_error("non-finite density value at t = " + std::to_string(t));
  return v;
}

//! ∫ |l| over [p, q] for l linear with end values lp, lq.
inline double abs_linear_integral(double lp, double lq, double width)
{
  if ((lp >= 0.0 && lq >= 0.0) || (lp <= 0.0 && lq <= 0.0))
    return 0.5 * (std::fabs(lp) + std::fabs(lq)) * width;
  return 0.5 * width * (lp * lp + lq * lq) / (std::fabs(lp) + std::fabs(lq));
}

} // namespace detail

template<class D>
std::vector<double> partition_of(const D& d)
{
  std::vector<double> pts;
  detail::append_breakpoints(d, pts);
  return detail::finish_partition(std::move(pts));
}

template<class A, class B>
std::vector<double> merged_partition(const A& a, const B& b)
{
  std::vector<double> pts;
  detail::append_breakpoints(a, pts);
  detail::append_breakpoints(b, pts);
  return detail::finish_partition(std::move(pts));
}

//! ∫_0^1 |a - b| dt.
//!
//! Integrates piece by piece over the merged breakpoints of a and b. When both
//! are linear on every piece the result is exact; otherwise each piece gets
//! adaptive Simpson with a share of `abs_tol` proportional to its width.
//! Throws std::domain_error on a non-finite evaluation.
template<Density A, Density B>
double l1_distance(const A& a, const B& b, double abs_tol = 1e-8)
{
  const auto part = merged_partition(a, b);
  const bool exact = detail::is_piecewise_linear(a) && detail::is_piecewise_linear(b);
  auto diff = [&](double t) { return detail::checked(a(t), t) - detail::checked(b(t), t); };

  double total = 0.0;
  for (std::size_t j = 0; j + 1 < part.size(); ++j) {
    const double p = part[j];
    const double q = part[j + 1];
    const double w = q - p;
    if (exact) {
      // sample strictly inside the piece, then extrapolate to both ends
      const double x1 = p + 0.25 * w;
      const double x2 = p + 0.75 * w;
      const double d1 = diff(x1);
      const double d2 = diff(x2);
      const double s = (d2 - d1) / (x2 - x1);
      total += detail::abs_linear_integral(d1 - s * (x1 - p), d2 + s * (q - x2), w);
    } else {
      total += adaptive_simpson([&](double t) { return std::fabs(diff(t)); }, p, q, { .abs_tol = abs_tol * w });
    }
  }
  return total;
}

//! max |a - b| over a uniform grid of `grid_size` points plus every breakpoint
//! of a and b, each breakpoint approached from both sides.
template<Density A, Density B>
double sup_distance(const A& a, const B& b, std::size_t grid_size)
{
  if (grid_size < 2)
    throw std::invalid_argument("sup_distance needs grid_size >= 2");
  double best = 0.0;
  auto visit = [&](double t) {
    if (t < 0.0 || t > 1.0)
      return;
    const double d = std::fabs(detail::checked(a(t), t) - detail::checked(b(t), t));
    best = std::max(best, d);
  };
  for (std::size_t i = 0; i < grid_size; ++i)
    visit(static_cast<double>(i) / static_cast<double>(grid_size - 1));
  for (double x : merged_partition(a, b)) {
    visit(x);
    visit(std::nextafter(x, -1.0));
    visit(std::nextafter(x, 2.0));
  }
  return best;
}

//! Pointwise limit scale |4 g'(t) g(t)|^{1/3}. Zero where g' vanishes.
template<DensityWithDerivative G>
double rate_constant_c(const G& g, double t)
{
  if (!(t > 0.0 && t < 1.0))
    throw std::domain_error("rate constant is defined for t in (0, 1), got " + std::to_string(t));
  return std::cbrt(std::fabs(4.0 * g.derivative(t) * g(t)));
}

//! ∫_0^1 |g'(t) g(t) / 2|^{1/3} dt by adaptive Simpson on g's smooth pieces.
template<DensityWithDerivative G>
double mu_shape_integral(const G& g, double abs_tol = 1e-8)
{
  const auto part = partition_of(g);
  auto integrand = [&](double t) { return std::cbrt(std::fabs(0.5 * g.derivative(t) * g(t))); };
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < part.size(); ++j) {
    const double w = part[j + 1] - part[j];
    total += adaptive_simpson(integrand, part[j], part[j + 1], { .abs_tol = abs_tol * w });
  }
  return total;
}

} // namespace grenander
