#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace grenander {

struct SimpsonOptions
{
  double abs_tol = 1e-8;
  int max_depth = 30;
};

namespace detail {

template<class F>
double checked_eval(const F& f, double x)
{
  const double y = f(x);
  if (!std::isfinite(y))
    throw std::domain_error("non-finite integrand value at x = " + std::to_string(x));
  return y;
}

template<class F>
double simpson_step(const F& f,
                    double a,
                    double b,
                    double fa,
                    double fm,
                    double fb,
                    double whole,
                    double tol,
                    int depth)
{
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = checked_eval(f, lm);
  const double frm = checked_eval(f, rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

//! Adaptive Simpson quadrature of f over [a, b] with Richardson correction.
//! Throws std::domain_error if f returns a non-finite value.
template<class F>
double adaptive_simpson(const F& f, double a, double b, SimpsonOptions opt = {})
{
  if (a == b)
    return 0.0;
  const double fa = detail::checked_eval(f, a);
  const double fb = detail::checked_eval(f, b);
  const double fm = detail::checked_eval(f, 0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, opt.abs_tol, opt.max_depth);
}

} // namespace grenander
