#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace grenander::stats {

inline double mean(std::span<const double> v)
{
  if (v.empty())
    throw std::invalid_argument("mean of empty sequence");
  double s = 0.0;
  for (double x : v)
    s += x;
  return s / static_cast<double>(v.size());
}

//! Unbiased sample variance.
inline double variance(std::span<const double> v)
{
  if (v.size() < 2)
    throw std::invalid_argument("variance needs at least two values");
  const double m = mean(v);
  double s = 0.0;
  for (double x : v)
    s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

inline double stddev(std::span<const double> v)
{
  return std::sqrt(variance(v));
}

//! Standard error of the sample variance, (m4 - s^4) / N under the usual
//! large-sample approximation.
inline double variance_standard_error(std::span<const double> v)
{
  const double m = mean(v);
  double m2 = 0.0;
  double m4 = 0.0;
  for (double x : v) {
    const double d = (x - m) * (x - m);
    m2 += d;
    m4 += d * d;
  }
  const double n = static_cast<double>(v.size());
  m2 /= n;
  m4 /= n;
  return std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
}

inline double covariance(std::span<const double> a, std::span<const double> b)
{
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("covariance needs two equal-length sequences of size >= 2");
  const double ma = mean(a);
  const double mb = mean(b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += (a[i] - ma) * (b[i] - mb);
  return s / static_cast<double>(a.size() - 1);
}

inline double correlation(std::span<const double> a, std::span<const double> b)
{
  return covariance(a, b) / std::sqrt(variance(a) * variance(b));
}

inline double median(std::vector<double> v)
{
  if (v.empty())
    throw std::invalid_argument("median of empty sequence");
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1)
    return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

//! Least-squares slope of y on x.
inline double regression_slope(std::span<const double> x, std::span<const double> y)
{
  return covariance(x, y) / variance(x);
}

//! Standard error from batch means: the values are split into `batches`
//! contiguous groups, `estimator` is applied per group, and the spread of the
//! group estimates is scaled by 1/sqrt(batches).
template<class Estimator>
double batch_standard_error(std::span<const double> v, std::size_t batches, const Estimator& estimator)
{
  if (batches < 2 || v.size() < 2 * batches)
    throw std::invalid_argument("batch standard error needs >= 2 batches of >= 2 values");
  const std::size_t size = v.size() / batches;
  std::vector<double> est;
  est.reserve(batches);
  for (std::size_t b = 0; b < batches; ++b)
    est.push_back(estimator(v.subspan(b * size, size)));
  return stddev(est) / std::sqrt(static_cast<double>(batches));
}

//! One-sample Kolmogorov-Smirnov statistic of `values` against `cdf`.
template<class Cdf>
double ks_statistic(std::vector<double> values, const Cdf& cdf)
{
  if (values.empty())
    throw std::invalid_argument("KS statistic of empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = cdf(values[i]);
    d = std::max({ d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n });
  }
  return d;
}

//! Two-sample Kolmogorov-Smirnov statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b)
{
  if (a.empty() || b.empty())
    throw std::invalid_argument("KS statistic of empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x)
      ++i;
    while (j < b.size() && b[j] == x)
      ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

// sqrt(-log(0.005) / 2), the asymptotic 1% point of the Kolmogorov distribution
inline constexpr double kKolmogorov1pct = 1.6276236115189502;

//! 1% critical value of the one-sample KS statistic (Stephens' correction).
inline double ks_critical_1pct(std::size_t n)
{
  const double r = std::sqrt(static_cast<double>(n));
  return kKolmogorov1pct / (r + 0.12 + 0.11 / r);
}

inline double ks_two_sample_critical_1pct(std::size_t n, std::size_t m)
{
  const double a = static_cast<double>(n);
  const double b = static_cast<double>(m);
  return kKolmogorov1pct * std::sqrt((a + b) / (a * b));
}

} // namespace grenander::stats
