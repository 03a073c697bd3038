#pragma once

#include "distance.hpp"
#include "kernel.hpp"
#include "parallel.hpp"
#include "resampling.hpp"
#include "rng.hpp"
#include "sample.hpp"
#include "smoothed_density.hpp"
#include "step_density.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace grenander {

//! k-th order statistic with k = ceil(p * count), 1-based.
inline double empirical_quantile(std::span<const double> values, double p)
{
  if (values.empty())
    throw std::invalid_argument("empirical quantile of an empty sequence");
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("quantile level must lie in (0, 1)");
  const auto count = static_cast<double>(values.size());
  // the 1e-9 guard keeps exact products such as 0.95 * 100 from rounding up
  auto k = static_cast<std::size_t>(std::ceil(p * count - 1e-9));
  k = std::clamp<std::size_t>(k, 1, values.size());
  std::vector<double> v(values.begin(), values.end());
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k - 1), v.end());
  return v[k - 1];
}

struct PointwiseCIOptions
{
  double t0 = 0.5;
  double alpha_level = 0.10; // 1 - nominal coverage
  std::size_t replicates = 500;
  BandwidthRule rule = BandwidthRule::pointwise();
  unsigned threads = 1;
};

struct PointwiseCIResult
{
  double t0;
  std::size_t n;
  double bandwidth;
  double grenander_value;
  double smoothed_value;
  double lower;
  double upper;
  double level; // nominal coverage 1 - alpha_level
  std::size_t replicates;
  //! n^{1/3} (f*(t0) - f~(t0)) per replicate, in replicate order.
  std::vector<double> deviations;
};

//! Smoothed-bootstrap confidence interval for f(t0).
//!
//! Resamples of size n are drawn from the normalized kernel estimate and
//! Grenander-fitted; the deviation quantiles are inverted around the Grenander
//! value at t0. Replicate b uses rng.substream(b).
inline PointwiseCIResult smoothed_pointwise_ci(const Sample& sample,
                                               const Kernel& kernel,
                                               const PointwiseCIOptions& opt,
                                               const RngStream& rng)
{
  if (!(opt.t0 > 0.0 && opt.t0 < 1.0))
    throw std::invalid_argument("t0 must lie in (0, 1)");
  if (!(opt.alpha_level > 0.0 && opt.alpha_level < 1.0))
    throw std::invalid_argument("alpha level must lie in (0, 1)");
  if (opt.replicates < 20)
    throw std::invalid_argument("pointwise CI needs at least 20 bootstrap replicates");
  if (opt.rule.regime != BandwidthRule::Regime::pointwise)
    throw std::invalid_argument("pointwise CI needs a pointwise-regime bandwidth rule");
  opt.rule.validate();
  if (!kernel.satisfies(KernelLevel::B4))
    throw std::invalid_argument("kernel '" + kernel.name() + "' fails the B1-B4 conditions");

  const std::size_t n = sample.size();
  const double scale = std::cbrt(static_cast<double>(n));
  const SmoothedDensity smooth(sample, kernel, opt.rule);
  const Envelope env(smooth);
  const double center = smooth(opt.t0);

  std::vector<double> dev(opt.replicates);
  parallel_for(opt.replicates, opt.threads, [&](std::size_t b) {
    auto stream = rng.substream(b);
    const auto fit = grenander_fit(rejection_sample(env, n, stream));
    dev[b] = scale * (fit(opt.t0) - center);
  });

  const double g = grenander_fit(sample)(opt.t0);
  const double a = opt.alpha_level;
  return PointwiseCIResult{ .t0 = opt.t0,
                            .n = n,
                            .bandwidth = smooth.h(),
                            .grenander_value = g,
                            .smoothed_value = center,
                            .lower = g - empirical_quantile(dev, 1.0 - a / 2.0) / scale,
                            .upper = g - empirical_quantile(dev, a / 2.0) / scale,
                            .level = 1.0 - a,
                            .replicates = opt.replicates,
                            .deviations = std::move(dev) };
}

//! n^{1/3} (f^*(t0) - f^(t0)) for B multinomial resamples; replicate b uses
//! rng.substream(b).
inline std::vector<double> naive_bootstrap_deviations(const Sample& sample,
                                                      double t0,
                                                      std::size_t replicates,
                                                      const RngStream& rng,
                                                      unsigned threads = 1)
{
  if (!(t0 > 0.0 && t0 < 1.0))
    throw std::invalid_argument("t0 must lie in (0, 1)");
  const double scale = std::cbrt(static_cast<double>(sample.size()));
  const double base = grenander_fit(sample)(t0);
  std::vector<double> dev(replicates);
  parallel_for(replicates, threads, [&](std::size_t b) {
    auto stream = rng.substream(b);
    dev[b] = scale * (grenander_fit(multinomial_bootstrap(sample, stream))(t0) - base);
  });
  return dev;
}

namespace detail {

inline void require_l1_setting(const SmoothedDensity& sd)
{
  if (sd.rule() && sd.rule()->regime != BandwidthRule::Regime::l1)
    throw std::invalid_argument("L1 inference needs an L1-regime bandwidth rule");
  if (!sd.kernel().satisfies(KernelLevel::B6))
    throw std::invalid_argument("kernel '" + sd.kernel().name() + "' fails the B6 conditions needed for L1 inference");
}

inline double supersample_mu_hat(const Envelope& env, std::size_t m, RngStream& rng)
{
  const auto& sd = env.density();
  if (m <= sd.n())
    throw std::invalid_argument("supersample size m = " + std::to_string(m) + " must exceed n = " +
                                std::to_string(sd.n()));
  const auto fit = grenander_fit(rejection_sample(env, m, rng));
  return std::cbrt(static_cast<double>(m)) * l1_distance(fit, sd);
}

} // namespace detail

//! m^{1/3} ∫ |f**_{n,m} - f~_n| from one supersample of size m > n.
inline double supersample_mu_hat(const SmoothedDensity& sd, std::size_t m, RngStream& rng)
{
  detail::require_l1_setting(sd);
  return detail::supersample_mu_hat(Envelope(sd), m, rng);
}

//! Default supersample size: max(10 n, min(ceil(n^{3/2}), budget)).
inline std::size_t default_supersample_size(std::size_t n, std::size_t budget = 200000)
{
  const auto grow = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), 1.5)));
  return std::max(10 * n, std::min(grow, budget));
}

struct L1BandOptions
{
  double alpha_level = 0.05;
  std::size_t replicates = 300;
  std::size_t supersample = 0; // 0: default_supersample_size(n)
  BandwidthRule rule = BandwidthRule::l1();
  unsigned threads = 1;
};

struct L1BandResult
{
  std::size_t n;
  double bandwidth;
  double level;
  double mu_hat;
  std::size_t m;
  double c_hat;
  double radius;
  //! A negative radius describes an empty band.
  bool empty;
  StepDensity center;
  std::size_t replicates;
  //! n^{1/6} (n^{1/3} ∫|f~* - f~| - mu_hat) per replicate, in replicate order.
  std::vector<double> standardized;
};

//! Supersample smoothed-bootstrap L1 confidence band around the Grenander fit.
//! The supersample uses rng.substream(0); replicate b uses
//! rng.substream({1, b}).
inline L1BandResult l1_band(const Sample& sample, const Kernel& kernel, const L1BandOptions& opt, const RngStream& rng)
{
  if (!(opt.alpha_level > 0.0 && opt.alpha_level < 1.0))
    throw std::invalid_argument("alpha level must lie in (0, 1)");
  if (opt.replicates < 50)
    throw std::invalid_argument("L1 band needs at least 50 bootstrap replicates");
  if (opt.rule.regime != BandwidthRule::Regime::l1)
    throw std::invalid_argument("L1 band needs an L1-regime bandwidth rule");
  opt.rule.validate();
  const std::size_t n = sample.size();
  const std::size_t m = opt.supersample == 0 ? default_supersample_size(n) : opt.supersample;
  if (m < 10 * n)
    throw std::invalid_argument("L1 band needs m / n >= 10 (m = " + std::to_string(m) + ", n = " +
                                std::to_string(n) + ")");

  const SmoothedDensity smooth(sample, kernel, opt.rule);
  detail::require_l1_setting(smooth);
  const Envelope env(smooth);

  auto super_stream = rng.substream(0);
  const double mu = detail::supersample_mu_hat(env, m, super_stream);

  const double nd = static_cast<double>(n);
  const double third = std::cbrt(nd);
  const double sixth = std::sqrt(third);
  std::vector<double> s(opt.replicates);
  parallel_for(opt.replicates, opt.threads, [&](std::size_t b) {
    auto stream = rng.substream({ 1, b });
    const auto fit = grenander_fit(rejection_sample(env, n, stream));
    s[b] = sixth * (third * l1_distance(fit, smooth) - mu);
  });

  const double c = empirical_quantile(s, 1.0 - opt.alpha_level);
  const double radius = mu / third + c / std::sqrt(nd);
  return L1BandResult{ .n = n,
                       .bandwidth = smooth.h(),
                       .level = 1.0 - opt.alpha_level,
                       .mu_hat = mu,
                       .m = m,
                       .c_hat = c,
                       .radius = radius,
                       .empty = radius < 0.0,
                       .center = grenander_fit(sample),
                       .replicates = opt.replicates,
                       .standardized = std::move(s) };
}

//! ∫ |center - g| <= radius; an empty band contains nothing.
template<Density G>
bool band_contains(const L1BandResult& band, const G& g)
{
  if (band.radius < 0.0)
    return false;
  return l1_distance(band.center, g) <= band.radius;
}

} // namespace grenander
