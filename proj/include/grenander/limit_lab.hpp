#pragma once

#include "distance.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "stats.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace grenander {

//! Two-sided Brownian motion sampled on {-L, -L + δ, ..., L} with Z(0) = 0.
class PathGrid
{
public:
  PathGrid(double step, std::size_t half_steps, std::vector<double> values)
    : step_(step)
    , half_steps_(half_steps)
    , values_(std::move(values))
  {
    if (!(step_ > 0.0) || half_steps_ < 1 || values_.size() != 2 * half_steps_ + 1)
      throw std::invalid_argument("path grid needs step > 0 and 2 K + 1 values");
  }

  //! Z ≡ 0; a deterministic hook for argmax tests.
  static PathGrid zero(double step, double half_width)
  {
    const auto k = half_steps_for(step, half_width);
    return PathGrid(step, k, std::vector<double>(2 * k + 1, 0.0));
  }

  static std::size_t half_steps_for(double step, double half_width)
  {
    if (!(step > 0.0) || !(half_width >= step))
      throw std::invalid_argument("path grid needs step > 0 and half-width >= step");
    return static_cast<std::size_t>(std::llround(half_width / step));
  }

  double step() const { return step_; }
  std::size_t half_steps() const { return half_steps_; }
  double half_width() const { return step_ * static_cast<double>(half_steps_); }
  const std::vector<double>& values() const { return values_; }

  //! Z at grid offset k in [-K, K].
  double at(std::ptrdiff_t k) const { return values_[static_cast<std::size_t>(k + static_cast<std::ptrdiff_t>(half_steps_))]; }

  //! The path h -> Z(-h).
  PathGrid reflected() const { return PathGrid(step_, half_steps_, { values_.rbegin(), values_.rend() }); }

private:
  double step_;
  std::size_t half_steps_;
  std::vector<double> values_;
};

inline PathGrid simulate_path(double step, double half_width, RngStream& rng)
{
  const std::size_t k = PathGrid::half_steps_for(step, half_width);
  const double sd = std::sqrt(step);
  std::vector<double> z(2 * k + 1, 0.0);
  for (std::size_t i = k + 1; i < z.size(); ++i)
    z[i] = z[i - 1] + sd * rng.normal();
  for (std::size_t i = k; i-- > 0;)
    z[i] = z[i + 1] + sd * rng.normal();
  return PathGrid(step, k, std::move(z));
}

struct ArgmaxDraw
{
  double location;
  bool boundary_hit;
};

//! Raised when too many argmax draws land on the edge of the simulated window.
class WindowTooSmall : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// leftmost maximizer over offsets [lo, hi] of value(k) - (k δ)^2
template<class Value>
ArgmaxDraw grid_argmax(std::ptrdiff_t lo, std::ptrdiff_t hi, double step, const Value& value)
{
  std::ptrdiff_t best = lo;
  double best_v = -INFINITY;
  for (std::ptrdiff_t k = lo; k <= hi; ++k) {
    const double h = static_cast<double>(k) * step;
    const double v = value(k) - h * h;
    if (v > best_v) {
      best_v = v;
      best = k;
    }
  }
  return { static_cast<double>(best) * step, best == lo || best == hi };
}

} // namespace detail

//! argmax_h { Z(h) - h^2 } over the grid.
inline ArgmaxDraw chernoff_draw(const PathGrid& path)
{
  const auto k = static_cast<std::ptrdiff_t>(path.half_steps());
  return detail::grid_argmax(-k, k, path.step(), [&](std::ptrdiff_t i) { return path.at(i); });
}

//! argmax_h { Z1(h) + Z2(h) - h^2 }; distributed as 2^{1/3} times a Chernoff draw.
inline ArgmaxDraw doubled_draw(const PathGrid& first, const PathGrid& second)
{
  if (first.step() != second.step() || first.half_steps() != second.half_steps())
    throw std::invalid_argument("doubled draw needs paths on the same grid");
  const auto k = static_cast<std::ptrdiff_t>(first.half_steps());
  return detail::grid_argmax(-k, k, first.step(), [&](std::ptrdiff_t i) { return first.at(i) + second.at(i); });
}

//! ξ(t) = argmax_{|h| <= W} { Z(t + h) - Z(t) - h^2 } for each t in t_grid.
//! Every t must be a grid point with [t - W, t + W] inside the path.
inline std::vector<ArgmaxDraw> xi_values(const PathGrid& path, std::span<const double> t_grid, double window)
{
  const double step = path.step();
  const auto k = static_cast<std::ptrdiff_t>(path.half_steps());
  const auto w = static_cast<std::ptrdiff_t>(std::llround(window / step));
  if (!(window > 0.0) || w < 1)
    throw std::invalid_argument("xi window must span at least one grid step");
  std::vector<ArgmaxDraw> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    const auto c = static_cast<std::ptrdiff_t>(std::llround(t / step));
    if (std::fabs(static_cast<double>(c) * step - t) > 1e-9 * std::max(1.0, std::fabs(t)))
      throw std::invalid_argument("xi location " + std::to_string(t) + " is not on the path grid");
    if (c - w < -k || c + w > k)
      throw std::invalid_argument("xi window around t = " + std::to_string(t) + " exceeds the simulated path");
    const double base = path.at(c);
    out.push_back(detail::grid_argmax(-w, w, step, [&](std::ptrdiff_t i) { return path.at(c + i) - base; }));
  }
  return out;
}

inline constexpr double kMaxBoundaryHitRate = 1e-3;

//! Throws WindowTooSmall when more than 0.1% of the draws hit the window edge.
inline void check_boundary_rate(std::size_t hits, std::size_t total)
{
  if (total > 0 && static_cast<double>(hits) > kMaxBoundaryHitRate * static_cast<double>(total))
    throw WindowTooSmall("argmax boundary-hit rate " + std::to_string(static_cast<double>(hits) / static_cast<double>(total)) +
                         " exceeds 0.1%; enlarge the simulation window");
}

struct ChernoffSampleConfig
{
  double step = 0.002;
  double half_width = 3.0;
  std::size_t replicates = 20000;
  unsigned threads = 1;
};

//! Single and doubled argmax draws on independent paths; replicate i uses
//! rng.substream(i) for three paths (one single, two doubled).
struct ScalingSample
{
  std::vector<double> single;
  std::vector<double> doubled;
  std::size_t boundary_hits = 0;

  double variance_ratio() const { return stats::variance(doubled) / stats::variance(single); }
};

inline ScalingSample chernoff_scaling_sample(const ChernoffSampleConfig& cfg, const RngStream& rng)
{
  ScalingSample out;
  out.single.resize(cfg.replicates);
  out.doubled.resize(cfg.replicates);
  std::vector<unsigned char> hits(cfg.replicates, 0);
  parallel_for(cfg.replicates, cfg.threads, [&](std::size_t i) {
    auto stream = rng.substream(i);
    const auto a = simulate_path(cfg.step, cfg.half_width, stream);
    const auto b = simulate_path(cfg.step, cfg.half_width, stream);
    const auto c = simulate_path(cfg.step, cfg.half_width, stream);
    const auto s = chernoff_draw(a);
    const auto d = doubled_draw(b, c);
    out.single[i] = s.location;
    out.doubled[i] = d.location;
    hits[i] = static_cast<unsigned char>(s.boundary_hit) + static_cast<unsigned char>(d.boundary_hit);
  });
  for (auto h : hits)
    out.boundary_hits += h;
  check_boundary_rate(out.boundary_hits, 2 * cfg.replicates);
  return out;
}

struct LimitConfig
{
  double step = 0.002;
  double window = 3.0;
  std::size_t replicates = 20000;
  double lag_max = 8.0;
  double lag_step = 0.25;
  std::size_t batches = 20;
  unsigned threads = 1;

  double half_width() const { return window + lag_max; }
};

//! Monte Carlo estimates of E|ξ(0)|, Var(ℂ) and σ² = 8 ∫_0^∞ cov(|ξ(0)|, |ξ(x)|) dx
//! with batch-means standard errors.
struct LimitConstants
{
  double abs_xi_mean = 0.0;
  double abs_xi_mean_se = 0.0;
  double chernoff_var = 0.0;
  double chernoff_var_se = 0.0;
  double sigma2 = 0.0;
  double sigma2_se = 0.0;
  LimitConfig config;
  std::vector<double> lags;
  std::vector<double> lag_covariance;
  std::vector<double> lag_covariance_se;
  std::size_t boundary_hits = 0;
  //! ξ(0) per replicate, in replicate order.
  std::vector<double> chernoff_draws;
};

namespace detail {

inline std::vector<double> lag_covariances(std::span<const double> abs_xi, std::size_t lag_count)
{
  const std::size_t rows = abs_xi.size() / lag_count;
  std::vector<double> first(rows);
  std::vector<double> other(rows);
  std::vector<double> cov(lag_count);
  for (std::size_t r = 0; r < rows; ++r)
    first[r] = abs_xi[r * lag_count];
  for (std::size_t j = 0; j < lag_count; ++j) {
    for (std::size_t r = 0; r < rows; ++r)
      other[r] = abs_xi[r * lag_count + j];
    cov[j] = stats::covariance(first, other);
  }
  return cov;
}

inline double sigma2_from_covariances(std::span<const double> cov, double lag_step)
{
  double integral = 0.0;
  for (std::size_t j = 0; j + 1 < cov.size(); ++j)
    integral += 0.5 * (cov[j] + cov[j + 1]) * lag_step;
  return 8.0 * integral;
}

} // namespace detail

inline LimitConstants estimate_constants(const LimitConfig& cfg, const RngStream& rng)
{
  if (!(cfg.lag_step > 0.0) || !(cfg.lag_max >= cfg.lag_step))
    throw std::invalid_argument("lag grid needs 0 < lag_step <= lag_max");
  if (cfg.replicates < 2 * cfg.batches || cfg.batches < 2)
    throw std::invalid_argument("limit constants need >= 2 batches of >= 2 replicates");

  const auto lag_count = static_cast<std::size_t>(std::llround(cfg.lag_max / cfg.lag_step)) + 1;
  std::vector<double> lags(lag_count);
  for (std::size_t j = 0; j < lag_count; ++j)
    lags[j] = static_cast<double>(j) * cfg.lag_step;

  const std::size_t n = cfg.replicates;
  std::vector<double> xi0(n);
  std::vector<double> abs_xi(n * lag_count);
  std::vector<std::size_t> hits(n, 0);
  parallel_for(n, cfg.threads, [&](std::size_t i) {
    auto stream = rng.substream(i);
    const auto path = simulate_path(cfg.step, cfg.half_width(), stream);
    const auto xi = xi_values(path, lags, cfg.window);
    xi0[i] = xi[0].location;
    for (std::size_t j = 0; j < lag_count; ++j) {
      abs_xi[i * lag_count + j] = std::fabs(xi[j].location);
      hits[i] += xi[j].boundary_hit ? 1 : 0;
    }
  });

  LimitConstants out;
  out.config = cfg;
  out.lags = lags;
  for (auto h : hits)
    out.boundary_hits += h;
  check_boundary_rate(out.boundary_hits, n * lag_count);

  std::vector<double> abs0(n);
  for (std::size_t i = 0; i < n; ++i)
    abs0[i] = abs_xi[i * lag_count];
  out.abs_xi_mean = stats::mean(abs0);
  out.abs_xi_mean_se = stats::batch_standard_error(abs0, cfg.batches, [](auto v) { return stats::mean(v); });
  out.chernoff_var = stats::variance(xi0);
  out.chernoff_var_se = stats::batch_standard_error(xi0, cfg.batches, [](auto v) { return stats::variance(v); });
  out.chernoff_draws = std::move(xi0);

  out.lag_covariance = detail::lag_covariances(abs_xi, lag_count);
  out.sigma2 = detail::sigma2_from_covariances(out.lag_covariance, cfg.lag_step);

  // batch means over contiguous replicate blocks, for σ² and each lag
  const std::size_t size = n / cfg.batches;
  std::vector<double> sigma_batches(cfg.batches);
  std::vector<std::vector<double>> cov_batches(lag_count, std::vector<double>(cfg.batches));
  for (std::size_t b = 0; b < cfg.batches; ++b) {
    std::span<const double> block(abs_xi.data() + b * size * lag_count, size * lag_count);
    const auto cov = detail::lag_covariances(block, lag_count);
    sigma_batches[b] = detail::sigma2_from_covariances(cov, cfg.lag_step);
    for (std::size_t j = 0; j < lag_count; ++j)
      cov_batches[j][b] = cov[j];
  }
  const double root = std::sqrt(static_cast<double>(cfg.batches));
  out.sigma2_se = stats::stddev(sigma_batches) / root;
  out.lag_covariance_se.resize(lag_count);
  for (std::size_t j = 0; j < lag_count; ++j)
    out.lag_covariance_se[j] = stats::stddev(cov_batches[j]) / root;
  return out;
}

//! μ(g) = 2 E|ξ(0)| ∫ |g' g / 2|^{1/3}.
template<DensityWithDerivative G>
double mu_of_density(const G& g, const LimitConstants& constants)
{
  return 2.0 * constants.abs_xi_mean * mu_shape_integral(g);
}

} // namespace grenander
