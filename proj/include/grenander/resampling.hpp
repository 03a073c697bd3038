#pragma once

#include "analytic_density.hpp"
#include "rng.hpp"
#include "sample.hpp"
#include "smoothed_density.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace grenander {

//! n inverse-CDF draws from g, sorted.
inline Sample sample_from_analytic(const AnalyticDensity& g, std::size_t n, RngStream& rng)
{
  if (!g.has_inverse_cdf())
    throw std::invalid_argument("density '" + g.name() + "' has no inverse CDF");
  if (n < 1)
    throw std::invalid_argument("sample size must be at least 1");
  std::vector<double> v(n);
  for (auto& x : v)
    x = g.inverse_cdf(rng.uniform());
  return Sample(std::move(v));
}

//! n draws with replacement from the sample.
inline Sample multinomial_bootstrap(const Sample& sample, RngStream& rng)
{
  const std::size_t n = sample.size();
  std::vector<double> v(n);
  for (auto& x : v)
    x = sample[rng.index(n)];
  return Sample(std::move(v));
}

//! m distinct observations chosen uniformly (partial Fisher-Yates).
inline Sample subsample_without_replacement(const Sample& sample, std::size_t m, RngStream& rng)
{
  const std::size_t n = sample.size();
  if (m < 1 || m > n)
    throw std::invalid_argument("subsample size must satisfy 1 <= m <= n (m = " + std::to_string(m) +
                                ", n = " + std::to_string(n) + ")");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{ 0 });
  for (std::size_t i = 0; i < m; ++i)
    std::swap(idx[i], idx[i + rng.index(n - i)]);
  std::vector<double> v(m);
  for (std::size_t i = 0; i < m; ++i)
    v[i] = sample[idx[i]];
  return Sample(std::move(v));
}

//! Raised when the rejection sampler detects a broken envelope.
class EnvelopeError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct RejectionStats
{
  std::size_t proposals = 0;
  std::size_t accepted = 0;
  double acceptance_rate() const
  {
    return proposals == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposals);
  }
};

inline constexpr std::size_t kRejectionBurnIn = 100000;
inline constexpr double kMinAcceptanceRate = 1e-4;

//! Draws n points from the density proportional to `target` on [0, 1] using a
//! uniform proposal under the constant envelope `bound`. `target` must be
//! nonnegative and at most `bound`; a value above the bound, or an acceptance
//! rate under 1e-4 after the burn-in window, raises EnvelopeError.
template<class Target>
Sample rejection_sample(const Target& target,
                        double bound,
                        std::size_t n,
                        RngStream& rng,
                        RejectionStats* stats = nullptr)
{
  if (!(bound > 0.0) || !std::isfinite(bound))
    throw EnvelopeError("rejection envelope must be positive and finite");
  if (n < 1)
    throw std::invalid_argument("sample size must be at least 1");
  RejectionStats local;
  std::vector<double> out;
  out.reserve(n);
  while (out.size() < n) {
    const double t = rng.uniform();
    const double u = rng.uniform() * bound;
    const double y = target(t);
    ++local.proposals;
    if (y > bound)
      throw EnvelopeError("target value " + std::to_string(y) + " exceeds envelope " + std::to_string(bound) +
                          " at t = " + std::to_string(t));
    if (u <= y) {
      out.push_back(t);
      ++local.accepted;
    }
    if (local.proposals == kRejectionBurnIn && local.acceptance_rate() < kMinAcceptanceRate)
      throw EnvelopeError("rejection acceptance rate below 1e-4 after burn-in");
  }
  if (stats)
    *stats = local;
  return Sample(std::move(out));
}

//! Rigorous piecewise bounds for the positive part of the extended estimate.
//!
//! [0, 1] is cut into uniform cells. On each cell the estimate is Lipschitz
//! with constant max|K'| N_c / (n h^2), where N_c counts observations within h
//! of the cell, or the extension slope where the cell meets [0, h) or (1-h, 1].
//! Node values plus these constants bracket the estimate everywhere, giving
//! both the envelope constant and a squeeze that settles most rejection
//! proposals without evaluating the kernel sum.
class Envelope
{
public:
  explicit Envelope(const SmoothedDensity& sd, std::size_t cells = 4096)
    : sd_(&sd)
    , cells_(cells)
    , width_(1.0 / static_cast<double>(cells))
    , nodes_(cells + 1)
    , lip_(cells)
  {
    if (cells < 1)
      throw std::invalid_argument("envelope needs at least one cell");
    for (std::size_t i = 0; i <= cells; ++i) {
      nodes_[i] = sd.positive_part(node(i));
      if (!std::isfinite(nodes_[i]))
        throw std::domain_error("non-finite smoothed estimate at t = " + std::to_string(node(i)));
    }
    double kmax = 0.0;
    for (std::size_t i = 0; i <= 100000; ++i)
      kmax = std::max(kmax, std::fabs(sd.kernel().d1(-1.0 + 2.0 * static_cast<double>(i) / 100000.0)));
    kmax *= 1.01; // grid maximum of a smooth K' is within far less than 1%
    const auto& x = sd.observations();
    const double h = sd.h();
    const double scale = kmax / (static_cast<double>(x.size()) * h * h);
    const double ext = std::max(std::fabs(sd.extended_slope(0.0)), std::fabs(sd.extended_slope(1.0)));
    bound_ = 0.0;
    for (std::size_t c = 0; c < cells; ++c) {
      const double a = node(c);
      const double b = node(c + 1);
      const auto lo = std::lower_bound(x.begin(), x.end(), a - h);
      const auto hi = std::upper_bound(lo, x.end(), b + h);
      double l = scale * static_cast<double>(hi - lo);
      if (a < h || b > 1.0 - h)
        l = std::max(l, ext);
      lip_[c] = l;
      bound_ = std::max(bound_, std::max(nodes_[c], nodes_[c + 1]) + 0.5 * l * width_);
    }
  }

  //! Upper bound for the positive part on [0, 1].
  double bound() const { return bound_; }

  //! Lower and upper bounds for the positive part at t in [0, 1].
  std::pair<double, double> bracket(double t) const
  {
    const auto c = std::min(static_cast<std::size_t>(t * static_cast<double>(cells_)), cells_ - 1);
    const double da = t - node(c);
    const double db = node(c + 1) - t;
    const double l = lip_[c];
    const double lo = std::max({ nodes_[c] - l * da, nodes_[c + 1] - l * db, 0.0 });
    const double hi = std::min(nodes_[c] + l * da, nodes_[c + 1] + l * db);
    return { lo, hi };
  }

  const SmoothedDensity& density() const { return *sd_; }

private:
  double node(std::size_t i) const { return static_cast<double>(i) * width_; }

  const SmoothedDensity* sd_;
  std::size_t cells_;
  double width_;
  std::vector<double> nodes_;
  std::vector<double> lip_;
  double bound_ = 0.0;
};

//! Upper bound for the positive part of the extended estimate over [0, 1].
inline double envelope_bound(const SmoothedDensity& sd)
{
  return Envelope(sd).bound();
}

//! n draws from the normalized smoothed estimate, by rejection from its
//! unnormalized positive part under a precomputed envelope. Proposals decided
//! by the squeeze skip the kernel sum; the accepted points are the same as
//! with a plain evaluation of the target.
inline Sample rejection_sample(const Envelope& env, std::size_t n, RngStream& rng, RejectionStats* stats = nullptr)
{
  const double bound = env.bound();
  if (!(bound > 0.0) || !std::isfinite(bound))
    throw EnvelopeError("rejection envelope must be positive and finite");
  if (n < 1)
    throw std::invalid_argument("sample size must be at least 1");
  const auto& sd = env.density();
  RejectionStats local;
  std::vector<double> out;
  out.reserve(n);
  while (out.size() < n) {
    const double t = rng.uniform();
    const double u = rng.uniform() * bound;
    ++local.proposals;
    const auto [lo, hi] = env.bracket(t);
    bool accept = u <= lo;
    if (!accept && u <= hi) {
      const double y = sd.positive_part(t);
      if (y > bound)
        throw EnvelopeError("target value " + std::to_string(y) + " exceeds envelope " + std::to_string(bound) +
                            " at t = " + std::to_string(t));
      accept = u <= y;
    }
    if (accept) {
      out.push_back(t);
      ++local.accepted;
    }
    if (local.proposals == kRejectionBurnIn && local.acceptance_rate() < kMinAcceptanceRate)
      throw EnvelopeError("rejection acceptance rate below 1e-4 after burn-in");
  }
  if (stats)
    *stats = local;
  return Sample(std::move(out));
}

inline Sample rejection_sample(const SmoothedDensity& sd,
                               std::size_t n,
                               RngStream& rng,
                               RejectionStats* stats = nullptr)
{
  return rejection_sample(Envelope(sd), n, rng, stats);
}

} // namespace grenander
