#pragma once

// Simulation studies built on the estimators: coverage of the smoothed
// bootstrap procedures, the naive-bootstrap inconsistency signature, kernel
// convergence rates and the L1 central limit behaviour of the Grenander fit.

#include "analytic_density.hpp"
#include "bootstrap.hpp"
#include "distance.hpp"
#include "kernel.hpp"
#include "limit_lab.hpp"
#include "parallel.hpp"
#include "resampling.hpp"
#include "smoothed_density.hpp"
#include "stats.hpp"
#include "step_density.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace grenander::experiments {

// --- coverage ---------------------------------------------------------------

enum class CoverageTarget
{
  pointwise,
  band
};

struct CoverageConfig
{
  CoverageTarget target = CoverageTarget::pointwise;
  std::size_t n = 500;
  std::size_t data_replicates = 200;
  std::size_t bootstrap_replicates = 200;
  double t0 = 0.5;
  double level = 0.90;
  double exponent = 0.30;
  std::size_t supersample = 0;
  unsigned threads = 1;
};

struct CoverageRow
{
  std::size_t replicate;
  double lower;  // CI lower end, or 0 for bands
  double upper;  // CI upper end, or band radius
  double center; // f^(t0), or mu_hat for bands
  double distance; // |f^(t0) - f(t0)| or ∫|f^ - f|
  double replicate_mean; // mean bootstrap statistic (D_b or S_b)
  bool covered;
};

struct CoverageResult
{
  std::vector<CoverageRow> rows;
  double coverage;
  double standard_error;
  //! Mean of every bootstrap statistic pooled over all data replicates.
  double pooled_replicate_mean;
  std::size_t pooled_count;
  std::size_t empty_bands;
};

//! Data replicate r draws its sample from rng.substream({r, 0}) and runs the
//! bootstrap on rng.substream({r, 1}). Data replicates run in parallel; the
//! inner bootstrap runs serially.
inline CoverageResult run_coverage(const AnalyticDensity& truth,
                                   const Kernel& kernel,
                                   const CoverageConfig& cfg,
                                   const RngStream& rng)
{
  if (cfg.data_replicates < 1)
    throw std::invalid_argument("coverage needs at least one data replicate");
  std::vector<CoverageRow> rows(cfg.data_replicates);
  std::vector<double> sums(cfg.data_replicates, 0.0);
  std::vector<std::size_t> counts(cfg.data_replicates, 0);
  parallel_for(cfg.data_replicates, cfg.threads, [&](std::size_t r) {
    auto data_stream = rng.substream({ r, 0 });
    const auto boot_stream = rng.substream({ r, 1 });
    const auto data = sample_from_analytic(truth, cfg.n, data_stream);
    CoverageRow row{};
    row.replicate = r;
    if (cfg.target == CoverageTarget::pointwise) {
      PointwiseCIOptions opt;
      opt.t0 = cfg.t0;
      opt.alpha_level = 1.0 - cfg.level;
      opt.replicates = cfg.bootstrap_replicates;
      opt.rule = BandwidthRule::pointwise(cfg.exponent);
      const auto ci = smoothed_pointwise_ci(data, kernel, opt, boot_stream);
      const double truth_t0 = truth(cfg.t0);
      row.lower = ci.lower;
      row.upper = ci.upper;
      row.center = ci.grenander_value;
      row.distance = std::fabs(ci.grenander_value - truth_t0);
      row.covered = ci.lower <= truth_t0 && truth_t0 <= ci.upper;
      sums[r] = 0.0;
      for (double d : ci.deviations)
        sums[r] += d;
      counts[r] = ci.deviations.size();
      row.replicate_mean = sums[r] / static_cast<double>(counts[r]);
    } else {
      L1BandOptions opt;
      opt.alpha_level = 1.0 - cfg.level;
      opt.replicates = cfg.bootstrap_replicates;
      opt.supersample = cfg.supersample;
      opt.rule = BandwidthRule::l1(cfg.exponent);
      const auto band = l1_band(data, kernel, opt, boot_stream);
      row.lower = 0.0;
      row.upper = band.radius;
      row.center = band.mu_hat;
      row.distance = l1_distance(band.center, truth);
      row.covered = band_contains(band, truth);
      for (double s : band.standardized)
        sums[r] += s;
      counts[r] = band.standardized.size();
      row.replicate_mean = sums[r] / static_cast<double>(counts[r]);
    }
    rows[r] = row;
  });

  CoverageResult out{};
  std::size_t hits = 0;
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    hits += rows[r].covered ? 1 : 0;
    total += sums[r];
    count += counts[r];
    out.empty_bands += (cfg.target == CoverageTarget::band && rows[r].upper < 0.0) ? 1 : 0;
  }
  const double reps = static_cast<double>(rows.size());
  out.coverage = static_cast<double>(hits) / reps;
  out.standard_error = std::sqrt(out.coverage * (1.0 - out.coverage) / reps);
  out.pooled_replicate_mean = total / static_cast<double>(count);
  out.pooled_count = count;
  out.rows = std::move(rows);
  return out;
}

// --- naive bootstrap inconsistency -------------------------------------------

struct InconsistencyConfig
{
  std::size_t n = 2000;
  std::size_t replicates = 2000;
  double t0 = 0.5;
  unsigned threads = 1;
};

struct InconsistencyRow
{
  std::size_t replicate;
  double sampling;  // n^{1/3} (f^(t0) - f(t0))
  double bootstrap; // n^{1/3} (f^*(t0) - f^(t0))
  double total;     // n^{1/3} (f^*(t0) - f(t0))
};

struct InconsistencyResult
{
  std::vector<InconsistencyRow> rows;
  double rate_constant;
  double chernoff_var;
  double var_total;
  double var_sampling;
  double var_bootstrap;
  //! Var(total) / (c(t0)^2 Var(ℂ)); the inconsistency signature is 2^{2/3}.
  double ratio;
  double ratio_se;
  double ratio_ci_low;
  double ratio_ci_high;
  double sampling_ratio;
  double correlation;
};

//! Joint replicates of (data, one multinomial bootstrap). Replicate r draws
//! data from rng.substream({r, 0}) and the resample from rng.substream({r, 1}).
inline InconsistencyResult run_inconsistency(const AnalyticDensity& truth,
                                             const LimitConstants& limits,
                                             const InconsistencyConfig& cfg,
                                             const RngStream& rng)
{
  if (cfg.replicates < 10)
    throw std::invalid_argument("inconsistency experiment needs at least 10 replicates");
  const double scale = std::cbrt(static_cast<double>(cfg.n));
  const double f0 = truth(cfg.t0);
  std::vector<InconsistencyRow> rows(cfg.replicates);
  parallel_for(cfg.replicates, cfg.threads, [&](std::size_t r) {
    auto data_stream = rng.substream({ r, 0 });
    auto boot_stream = rng.substream({ r, 1 });
    const auto data = sample_from_analytic(truth, cfg.n, data_stream);
    const double fit = grenander_fit(data)(cfg.t0);
    const double boot = grenander_fit(multinomial_bootstrap(data, boot_stream))(cfg.t0);
    rows[r] = { r, scale * (fit - f0), scale * (boot - fit), scale * (boot - f0) };
  });

  std::vector<double> sampling, bootstrap, total;
  for (const auto& row : rows) {
    sampling.push_back(row.sampling);
    bootstrap.push_back(row.bootstrap);
    total.push_back(row.total);
  }
  InconsistencyResult out{};
  out.rate_constant = rate_constant_c(truth, cfg.t0);
  out.chernoff_var = limits.chernoff_var;
  out.var_total = stats::variance(total);
  out.var_sampling = stats::variance(sampling);
  out.var_bootstrap = stats::variance(bootstrap);
  const double denom = out.rate_constant * out.rate_constant * limits.chernoff_var;
  out.ratio = out.var_total / denom;
  out.sampling_ratio = out.var_sampling / denom;
  // delta method on the quotient of two independent estimates
  const double rel_total = stats::variance_standard_error(total) / out.var_total;
  const double rel_limit = limits.chernoff_var_se / limits.chernoff_var;
  out.ratio_se = out.ratio * std::sqrt(rel_total * rel_total + rel_limit * rel_limit);
  out.ratio_ci_low = out.ratio - 1.959963984540054 * out.ratio_se;
  out.ratio_ci_high = out.ratio + 1.959963984540054 * out.ratio_se;
  out.correlation = stats::correlation(sampling, bootstrap);
  out.rows = std::move(rows);
  return out;
}

// --- convergence rates -------------------------------------------------------

struct RateConfig
{
  std::vector<std::size_t> sizes{ 1000, 3162, 10000, 31623 };
  std::size_t replicates = 50;
  BandwidthRule rule = BandwidthRule::l1(0.18);
  std::size_t grid_size = 1001;
  double t0 = 0.5;
  unsigned threads = 1;
};

struct RateRow
{
  std::size_t n;
  double bandwidth;
  double median_sup_error;        // sup |f~ - f|
  double median_derivative_error; // sup |f~' - f'| where f~ > 0
  double median_scaled_sup_error; // n^{1/3} sup |f~ - f|
  double median_grenander_error;  // |f^(t0) - f(t0)|
};

struct RateResult
{
  std::vector<RateRow> rows;
  double sup_slope;
  double derivative_slope;
  double grenander_slope;
  bool scaled_sup_decreasing;
};

//! Sup-norm errors of the smoothed estimate (value and first derivative) and
//! the pointwise Grenander error, with log-log slopes across `sizes`.
//! Size k, replicate r samples from rng.substream({k, r}).
//!
//! The derivative error skips grid points where the positive-part truncation
//! is active, since the estimate is identically 0 there.
inline RateResult run_rate(const AnalyticDensity& truth, const Kernel& kernel, const RateConfig& cfg, const RngStream& rng)
{
  if (cfg.sizes.size() < 2)
    throw std::invalid_argument("rate experiment needs at least two sample sizes");
  if (cfg.grid_size < 3)
    throw std::invalid_argument("rate experiment needs grid_size >= 3");
  RateResult out{};
  std::vector<double> log_n, log_sup, log_der, log_gren;
  for (std::size_t k = 0; k < cfg.sizes.size(); ++k) {
    const std::size_t n = cfg.sizes[k];
    std::vector<double> sup(cfg.replicates), der(cfg.replicates), gren(cfg.replicates);
    double h = 0.0;
    parallel_for(cfg.replicates, cfg.threads, [&](std::size_t r) {
      auto stream = rng.substream({ k, r });
      const auto data = sample_from_analytic(truth, n, stream);
      const SmoothedDensity smooth(data, kernel, cfg.rule);
      sup[r] = sup_distance(smooth, truth, cfg.grid_size);
      double d = 0.0;
      for (std::size_t i = 1; i + 1 < cfg.grid_size; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(cfg.grid_size - 1);
        if (smooth.extended_estimate(t) <= 0.0)
          continue;
        d = std::max(d, std::fabs(smooth.derivative(t) - truth.derivative(t)));
      }
      der[r] = d;
      gren[r] = std::fabs(grenander_fit(data)(cfg.t0) - truth(cfg.t0));
      if (r == 0)
        h = smooth.h();
    });
    RateRow row{};
    row.n = n;
    row.bandwidth = h;
    row.median_sup_error = stats::median(sup);
    row.median_derivative_error = stats::median(der);
    row.median_scaled_sup_error = std::cbrt(static_cast<double>(n)) * row.median_sup_error;
    row.median_grenander_error = stats::median(gren);
    out.rows.push_back(row);
    log_n.push_back(std::log(static_cast<double>(n)));
    log_sup.push_back(std::log(row.median_sup_error));
    log_der.push_back(std::log(row.median_derivative_error));
    log_gren.push_back(std::log(row.median_grenander_error));
  }
  out.sup_slope = stats::regression_slope(log_n, log_sup);
  out.derivative_slope = stats::regression_slope(log_n, log_der);
  out.grenander_slope = stats::regression_slope(log_n, log_gren);
  out.scaled_sup_decreasing = true;
  for (std::size_t k = 1; k < out.rows.size(); ++k)
    if (!(out.rows[k].median_scaled_sup_error < out.rows[k - 1].median_scaled_sup_error))
      out.scaled_sup_decreasing = false;
  return out;
}

// --- L1 central limit ---------------------------------------------------------

struct L1CltConfig
{
  std::size_t n = 2000;
  std::size_t replicates = 500;
  unsigned threads = 1;
};

struct L1CltResult
{
  //! n^{1/6} (n^{1/3} ∫|f^ - f| - μ(f)) per replicate.
  std::vector<double> standardized;
  double mu;
  double sigma2_reference;
  double mean;
  double variance;
  double variance_ratio;
  double mean_z;
};

inline L1CltResult run_l1clt(const AnalyticDensity& truth,
                             const LimitConstants& limits,
                             const L1CltConfig& cfg,
                             const RngStream& rng)
{
  if (cfg.replicates < 2)
    throw std::invalid_argument("L1 CLT experiment needs at least two replicates");
  L1CltResult out{};
  out.mu = mu_of_density(truth, limits);
  out.sigma2_reference = limits.sigma2;
  const double nd = static_cast<double>(cfg.n);
  const double third = std::cbrt(nd);
  const double sixth = std::sqrt(third);
  out.standardized.resize(cfg.replicates);
  parallel_for(cfg.replicates, cfg.threads, [&](std::size_t r) {
    auto stream = rng.substream(r);
    const auto fit = grenander_fit(sample_from_analytic(truth, cfg.n, stream));
    out.standardized[r] = sixth * (third * l1_distance(fit, truth) - out.mu);
  });
  out.mean = stats::mean(out.standardized);
  out.variance = stats::variance(out.standardized);
  out.variance_ratio = out.variance / out.sigma2_reference;
  out.mean_z = out.mean / std::sqrt(out.variance / static_cast<double>(cfg.replicates));
  return out;
}

} // namespace grenander::experiments
