// grenander: command-line front end for the monotone-density library.
//
// Every subcommand writes its outputs plus OUT.manifest.json describing the
// run. Exit codes: 0 success, 2 usage error, 1 runtime error.

#include <grenander/experiments.hpp>
#include <grenander/grenander.hpp>
#include <grenander/io.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef GRENANDER_VERSION
#define GRENANDER_VERSION "0.0.0"
#endif

namespace {

using nlohmann::json;
namespace gx = grenander::experiments;
namespace io = grenander::io;

class UsageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

std::string sha256_hex(const std::string& bytes)
{
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string slurp(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Collects inputs and outputs of one run and writes the manifest last.
class Run
{
public:
  Run(std::string subcommand, unsigned threads)
    : subcommand_(std::move(subcommand))
    , threads_(threads)
    , start_(std::chrono::steady_clock::now())
  {
  }

  json params = json::object();
  std::optional<std::uint64_t> seed;

  std::string input(const std::string& path)
  {
    auto bytes = slurp(path);
    inputs_.push_back({ { "path", path }, { "sha256", sha256_hex(bytes) }, { "bytes", bytes.size() } });
    return bytes;
  }

  void write(const std::string& path, const std::string& text)
  {
    std::ofstream out(path, std::ios::binary);
    if (!out)
      throw std::runtime_error("cannot write '" + path + "'");
    out << text;
    if (!out)
      throw std::runtime_error("write to '" + path + "' failed");
    outputs_.push_back(path);
  }

  void write_json(const std::string& path, const json& j) { write(path, j.dump(2) + "\n"); }

  void finish(const std::string& manifest_path)
  {
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json m = { { "tool", "grenander" },
               { "version", GRENANDER_VERSION },
               { "subcommand", subcommand_ },
               { "parameters", params },
               { "seed", seed ? json(*seed) : json(nullptr) },
               { "inputs", inputs_ },
               { "outputs", outputs_ },
               { "execution", { { "threads", threads_ }, { "wall_clock_seconds", wall } } } };
    std::ofstream out(manifest_path, std::ios::binary);
    if (!out)
      throw std::runtime_error("cannot write '" + manifest_path + "'");
    out << m.dump(2) << '\n';
  }

private:
  std::string subcommand_;
  unsigned threads_;
  std::chrono::steady_clock::time_point start_;
  json inputs_ = json::array();
  std::vector<std::string> outputs_;
};

grenander::Sample load_sample(Run& run, const std::string& path, bool rescale)
{
  std::istringstream in(run.input(path));
  auto sample = io::read_observations(in, { .rescale = rescale });
  if (!rescale)
    return sample;
  // the minimum maps to the origin, where the estimator is undefined
  std::vector<double> kept;
  for (double v : sample.values())
    if (v > 0.0)
      kept.push_back(v);
  const auto dropped = sample.size() - kept.size();
  std::fprintf(stderr, "rescale: dropped %zu observation(s) mapped to 0\n", dropped);
  return grenander::Sample(std::move(kept));
}

grenander::Kernel require_kernel(const std::string& name)
{
  try {
    return grenander::kernel_by_name(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

void require_level(const grenander::Kernel& k, grenander::KernelLevel level)
{
  if (!k.satisfies(level))
    throw UsageError("kernel '" + k.name() + "' fails the " + (level == grenander::KernelLevel::B6 ? "B6" : "B1-B4") +
                     " conditions required here");
}

void require_regime(grenander::BandwidthRule::Regime regime, double exponent)
{
  if (!grenander::BandwidthRule::admissible(regime, exponent)) {
    const bool pw = regime == grenander::BandwidthRule::Regime::pointwise;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", exponent);
    throw UsageError(std::string("bandwidth exponent ") + buf + " is outside " + (pw ? "(0, 1/3)" : "(1/6, 1/5)"));
  }
}

double alpha_from_level(double level)
{
  if (!(level > 0.0 && level < 1.0))
    throw UsageError("--level must lie in (0, 1)");
  return 1.0 - level;
}

grenander::AnalyticDensity require_density(const std::string& name)
{
  try {
    return grenander::density_by_name(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

grenander::LimitConstants load_limits(Run& run, const std::string& path)
{
  if (path.empty())
    throw UsageError("this experiment needs --limits FILE (output of 'grenander limits')");
  const auto text = run.input(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw io::DataError("'" + path + "': " + e.what());
  }
  return io::limit_constants_from_json(j);
}

std::string csv_table(const std::string& header, std::size_t rows, const std::function<std::string(std::size_t)>& row)
{
  std::string out = header + "\n";
  for (std::size_t i = 0; i < rows; ++i)
    out += row(i) + "\n";
  return out;
}

// --- subcommands -------------------------------------------------------------

struct GenArgs
{
  std::string density = "triangular";
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  std::string out;
};

void run_gen(const GenArgs& a, unsigned threads)
{
  Run run("gen", threads);
  const auto g = require_density(a.density);
  if (a.n < 1)
    throw UsageError("--n must be positive");
  run.params = { { "density", a.density }, { "n", a.n } };
  run.seed = a.seed;
  grenander::RngStream rng(a.seed);
  const auto sample = grenander::sample_from_analytic(g, a.n, rng);
  std::ostringstream ss;
  io::write_observations(ss, sample);
  run.write(a.out, ss.str());
  run.finish(a.out + ".manifest.json");
}

struct FitArgs
{
  std::string data;
  std::string out;
  bool rescale = false;
  std::size_t smooth_grid = 0;
  std::string kernel = "biweight";
  double alpha = 0.18;
  double scale = 1.0;
};

void run_fit(const FitArgs& a, unsigned threads)
{
  Run run("fit", threads);
  run.params = { { "data", a.data }, { "rescale", a.rescale }, { "smooth_grid", a.smooth_grid } };
  const auto sample = load_sample(run, a.data, a.rescale);
  const auto fit = grenander::grenander_fit(sample);

  std::ostringstream csv;
  io::write_step_density_csv(csv, fit);
  run.write(a.out + ".csv", csv.str());

  json summary = { { "n", sample.size() },
                   { "steps", fit.steps() },
                   { "mass", fit.mass() },
                   { "max_height", fit.heights().front() },
                   { "min_height", fit.heights().back() } };

  if (a.smooth_grid > 0) {
    if (a.smooth_grid < 2)
      throw UsageError("--smooth-grid needs at least 2 points");
    const auto kernel = require_kernel(a.kernel);
    require_level(kernel, grenander::KernelLevel::B4);
    const auto regime = a.alpha > 1.0 / 6.0 && a.alpha < 0.2 ? grenander::BandwidthRule::Regime::l1
                                                               : grenander::BandwidthRule::Regime::pointwise;
    require_regime(regime, a.alpha);
    run.params["kernel"] = a.kernel;
    run.params["alpha"] = a.alpha;
    run.params["scale"] = a.scale;
    const grenander::SmoothedDensity sd(sample, kernel, grenander::BandwidthRule{ a.alpha, a.scale, regime });
    const bool second = kernel.satisfies(grenander::KernelLevel::B6);
    std::string out = second ? "t,value,deriv1,deriv2\n" : "t,value,deriv1\n";
    for (std::size_t i = 0; i < a.smooth_grid; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(a.smooth_grid - 1);
      out += io::fmt(t) + ',' + io::fmt(sd(t)) + ',' + io::fmt(sd.derivative(t));
      if (second)
        out += ',' + io::fmt(sd.second_derivative(t));
      out += '\n';
    }
    run.write(a.out + ".smooth.csv", out);
    summary["bandwidth"] = sd.h();
    summary["normalizer"] = sd.normalizer();
  }
  run.write_json(a.out + ".json", summary);
  run.finish(a.out + ".manifest.json");
}

struct CiArgs
{
  std::string data;
  std::string out;
  bool rescale = false;
  double t0 = 0.5;
  double level = 0.90;
  std::size_t boot = 500;
  double alpha = 0.30;
  double scale = 1.0;
  std::string kernel = "epanechnikov";
  std::uint64_t seed = 1;
};

void run_ci(const CiArgs& a, unsigned threads)
{
  Run run("ci", threads);
  const auto kernel = require_kernel(a.kernel);
  require_level(kernel, grenander::KernelLevel::B4);
  require_regime(grenander::BandwidthRule::Regime::pointwise, a.alpha);
  if (!(a.t0 > 0.0 && a.t0 < 1.0))
    throw UsageError("--t0 must lie in (0, 1)");
  if (a.boot < 20)
    throw UsageError("--boot must be at least 20");
  run.params = { { "data", a.data }, { "rescale", a.rescale }, { "t0", a.t0 },       { "level", a.level },
                 { "boot", a.boot }, { "alpha", a.alpha },     { "scale", a.scale }, { "kernel", a.kernel } };
  run.seed = a.seed;
  const auto sample = load_sample(run, a.data, a.rescale);

  grenander::PointwiseCIOptions opt;
  opt.t0 = a.t0;
  opt.alpha_level = alpha_from_level(a.level);
  opt.replicates = a.boot;
  opt.rule = grenander::BandwidthRule::pointwise(a.alpha, a.scale);
  opt.threads = threads;
  const auto ci = grenander::smoothed_pointwise_ci(sample, kernel, opt, grenander::RngStream(a.seed));

  auto j = io::to_json(ci);
  j["kernel"] = a.kernel;
  run.write_json(a.out + ".json", j);
  run.write(a.out + ".csv", csv_table("replicate,deviation", ci.deviations.size(), [&](std::size_t b) {
              return std::to_string(b) + ',' + io::fmt(ci.deviations[b]);
            }));
  run.finish(a.out + ".manifest.json");
}

struct BandArgs
{
  std::string data;
  std::string out;
  bool rescale = false;
  double level = 0.95;
  std::size_t boot = 300;
  std::size_t m = 0;
  double alpha = 0.18;
  double scale = 1.0;
  std::string kernel = "biweight";
  std::uint64_t seed = 1;
};

void run_band(const BandArgs& a, unsigned threads)
{
  Run run("band", threads);
  const auto kernel = require_kernel(a.kernel);
  require_level(kernel, grenander::KernelLevel::B6);
  require_regime(grenander::BandwidthRule::Regime::l1, a.alpha);
  if (a.boot < 50)
    throw UsageError("--boot must be at least 50");
  run.params = { { "data", a.data }, { "rescale", a.rescale }, { "level", a.level }, { "boot", a.boot },
                 { "alpha", a.alpha }, { "scale", a.scale },   { "kernel", a.kernel } };
  run.seed = a.seed;
  const auto sample = load_sample(run, a.data, a.rescale);
  const std::size_t n = sample.size();
  const std::size_t m = a.m == 0 ? grenander::default_supersample_size(n) : a.m;
  if (m <= n)
    throw UsageError("--m = " + std::to_string(m) + " must exceed n = " + std::to_string(n));
  if (m < 10 * n)
    throw UsageError("--m = " + std::to_string(m) + " must be at least 10 n = " + std::to_string(10 * n));
  run.params["m"] = m;

  grenander::L1BandOptions opt;
  opt.alpha_level = alpha_from_level(a.level);
  opt.replicates = a.boot;
  opt.supersample = m;
  opt.rule = grenander::BandwidthRule::l1(a.alpha, a.scale);
  opt.threads = threads;
  const auto band = grenander::l1_band(sample, kernel, opt, grenander::RngStream(a.seed));

  if (band.empty)
    std::cerr << "warning: negative band radius; the band is empty\n";
  auto j = io::to_json(band);
  j["kernel"] = a.kernel;
  run.write_json(a.out + ".json", j);
  run.write(a.out + ".csv", csv_table("replicate,standardized", band.standardized.size(), [&](std::size_t b) {
              return std::to_string(b) + ',' + io::fmt(band.standardized[b]);
            }));
  std::ostringstream center;
  io::write_step_density_csv(center, band.center);
  run.write(a.out + ".center.csv", center.str());
  run.finish(a.out + ".manifest.json");
}

struct LimitsArgs
{
  grenander::LimitConfig cfg;
  std::string out;
  bool check_scaling = false;
  bool dump_draws = false;
  std::uint64_t seed = 1;
};

void run_limits(const LimitsArgs& a, unsigned threads)
{
  Run run("limits", threads);
  auto cfg = a.cfg;
  cfg.threads = threads;
  run.params = io::to_json(cfg);
  run.params["check_scaling"] = a.check_scaling;
  run.params["dump_draws"] = a.dump_draws;
  run.seed = a.seed;
  const grenander::RngStream rng(a.seed);
  const auto k = grenander::estimate_constants(cfg, rng.substream(0));
  auto j = io::to_json(k);

  if (a.check_scaling) {
    grenander::ChernoffSampleConfig sc{ .step = cfg.step, .half_width = cfg.window, .replicates = cfg.replicates,
                                        .threads = threads };
    const auto s = grenander::chernoff_scaling_sample(sc, rng.substream(1));
    std::vector<double> rescaled(s.doubled);
    for (auto& v : rescaled)
      v /= std::cbrt(2.0);
    const double ks = grenander::stats::ks_two_sample(rescaled, s.single);
    const double crit = grenander::stats::ks_two_sample_critical_1pct(rescaled.size(), s.single.size());
    j["scaling"] = { { "variance_ratio", s.variance_ratio() },
                     { "target_ratio", std::cbrt(4.0) },
                     { "single_var", grenander::stats::variance(s.single) },
                     { "doubled_var", grenander::stats::variance(s.doubled) },
                     { "ks_statistic", ks },
                     { "ks_critical_1pct", crit },
                     { "ks_pass", ks <= crit },
                     { "boundary_hits", s.boundary_hits },
                     { "replicates", cfg.replicates } };
  }
  run.write_json(a.out + ".json", j);
  run.write(a.out + ".csv", csv_table("lag,covariance,covariance_se", k.lags.size(), [&](std::size_t i) {
              return io::fmt(k.lags[i]) + ',' + io::fmt(k.lag_covariance[i]) + ',' + io::fmt(k.lag_covariance_se[i]);
            }));
  if (a.dump_draws)
    run.write(a.out + ".draws.csv", csv_table("replicate,xi0", k.chernoff_draws.size(), [&](std::size_t i) {
                return std::to_string(i) + ',' + io::fmt(k.chernoff_draws[i]);
              }));
  run.finish(a.out + ".manifest.json");
}

struct ExperimentArgs
{
  std::string name;
  std::string out;
  std::string truth = "triangular";
  std::string limits;
  std::string target = "pointwise";
  std::optional<std::size_t> n;
  std::optional<std::size_t> reps;
  std::optional<std::size_t> boot;
  std::optional<double> level;
  std::optional<double> alpha;
  std::optional<std::string> kernel;
  std::size_t m = 0;
  double t0 = 0.5;
  std::vector<std::size_t> sizes{ 1000, 3162, 10000, 31623 };
  std::size_t grid = 1001;
  std::uint64_t seed = 1;
};

void run_experiment(const ExperimentArgs& a, unsigned threads)
{
  Run run("experiment", threads);
  const auto truth = require_density(a.truth);
  if (!(a.t0 > 0.0 && a.t0 < 1.0))
    throw UsageError("--t0 must lie in (0, 1)");
  run.seed = a.seed;
  run.params = { { "name", a.name }, { "truth", a.truth } };
  const grenander::RngStream rng(a.seed);
  json summary;
  std::string table;

  if (a.name == "coverage") {
    gx::CoverageConfig cfg;
    if (a.target == "pointwise")
      cfg.target = gx::CoverageTarget::pointwise;
    else if (a.target == "band")
      cfg.target = gx::CoverageTarget::band;
    else
      throw UsageError("--target must be 'pointwise' or 'band'");
    const bool band = cfg.target == gx::CoverageTarget::band;
    cfg.n = a.n.value_or(band ? 1000 : 500);
    cfg.data_replicates = a.reps.value_or(band ? 100 : 200);
    cfg.bootstrap_replicates = a.boot.value_or(band ? 300 : 200);
    cfg.level = a.level.value_or(band ? 0.95 : 0.90);
    cfg.exponent = a.alpha.value_or(band ? 0.18 : 0.30);
    cfg.t0 = a.t0;
    cfg.supersample = a.m;
    cfg.threads = threads;
    const auto kernel = require_kernel(a.kernel.value_or(band ? "biweight" : "epanechnikov"));
    alpha_from_level(cfg.level);
    require_level(kernel, band ? grenander::KernelLevel::B6 : grenander::KernelLevel::B4);
    require_regime(band ? grenander::BandwidthRule::Regime::l1 : grenander::BandwidthRule::Regime::pointwise,
                   cfg.exponent);
    if (cfg.bootstrap_replicates < (band ? 50u : 20u))
      throw UsageError(band ? "--boot must be at least 50" : "--boot must be at least 20");
    if (band && cfg.supersample != 0 && cfg.supersample < 10 * cfg.n)
      throw UsageError("--m must be at least 10 n");
    run.params.update({ { "target", a.target },
                        { "n", cfg.n },
                        { "reps", cfg.data_replicates },
                        { "boot", cfg.bootstrap_replicates },
                        { "level", cfg.level },
                        { "alpha", cfg.exponent },
                        { "kernel", kernel.name() },
                        { "t0", cfg.t0 },
                        { "m", cfg.supersample } });
    const auto r = gx::run_coverage(truth, kernel, cfg, rng);
    summary = { { "coverage", r.coverage },
                { "standard_error", r.standard_error },
                { "nominal", cfg.level },
                { "data_replicates", cfg.data_replicates },
                { "pooled_replicate_mean", r.pooled_replicate_mean },
                { "pooled_count", r.pooled_count },
                { "empty_bands", r.empty_bands } };
    table = csv_table("replicate,lower,upper,center,distance,replicate_mean,covered", r.rows.size(), [&](std::size_t i) {
      const auto& row = r.rows[i];
      return std::to_string(row.replicate) + ',' + io::fmt(row.lower) + ',' + io::fmt(row.upper) + ',' +
             io::fmt(row.center) + ',' + io::fmt(row.distance) + ',' + io::fmt(row.replicate_mean) + ',' +
             (row.covered ? "1" : "0");
    });
  } else if (a.name == "inconsistency") {
    gx::InconsistencyConfig cfg;
    cfg.n = a.n.value_or(2000);
    cfg.replicates = a.reps.value_or(2000);
    cfg.t0 = a.t0;
    cfg.threads = threads;
    if (cfg.replicates < 10)
      throw UsageError("--reps must be at least 10");
    run.params.update({ { "n", cfg.n }, { "reps", cfg.replicates }, { "t0", cfg.t0 }, { "limits", a.limits } });
    const auto limits = load_limits(run, a.limits);
    const auto r = gx::run_inconsistency(truth, limits, cfg, rng);
    summary = { { "ratio", r.ratio },
                { "ratio_se", r.ratio_se },
                { "ratio_ci_low", r.ratio_ci_low },
                { "ratio_ci_high", r.ratio_ci_high },
                { "target_ratio", std::cbrt(4.0) },
                { "sampling_ratio", r.sampling_ratio },
                { "correlation", r.correlation },
                { "rate_constant", r.rate_constant },
                { "chernoff_var", r.chernoff_var },
                { "var_total", r.var_total },
                { "var_sampling", r.var_sampling },
                { "var_bootstrap", r.var_bootstrap } };
    table = csv_table("replicate,sampling,bootstrap,total", r.rows.size(), [&](std::size_t i) {
      const auto& row = r.rows[i];
      return std::to_string(row.replicate) + ',' + io::fmt(row.sampling) + ',' + io::fmt(row.bootstrap) + ',' +
             io::fmt(row.total);
    });
  } else if (a.name == "rate") {
    gx::RateConfig cfg;
    cfg.sizes = a.sizes;
    cfg.replicates = a.reps.value_or(50);
    cfg.rule = grenander::BandwidthRule::l1(a.alpha.value_or(0.18));
    cfg.grid_size = a.grid;
    cfg.t0 = a.t0;
    cfg.threads = threads;
    const auto kernel = require_kernel(a.kernel.value_or("biweight"));
    require_level(kernel, grenander::KernelLevel::B4);
    require_regime(grenander::BandwidthRule::Regime::l1, cfg.rule.exponent);
    if (cfg.sizes.size() < 2)
      throw UsageError("--sizes needs at least two sample sizes");
    if (cfg.grid_size < 3)
      throw UsageError("--grid must be at least 3");
    if (cfg.replicates < 1)
      throw UsageError("--reps must be positive");
    run.params.update({ { "sizes", cfg.sizes },
                        { "reps", cfg.replicates },
                        { "alpha", cfg.rule.exponent },
                        { "kernel", kernel.name() },
                        { "grid", cfg.grid_size },
                        { "t0", cfg.t0 } });
    const auto r = gx::run_rate(truth, kernel, cfg, rng);
    summary = { { "sup_slope", r.sup_slope },
                { "derivative_slope", r.derivative_slope },
                { "grenander_slope", r.grenander_slope },
                { "scaled_sup_decreasing", r.scaled_sup_decreasing } };
    table = csv_table("n,bandwidth,median_sup_error,median_derivative_error,median_scaled_sup_error,median_grenander_error",
                      r.rows.size(), [&](std::size_t i) {
                        const auto& row = r.rows[i];
                        return std::to_string(row.n) + ',' + io::fmt(row.bandwidth) + ',' + io::fmt(row.median_sup_error) +
                               ',' + io::fmt(row.median_derivative_error) + ',' +
                               io::fmt(row.median_scaled_sup_error) + ',' + io::fmt(row.median_grenander_error);
                      });
  } else if (a.name == "l1clt") {
    gx::L1CltConfig cfg;
    cfg.n = a.n.value_or(2000);
    cfg.replicates = a.reps.value_or(500);
    cfg.threads = threads;
    if (cfg.replicates < 2)
      throw UsageError("--reps must be at least 2");
    run.params.update({ { "n", cfg.n }, { "reps", cfg.replicates }, { "limits", a.limits } });
    const auto limits = load_limits(run, a.limits);
    const auto r = gx::run_l1clt(truth, limits, cfg, rng);
    summary = { { "mu", r.mu },
                { "sigma2_reference", r.sigma2_reference },
                { "mean", r.mean },
                { "variance", r.variance },
                { "variance_ratio", r.variance_ratio },
                { "mean_z", r.mean_z } };
    table = csv_table("replicate,standardized", r.standardized.size(), [&](std::size_t i) {
      return std::to_string(i) + ',' + io::fmt(r.standardized[i]);
    });
  } else {
    throw UsageError("unknown experiment '" + a.name + "' (expected coverage, inconsistency, rate or l1clt)");
  }

  summary["experiment"] = a.name;
  run.write_json(a.out + ".json", summary);
  run.write(a.out + ".csv", table);
  run.finish(a.out + ".manifest.json");
}

unsigned env_threads()
{
  return grenander::default_thread_count();
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{ "Monotone density estimation, smoothed bootstrap inference and limit-distribution simulation" };
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", GRENANDER_VERSION);
  unsigned threads = env_threads();
  app.add_option("--threads", threads, "Worker threads (default: GRENANDER_THREADS or hardware concurrency)")
    ->check(CLI::PositiveNumber);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Draw a sample from a named density");
  gen_cmd->add_option("--density", gen.density, "uniform, triangular, trunc-exp or trunc-exp:<rate>")
    ->capture_default_str();
  gen_cmd->add_option("--n", gen.n, "Sample size")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Master seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output data file")->required();

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Grenander fit; optionally the smoothed estimate on a grid");
  fit_cmd->add_option("--data", fit.data, "Observation file")->required();
  fit_cmd->add_option("--out", fit.out, "Output prefix")->required();
  fit_cmd->add_flag("--rescale", fit.rescale, "Map [min, max] of the data onto [0, 1]");
  fit_cmd->add_option("--smooth-grid", fit.smooth_grid, "Write PREFIX.smooth.csv on this many grid points");
  fit_cmd->add_option("--kernel", fit.kernel, "Kernel for --smooth-grid")->capture_default_str();
  fit_cmd->add_option("--alpha", fit.alpha, "Bandwidth exponent for --smooth-grid")->capture_default_str();
  fit_cmd->add_option("--scale", fit.scale, "Bandwidth scale for --smooth-grid")->capture_default_str();

  CiArgs ci;
  auto* ci_cmd = app.add_subcommand("ci", "Smoothed-bootstrap pointwise confidence interval");
  ci_cmd->add_option("--data", ci.data, "Observation file")->required();
  ci_cmd->add_option("--out", ci.out, "Output prefix")->required();
  ci_cmd->add_flag("--rescale", ci.rescale, "Map [min, max] of the data onto [0, 1]");
  ci_cmd->add_option("--t0", ci.t0, "Evaluation point in (0, 1)")->capture_default_str();
  ci_cmd->add_option("--level", ci.level, "Nominal coverage")->capture_default_str();
  ci_cmd->add_option("--boot", ci.boot, "Bootstrap replicates")->capture_default_str();
  ci_cmd->add_option("--alpha", ci.alpha, "Bandwidth exponent in (0, 1/3)")->capture_default_str();
  ci_cmd->add_option("--scale", ci.scale, "Bandwidth scale")->capture_default_str();
  ci_cmd->add_option("--kernel", ci.kernel, "epanechnikov or biweight")->capture_default_str();
  ci_cmd->add_option("--seed", ci.seed, "Master seed")->capture_default_str();

  BandArgs band;
  auto* band_cmd = app.add_subcommand("band", "Supersample smoothed-bootstrap L1 confidence band");
  band_cmd->add_option("--data", band.data, "Observation file")->required();
  band_cmd->add_option("--out", band.out, "Output prefix")->required();
  band_cmd->add_flag("--rescale", band.rescale, "Map [min, max] of the data onto [0, 1]");
  band_cmd->add_option("--level", band.level, "Nominal coverage")->capture_default_str();
  band_cmd->add_option("--boot", band.boot, "Bootstrap replicates")->capture_default_str();
  band_cmd->add_option("--m", band.m, "Supersample size (default max(10 n, min(n^1.5, 200000)))");
  band_cmd->add_option("--alpha", band.alpha, "Bandwidth exponent in (1/6, 1/5)")->capture_default_str();
  band_cmd->add_option("--scale", band.scale, "Bandwidth scale")->capture_default_str();
  band_cmd->add_option("--kernel", band.kernel, "Kernel; must satisfy B6")->capture_default_str();
  band_cmd->add_option("--seed", band.seed, "Master seed")->capture_default_str();

  LimitsArgs lim;
  auto* lim_cmd = app.add_subcommand("limits", "Monte Carlo constants of the Chernoff and xi limits");
  lim_cmd->add_option("--out", lim.out, "Output prefix")->required();
  lim_cmd->add_option("--step", lim.cfg.step, "Path grid step")->capture_default_str();
  lim_cmd->add_option("--window", lim.cfg.window, "Argmax window half-width")->capture_default_str();
  lim_cmd->add_option("--replicates", lim.cfg.replicates, "Number of paths")->capture_default_str();
  lim_cmd->add_option("--lag-max", lim.cfg.lag_max, "Largest covariance lag")->capture_default_str();
  lim_cmd->add_option("--lag-step", lim.cfg.lag_step, "Lag spacing")->capture_default_str();
  lim_cmd->add_option("--batches", lim.cfg.batches, "Batches for standard errors")->capture_default_str();
  lim_cmd->add_flag("--check-scaling", lim.check_scaling, "Also compare doubled and single argmax draws");
  lim_cmd->add_flag("--dump-draws", lim.dump_draws, "Write PREFIX.draws.csv with the xi(0) draws");
  lim_cmd->add_option("--seed", lim.seed, "Master seed")->capture_default_str();

  ExperimentArgs exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Simulation studies");
  exp_cmd->add_option("--name", exp.name, "coverage, inconsistency, rate or l1clt")->required();
  exp_cmd->add_option("--out", exp.out, "Output prefix")->required();
  exp_cmd->add_option("--truth", exp.truth, "True density")->capture_default_str();
  exp_cmd->add_option("--limits", exp.limits, "Limit constants JSON from 'limits'");
  exp_cmd->add_option("--target", exp.target, "coverage: pointwise or band")->capture_default_str();
  exp_cmd->add_option("--n", exp.n, "Sample size");
  exp_cmd->add_option("--reps", exp.reps, "Data replicates");
  exp_cmd->add_option("--boot", exp.boot, "Bootstrap replicates");
  exp_cmd->add_option("--level", exp.level, "Nominal coverage");
  exp_cmd->add_option("--alpha", exp.alpha, "Bandwidth exponent");
  exp_cmd->add_option("--kernel", exp.kernel, "Kernel name");
  exp_cmd->add_option("--m", exp.m, "Supersample size for band coverage (0: default)");
  exp_cmd->add_option("--t0", exp.t0, "Evaluation point")->capture_default_str();
  exp_cmd->add_option("--sizes", exp.sizes, "rate: sample-size grid")->delimiter(',');
  exp_cmd->add_option("--grid", exp.grid, "rate: sup-norm grid size")->capture_default_str();
  exp_cmd->add_option("--seed", exp.seed, "Master seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*gen_cmd)
      run_gen(gen, threads);
    else if (*fit_cmd)
      run_fit(fit, threads);
    else if (*ci_cmd)
      run_ci(ci, threads);
    else if (*band_cmd)
      run_band(band, threads);
    else if (*lim_cmd)
      run_limits(lim, threads);
    else if (*exp_cmd)
      run_experiment(exp, threads);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
