#pragma once

// Text formats: observation files, step-density CSV, and JSON records for
// limit constants and inference results. Needs nlohmann/json.

#include "bootstrap.hpp"
#include "limit_lab.hpp"
#include "sample.hpp"
#include "step_density.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace grenander::io {

//! Raised for malformed input files; the message names the offending line.
class DataError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! 17 significant digits.
inline std::string fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string_view trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(std::string_view text, std::size_t line)
{
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end)
    throw DataError("line " + std::to_string(line) + ": cannot parse '" + std::string(text) + "' as a number");
  return v;
}

struct ReadOptions
{
  //! Affinely map [min, max] of the data onto [0, 1] instead of rejecting
  //! values outside [0, 1].
  bool rescale = false;
};

//! One decimal observation per line; blank lines and lines starting with '#'
//! are skipped. Values must lie in [0, 1] unless rescaling is requested.
inline Sample read_observations(std::istream& in, ReadOptions opt = {})
{
  std::vector<double> values;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#')
      continue;
    const double v = parse_double(t, number);
    if (!std::isfinite(v))
      throw DataError("line " + std::to_string(number) + ": non-finite value");
    if (!opt.rescale && !(v >= 0.0 && v <= 1.0))
      throw DataError("line " + std::to_string(number) + ": value " + fmt(v) + " is outside [0, 1]");
    values.push_back(v);
  }
  if (values.empty())
    throw DataError("no observations in input");
  if (opt.rescale) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double a = *lo;
    const double w = *hi - *lo;
    if (!(w > 0.0))
      throw DataError("cannot rescale: all observations are equal");
    for (auto& v : values)
      v = std::clamp((v - a) / w, 0.0, 1.0);
  }
  return Sample(std::move(values));
}

inline void write_observations(std::ostream& out, const Sample& sample)
{
  for (double v : sample.values())
    out << fmt(v) << '\n';
}

//! Rows (t_j, f_j): right end of each step and the height on (t_{j-1}, t_j].
inline void write_step_density_csv(std::ostream& out, const StepDensity& d)
{
  out << "breakpoint,height\n";
  for (std::size_t j = 0; j < d.steps(); ++j)
    out << fmt(d.breakpoints()[j + 1]) << ',' << fmt(d.heights()[j]) << '\n';
}

inline StepDensity read_step_density_csv(std::istream& in)
{
  std::string line;
  std::size_t number = 0;
  std::vector<double> breaks{ 0.0 };
  std::vector<double> heights;
  while (std::getline(in, line)) {
    ++number;
    const auto t = trim(line);
    if (t.empty() || (number == 1 && t == "breakpoint,height"))
      continue;
    const auto comma = t.find(',');
    if (comma == std::string_view::npos)
      throw DataError("line " + std::to_string(number) + ": expected 'breakpoint,height'");
    breaks.push_back(parse_double(trim(t.substr(0, comma)), number));
    heights.push_back(parse_double(trim(t.substr(comma + 1)), number));
  }
  return StepDensity(std::move(breaks), std::move(heights));
}

// --- JSON ----------------------------------------------------------------------

using nlohmann::json;

inline json to_json(const LimitConfig& c)
{
  return { { "step", c.step },         { "window", c.window },   { "replicates", c.replicates },
           { "lag_max", c.lag_max },   { "lag_step", c.lag_step }, { "batches", c.batches },
           { "half_width", c.half_width() } };
}

inline json to_json(const LimitConstants& k)
{
  return { { "abs_xi_mean", k.abs_xi_mean },
           { "abs_xi_mean_se", k.abs_xi_mean_se },
           { "chernoff_var", k.chernoff_var },
           { "chernoff_var_se", k.chernoff_var_se },
           { "sigma2", k.sigma2 },
           { "sigma2_se", k.sigma2_se },
           { "boundary_hits", k.boundary_hits },
           { "config", to_json(k.config) },
           { "lags", k.lags },
           { "lag_covariance", k.lag_covariance },
           { "lag_covariance_se", k.lag_covariance_se } };
}

inline LimitConstants limit_constants_from_json(const json& j)
{
  LimitConstants k;
  try {
    k.abs_xi_mean = j.at("abs_xi_mean").get<double>();
    k.abs_xi_mean_se = j.at("abs_xi_mean_se").get<double>();
    k.chernoff_var = j.at("chernoff_var").get<double>();
    k.chernoff_var_se = j.at("chernoff_var_se").get<double>();
    k.sigma2 = j.at("sigma2").get<double>();
    k.sigma2_se = j.at("sigma2_se").get<double>();
    k.boundary_hits = j.value("boundary_hits", std::size_t{ 0 });
    if (j.contains("config")) {
      const auto& c = j.at("config");
      k.config.step = c.at("step").get<double>();
      k.config.window = c.at("window").get<double>();
      k.config.replicates = c.at("replicates").get<std::size_t>();
      k.config.lag_max = c.at("lag_max").get<double>();
      k.config.lag_step = c.at("lag_step").get<double>();
      k.config.batches = c.at("batches").get<std::size_t>();
    }
    k.lags = j.value("lags", std::vector<double>{});
    k.lag_covariance = j.value("lag_covariance", std::vector<double>{});
    k.lag_covariance_se = j.value("lag_covariance_se", std::vector<double>{});
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed limit constants: ") + e.what());
  }
  if (!(k.abs_xi_mean >= 0.0 && k.chernoff_var > 0.0 && k.sigma2 > 0.0))
    throw DataError("limit constants must be positive");
  return k;
}

//! Scalar summary; replicate deviations go to CSV.
inline json to_json(const PointwiseCIResult& r)
{
  return { { "t0", r.t0 },
           { "n", r.n },
           { "bandwidth", r.bandwidth },
           { "grenander_value", r.grenander_value },
           { "smoothed_value", r.smoothed_value },
           { "lower", r.lower },
           { "upper", r.upper },
           { "level", r.level },
           { "replicates", r.replicates } };
}

inline json to_json(const L1BandResult& r)
{
  return { { "n", r.n },
           { "bandwidth", r.bandwidth },
           { "level", r.level },
           { "mu_hat", r.mu_hat },
           { "m", r.m },
           { "c_hat", r.c_hat },
           { "radius", r.radius },
           { "empty", r.empty },
           { "center_steps", r.center.steps() },
           { "replicates", r.replicates } };
}

} // namespace grenander::io
