#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace grenander {

//! A density on [0, 1] given in closed form, with its first two derivatives,
//! CDF and (optionally) inverse CDF. Evaluates to 0 outside [0, 1].
class AnalyticDensity
{
public:
  using Fn = std::function<double(double)>;

  struct Properties
  {
    bool non_increasing = false;             // A1
    bool derivative_bounded_away = false;    // A2
    bool second_derivative_bounded = false;  // A3'
    bool piecewise_linear = false;
  };

  AnalyticDensity(std::string name,
                  Fn value,
                  Fn derivative,
                  Fn second_derivative,
                  Fn cdf,
                  std::optional<Fn> inverse_cdf,
                  Properties props)
    : name_(std::move(name))
    , value_(std::move(value))
    , derivative_(std::move(derivative))
    , second_(std::move(second_derivative))
    , cdf_(std::move(cdf))
    , inverse_cdf_(std::move(inverse_cdf))
    , props_(props)
  {
  }

  const std::string& name() const { return name_; }

  double operator()(double t) const { return (t < 0.0 || t > 1.0) ? 0.0 : value_(t); }
  double derivative(double t) const { return derivative_(t); }
  double second_derivative(double t) const { return second_(t); }
  double cdf(double t) const
  {
    if (t <= 0.0)
      return 0.0;
    if (t >= 1.0)
      return 1.0;
    return cdf_(t);
  }
  bool has_inverse_cdf() const { return inverse_cdf_.has_value(); }
  double inverse_cdf(double u) const
  {
    if (!inverse_cdf_)
      throw std::logic_error("density '" + name_ + "' has no inverse CDF");
    return (*inverse_cdf_)(u);
  }

  bool satisfies_A1() const { return props_.non_increasing; }
  bool satisfies_A2() const { return props_.derivative_bounded_away; }
  //! Continuity of the derivative at t0; all densities built here are C^2.
  bool satisfies_A3_at(double t0) const { return t0 > 0.0 && t0 < 1.0; }
  bool satisfies_A3prime() const { return props_.second_derivative_bounded; }

  bool piecewise_linear() const { return props_.piecewise_linear; }
  std::vector<double> breakpoints() const { return { 0.0, 1.0 }; }

private:
  std::string name_;
  Fn value_;
  Fn derivative_;
  Fn second_;
  Fn cdf_;
  std::optional<Fn> inverse_cdf_;
  Properties props_;
};

inline AnalyticDensity uniform_density()
{
  return AnalyticDensity(
    "uniform",
    [](double) { return 1.0; },
    [](double) { return 0.0; },
    [](double) { return 0.0; },
    [](double t) { return t; },
    [](double u) { return u; },
    { .non_increasing = true, .derivative_bounded_away = false, .second_derivative_bounded = true, .piecewise_linear = true });
}

//! f(t) = 2(1 - t).
inline AnalyticDensity triangular_density()
{
  return AnalyticDensity(
    "triangular",
    [](double t) { return 2.0 * (1.0 - t); },
    [](double) { return -2.0; },
    [](double) { return 0.0; },
    [](double t) { return t * (2.0 - t); },
    [](double u) { return 1.0 - std::sqrt(1.0 - u); },
    { .non_increasing = true, .derivative_bounded_away = true, .second_derivative_bounded = true, .piecewise_linear = true });
}

//! f(t) = λ e^{-λt} / (1 - e^{-λ}) on [0, 1].
inline AnalyticDensity truncated_exponential_density(double rate)
{
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw std::invalid_argument("truncated exponential rate must be positive and finite");
  const double norm = -std::expm1(-rate);
  return AnalyticDensity(
    "trunc-exp",
    [=](double t) { return rate * std::exp(-rate * t) / norm; },
    [=](double t) { return -rate * rate * std::exp(-rate * t) / norm; },
    [=](double t) { return rate * rate * rate * std::exp(-rate * t) / norm; },
    [=](double t) { return -std::expm1(-rate * t) / norm; },
    [=](double u) { return -std::log1p(-u * norm) / rate; },
    { .non_increasing = true, .derivative_bounded_away = true, .second_derivative_bounded = true, .piecewise_linear = false });
}

//! Looks up "uniform", "triangular", "trunc-exp" (rate 1) or "trunc-exp:<rate>".
inline AnalyticDensity density_by_name(const std::string& name)
{
  if (name == "uniform")
    return uniform_density();
  if (name == "triangular")
    return triangular_density();
  if (name == "trunc-exp")
    return truncated_exponential_density(1.0);
  const std::string prefix = "trunc-exp:";
  if (name.rfind(prefix, 0) == 0) {
    std::size_t used = 0;
    const std::string rate = name.substr(prefix.size());
    double r = 0.0;
    try {
      r = std::stod(rate, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != rate.size())
      throw std::invalid_argument("bad truncated exponential rate in '" + name + "'");
    return truncated_exponential_density(r);
  }
  throw std::invalid_argument("unknown density '" + name + "' (expected uniform, triangular, trunc-exp[:rate])");
}

} // namespace grenander
