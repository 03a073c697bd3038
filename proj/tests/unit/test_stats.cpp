#include <grenander/bootstrap.hpp>
#include <grenander/parallel.hpp>
#include <grenander/stats.hpp>

#include <catch_amalgamated.hpp>

#include <atomic>
#include <cmath>
#include <numeric>

using namespace grenander;

TEST_CASE("moments", "[stats]")
{
  const std::vector<double> v{ 1, 2, 3, 4, 5 };
  REQUIRE(stats::mean(v) == 3.0);
  REQUIRE(stats::variance(v) == 2.5);
  REQUIRE(stats::stddev(v) == Catch::Approx(std::sqrt(2.5)));
  REQUIRE(stats::median(v) == 3.0);
  REQUIRE(stats::median({ 4, 1, 3, 2 }) == 2.5);
}

TEST_CASE("covariance, correlation and regression slope", "[stats]")
{
  const std::vector<double> x{ 1, 2, 3, 4 };
  const std::vector<double> y{ 3, 5, 7, 9 };
  REQUIRE(stats::covariance(x, y) == Catch::Approx(2.0 * stats::variance(x)));
  REQUIRE(stats::correlation(x, y) == Catch::Approx(1.0));
  REQUIRE(stats::regression_slope(x, y) == Catch::Approx(2.0));
  const std::vector<double> z{ 9, 7, 5, 3 };
  REQUIRE(stats::correlation(x, z) == Catch::Approx(-1.0));
}

TEST_CASE("KS statistics", "[stats]")
{
  // one point at 0.5 against the uniform CDF: D = 0.5
  REQUIRE(stats::ks_statistic({ 0.5 }, [](double t) { return t; }) == 0.5);
  REQUIRE(stats::ks_statistic({ 0.25, 0.75 }, [](double t) { return t; }) == 0.25);
  REQUIRE(stats::ks_two_sample({ 1, 2, 3 }, { 1, 2, 3 }) == 0.0);
  REQUIRE(stats::ks_two_sample({ 1, 2 }, { 3, 4 }) == 1.0);
  REQUIRE(stats::ks_critical_1pct(100) == Catch::Approx(1.6276 / (10.0 + 0.12 + 0.011)).epsilon(1e-4));
  REQUIRE(stats::ks_two_sample_critical_1pct(100, 100) == Catch::Approx(1.6276 * std::sqrt(0.02)).epsilon(1e-4));
}

TEST_CASE("batch standard error of the mean", "[stats]")
{
  RngStream rng(1);
  std::vector<double> v(20000);
  for (auto& x : v)
    x = rng.normal();
  const double se = stats::batch_standard_error(v, 20, [](auto s) { return stats::mean(s); });
  REQUIRE(se == Catch::Approx(1.0 / std::sqrt(20000.0)).epsilon(0.4));
  REQUIRE_THROWS(stats::batch_standard_error(v, 1, [](auto s) { return stats::mean(s); }));
}

TEST_CASE("variance standard error", "[stats]")
{
  RngStream rng(2);
  std::vector<double> v(10000);
  for (auto& x : v)
    x = rng.normal();
  // Var(s^2) ≈ 2 σ^4 / (n - 1) for normal data
  REQUIRE(stats::variance_standard_error(v) == Catch::Approx(std::sqrt(2.0 / 9999.0)).epsilon(0.1));
}

TEST_CASE("empirical quantile order-statistic convention", "[stats]")
{
  std::vector<double> v(100);
  std::iota(v.begin(), v.end(), 1.0);
  std::reverse(v.begin(), v.end());
  REQUIRE(empirical_quantile(v, 0.95) == 95.0);
  REQUIRE(empirical_quantile(v, 0.01) == 1.0);
  REQUIRE(empirical_quantile(v, 0.005) == 1.0);
  REQUIRE(empirical_quantile(v, 0.999) == 100.0);
  const std::vector<double> c(17, 2.5);
  for (double p : { 0.01, 0.5, 0.99 })
    REQUIRE(empirical_quantile(c, p) == 2.5);
  REQUIRE_THROWS(empirical_quantile({}, 0.5));
  REQUIRE_THROWS(empirical_quantile(c, 1.0));
}

TEST_CASE("parallel_for visits every index once", "[parallel]")
{
  for (unsigned threads : { 1u, 2u, 7u }) {
    std::vector<int> hit(1001, 0);
    parallel_for(hit.size(), threads, [&](std::size_t i) { hit[i] += 1; });
    REQUIRE(std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; }));
  }
  std::atomic<int> calls{ 0 };
  parallel_for(0, 4, [&](std::size_t) { ++calls; });
  REQUIRE(calls == 0);
}

TEST_CASE("parallel_for propagates exceptions", "[parallel]")
{
  REQUIRE_THROWS_AS(parallel_for(100, 3,
                                 [](std::size_t i) {
                                   if (i == 57)
                                     throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
}
