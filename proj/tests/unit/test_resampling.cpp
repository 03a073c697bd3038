#include <grenander/analytic_density.hpp>
#include <grenander/resampling.hpp>
#include <grenander/stats.hpp>

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>

using namespace grenander;

TEST_CASE("inverse CDFs", "[analytic]")
{
  const auto tri = triangular_density();
  REQUIRE(tri.inverse_cdf(0.0) == 0.0);
  REQUIRE(tri.inverse_cdf(1.0) == 1.0);
  for (double u : { 0.1, 0.5, 0.9 })
    REQUIRE(tri.cdf(tri.inverse_cdf(u)) == Catch::Approx(u).epsilon(1e-14));
  const auto uni = uniform_density();
  REQUIRE(uni.inverse_cdf(0.37) == 0.37);
  const auto ex = density_by_name("trunc-exp:3");
  for (double u : { 0.01, 0.5, 0.99 })
    REQUIRE(ex.cdf(ex.inverse_cdf(u)) == Catch::Approx(u).epsilon(1e-13));
  REQUIRE(ex.cdf(1.0) == Catch::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("density zoo lookup and assumption flags", "[analytic]")
{
  REQUIRE(density_by_name("uniform").name() == "uniform");
  REQUIRE(density_by_name("trunc-exp").name() == "trunc-exp");
  REQUIRE_THROWS_AS(density_by_name("gamma"), std::invalid_argument);
  REQUIRE_THROWS_AS(density_by_name("trunc-exp:abc"), std::invalid_argument);
  REQUIRE_THROWS_AS(density_by_name("trunc-exp:-1"), std::invalid_argument);
  const auto tri = triangular_density();
  REQUIRE(tri.satisfies_A1());
  REQUIRE(tri.satisfies_A2());
  REQUIRE(tri.satisfies_A3_at(0.5));
  REQUIRE_FALSE(tri.satisfies_A3_at(0.0));
  REQUIRE(tri.satisfies_A3prime());
  REQUIRE(tri(1.5) == 0.0);
  REQUIRE(tri(-0.5) == 0.0);
}

TEST_CASE("analytic samples pass a KS test", "[resampling][montecarlo]")
{
  for (const auto& g : { triangular_density(), uniform_density(), truncated_exponential_density(2.0) }) {
    const RngStream root(77);
    int pass = 0;
    for (std::uint64_t r = 0; r < 100; ++r) {
      auto rng = root.substream(r);
      const auto s = sample_from_analytic(g, 10000, rng);
      const std::vector<double> v(s.values().begin(), s.values().end());
      const double d = stats::ks_statistic(v, [&](double t) { return g.cdf(t); });
      pass += d < stats::ks_critical_1pct(v.size()) ? 1 : 0;
    }
    INFO(g.name());
    REQUIRE(pass >= 98);
  }
}

TEST_CASE("sampling is reproducible per stream identity", "[resampling]")
{
  RngStream a(5, { 1, 2 });
  RngStream b(5, { 1, 2 });
  const auto x = sample_from_analytic(triangular_density(), 1000, a);
  const auto y = sample_from_analytic(triangular_density(), 1000, b);
  REQUIRE(std::equal(x.values().begin(), x.values().end(), y.values().begin()));
}

TEST_CASE("multinomial bootstrap", "[resampling]")
{
  RngStream rng(1);
  const auto single = multinomial_bootstrap(Sample({ 0.3 }), rng);
  REQUIRE(single.size() == 1);
  REQUIRE(single[0] == 0.3);

  const Sample s({ 0.1, 0.2, 0.3, 0.4, 0.5 });
  const std::set<double> pool(s.values().begin(), s.values().end());
  for (int i = 0; i < 100; ++i) {
    const auto b = multinomial_bootstrap(s, rng);
    REQUIRE(b.size() == s.size());
    for (double x : b.values())
      REQUIRE(pool.count(x) == 1);
  }
}

TEST_CASE("bootstrap inclusion frequency matches the binomial oracle", "[resampling][montecarlo]")
{
  const std::size_t n = 50;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = (static_cast<double>(i) + 1.0) / 51.0;
  const Sample s(v);
  const RngStream root(3);
  std::vector<int> included(n, 0);
  const int reps = 10000;
  for (int r = 0; r < reps; ++r) {
    auto rng = root.substream(static_cast<std::uint64_t>(r));
    const auto b = multinomial_bootstrap(s, rng);
    std::set<double> seen(b.values().begin(), b.values().end());
    for (std::size_t i = 0; i < n; ++i)
      included[i] += seen.count(v[i]) ? 1 : 0;
  }
  const double expect = 1.0 - std::pow(1.0 - 1.0 / 50.0, 50.0);
  for (int c : included)
    REQUIRE(std::fabs(static_cast<double>(c) / reps - expect) < 0.02);
}

TEST_CASE("subsampling without replacement", "[resampling]")
{
  RngStream rng(2);
  const Sample s({ 0.15, 0.25, 0.35, 0.45 });
  const auto all = subsample_without_replacement(s, 4, rng);
  REQUIRE(std::equal(all.values().begin(), all.values().end(), s.values().begin()));
  REQUIRE_THROWS_AS(subsample_without_replacement(s, 0, rng), std::invalid_argument);
  REQUIRE_THROWS_AS(subsample_without_replacement(s, 5, rng), std::invalid_argument);

  const auto part = subsample_without_replacement(s, 3, rng);
  std::set<double> distinct(part.values().begin(), part.values().end());
  REQUIRE(distinct.size() == 3);
}

TEST_CASE("single-point subsample is uniform", "[resampling][montecarlo]")
{
  const std::size_t n = 8;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = (static_cast<double>(i) + 1.0) / 10.0;
  const Sample s(v);
  const RngStream root(6);
  std::vector<int> counts(n, 0);
  const int reps = 10000;
  for (int r = 0; r < reps; ++r) {
    auto rng = root.substream(static_cast<std::uint64_t>(r));
    const double x = subsample_without_replacement(s, 1, rng)[0];
    counts[static_cast<std::size_t>(std::lround(x * 10.0)) - 1]++;
  }
  const double p = 1.0 / n;
  const double band = 3.0 * std::sqrt(reps * p * (1.0 - p));
  for (int c : counts)
    REQUIRE(std::fabs(c - reps * p) <= band);
}

TEST_CASE("rejection acceptance rate follows the envelope slack", "[resampling]")
{
  RngStream rng(10);
  RejectionStats exact;
  rejection_sample([](double) { return 1.0; }, 1.0, 1000, rng, &exact);
  REQUIRE(exact.acceptance_rate() == 1.0);

  RejectionStats slack;
  rejection_sample([](double) { return 1.0; }, 2.0, 20000, rng, &slack);
  REQUIRE(slack.acceptance_rate() == Catch::Approx(0.5).margin(3.0 * std::sqrt(0.25 / slack.proposals)));
}

TEST_CASE("broken envelopes are detected", "[resampling]")
{
  RngStream rng(11);
  REQUIRE_THROWS_AS(rejection_sample([](double) { return 2.0; }, 1.0, 10, rng), EnvelopeError);
  REQUIRE_THROWS_AS(rejection_sample([](double t) { return t < 1e-6 ? 1.0 : 0.0; }, 1.0, 10, rng), EnvelopeError);
  REQUIRE_THROWS_AS(rejection_sample([](double) { return 1.0; }, 0.0, 10, rng), EnvelopeError);
}

TEST_CASE("envelope bound examples", "[resampling]")
{
  // a flat estimate: many evenly spread points with a wide kernel
  std::vector<double> v;
  for (int i = 0; i < 2000; ++i)
    v.push_back((i + 0.5) / 2000.0);
  const SmoothedDensity flat(Sample(v), biweight_kernel(), 0.1);
  double top = 0.0;
  for (int i = 0; i <= 1000; ++i)
    top = std::max(top, flat.positive_part(i / 1000.0));
  const double m = envelope_bound(flat);
  REQUIRE(m >= top);
  REQUIRE(m <= top + 0.01);

  const SmoothedDensity peak(Sample({ 0.5 }), epanechnikov_kernel(), 0.2);
  REQUIRE(envelope_bound(peak) >= 3.75);

  RngStream rng(12);
  const auto s = sample_from_analytic(triangular_density(), 200, rng);
  const SmoothedDensity sd(s, epanechnikov_kernel(), 0.15);
  const double bound = envelope_bound(sd);
  for (int i = 0; i < 100000; ++i)
    REQUIRE(sd.positive_part(rng.uniform()) <= bound);
}

TEST_CASE("envelope brackets contain the estimate and do not change the draws", "[resampling]")
{
  RngStream rng(14);
  for (const auto& kernel : { epanechnikov_kernel(), biweight_kernel() }) {
    const auto s = sample_from_analytic(truncated_exponential_density(3.0), 300, rng);
    const SmoothedDensity sd(s, kernel, 0.12);
    const Envelope env(sd, 256);
    for (int i = 0; i < 20000; ++i) {
      const double t = rng.uniform();
      const auto [lo, hi] = env.bracket(t);
      const double y = sd.positive_part(t);
      REQUIRE(lo <= y + 1e-12);
      REQUIRE(y <= hi + 1e-12);
      REQUIRE(hi <= env.bound());
    }
    RngStream a(15);
    RngStream b(15);
    const auto squeezed = rejection_sample(env, 2000, a);
    const auto plain = rejection_sample([&](double t) { return sd.positive_part(t); }, env.bound(), 2000, b);
    REQUIRE(std::ranges::equal(squeezed.values(), plain.values()));
  }
}

TEST_CASE("rejection draws follow the normalized estimate", "[resampling][montecarlo]")
{
  RngStream rng(13);
  const auto data = sample_from_analytic(triangular_density(), 500, rng);
  const SmoothedDensity sd(data, biweight_kernel(), 0.2);

  // CDF of the normalized estimate on a fine grid by the trapezoid rule
  const int cells = 100000;
  std::vector<double> cdf(cells + 1, 0.0);
  for (int i = 1; i <= cells; ++i)
    cdf[i] = cdf[i - 1] + 0.5 * (sd((i - 1.0) / cells) + sd(static_cast<double>(i) / cells)) / cells;
  auto F = [&](double t) {
    const double x = t * cells;
    const auto i = std::min(static_cast<int>(x), cells - 1);
    return cdf[i] + (cdf[i + 1] - cdf[i]) * (x - i);
  };
  REQUIRE(cdf.back() == Catch::Approx(1.0).margin(1e-6));

  const auto draws = rejection_sample(sd, 10000, rng);
  const std::vector<double> v(draws.values().begin(), draws.values().end());
  REQUIRE(stats::ks_statistic(v, F) < stats::ks_critical_1pct(v.size()));
}
