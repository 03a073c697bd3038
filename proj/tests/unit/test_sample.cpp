#include <grenander/sample.hpp>

#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

using grenander::EmpiricalCDF;
using grenander::Sample;

TEST_CASE("sample validation", "[sample]")
{
  REQUIRE_THROWS_AS(Sample({}), std::invalid_argument);
  REQUIRE_THROWS_AS(Sample({ 0.5, 1.5 }), std::invalid_argument);
  REQUIRE_THROWS_AS(Sample({ -0.1 }), std::invalid_argument);
  REQUIRE_THROWS_AS(Sample({ std::numeric_limits<double>::quiet_NaN() }), std::invalid_argument);
  Sample s({ 0.7, 0.1, 0.4 });
  REQUIRE(s.size() == 3);
  REQUIRE(s[0] == 0.1);
  REQUIRE(s[2] == 0.7);
  REQUIRE(s.min() == 0.1);
  REQUIRE(s.max() == 0.7);
}

TEST_CASE("ECDF of two points", "[ecdf]")
{
  EmpiricalCDF F(Sample({ 0.25, 0.75 }));
  REQUIRE(F(0.25) == 0.5);
  REQUIRE(F(0.5) == 0.5);
  REQUIRE(F(0.75) == 1.0);
  REQUIRE(F(0.0) == 0.0);
  REQUIRE(F(0.2499) == 0.0);
}

TEST_CASE("ECDF of a single point", "[ecdf]")
{
  EmpiricalCDF F(Sample({ 0.3 }));
  REQUIRE(F(0.2) == 0.0);
  REQUIRE(F(0.3) == 1.0);
}

TEST_CASE("ECDF merges ties", "[ecdf]")
{
  EmpiricalCDF F(Sample({ 0.4, 0.4 }));
  REQUIRE(F(0.4) == 1.0);
  REQUIRE(F.jumps().size() == 1);
  REQUIRE(F.cumulative_counts().front() == 2);

  EmpiricalCDF G(Sample({ 0.2, 0.5, 0.5, 0.5, 0.9 }));
  REQUIRE(G.jumps() == std::vector<double>{ 0.2, 0.5, 0.9 });
  REQUIRE(G.cumulative_counts() == std::vector<std::size_t>{ 1, 4, 5 });
  REQUIRE(G(0.5) == 0.8);
  REQUIRE(G(0.49) == 0.2);
}
