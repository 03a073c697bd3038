#include <grenander/kernel.hpp>
#include <grenander/smoothed_density.hpp>

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace grenander;

namespace {

// (35/32)(1 - v^2)^3, without an analytic level so checks run numerically
Kernel triweight()
{
  constexpr double c = 35.0 / 32.0;
  return Kernel(
    "triweight",
    [](double v) { return c * std::pow(1.0 - v * v, 3); },
    [](double v) { return -6.0 * c * v * std::pow(1.0 - v * v, 2); },
    [](double v) { return c * (-6.0 * std::pow(1.0 - v * v, 2) + 24.0 * v * v * (1.0 - v * v)); });
}

const ConditionResult& find(const KernelReport& r, const std::string& name)
{
  for (const auto& c : r.conditions)
    if (c.name == name)
      return c;
  throw std::runtime_error("no condition " + name);
}

} // namespace

TEST_CASE("Epanechnikov satisfies the B4 conditions", "[kernel]")
{
  const auto r = check_kernel_conditions(epanechnikov_kernel(), KernelLevel::B4);
  REQUIRE(r.passed());
  REQUIRE(r.conditions.size() >= 8);
}

TEST_CASE("biweight satisfies the B6 conditions", "[kernel]")
{
  const auto r = check_kernel_conditions(biweight_kernel(), KernelLevel::B6);
  for (const auto& c : r.conditions)
    INFO(c.name << " residual " << c.residual);
  REQUIRE(r.passed());
}

TEST_CASE("Epanechnikov fails B6 through the integral of K''", "[kernel]")
{
  const auto r = check_kernel_conditions(epanechnikov_kernel(), KernelLevel::B6);
  REQUIRE_FALSE(r.passed());
  const auto& c = find(r, "B5: int K'' = 0");
  REQUIRE_FALSE(c.passed);
  REQUIRE(c.residual == Catch::Approx(3.0).epsilon(1e-9));
  REQUIRE_FALSE(epanechnikov_kernel().satisfies(KernelLevel::B6));
  REQUIRE(epanechnikov_kernel().satisfies(KernelLevel::B4));
}

TEST_CASE("numerical checks on a kernel without a known level", "[kernel]")
{
  const auto k = triweight();
  REQUIRE_FALSE(k.known_level().has_value());
  REQUIRE(k.satisfies(KernelLevel::B4));
  REQUIRE(k.satisfies(KernelLevel::B6));
}

TEST_CASE("a box kernel fails B3", "[kernel]")
{
  const Kernel box("box", [](double) { return 0.5; }, [](double) { return 0.0; }, [](double) { return 0.0; });
  const auto r = check_kernel_conditions(box, KernelLevel::B4);
  REQUIRE_FALSE(r.passed());
  REQUIRE_FALSE(find(r, "B3: int v K' = -1").passed);
}

TEST_CASE("a sign-changing kernel fails B1", "[kernel]")
{
  // (3/4)(1 - v^2) + (v^2 - 1/3)·c integrates to 1 but dips below zero for large c
  const double c = -2.0;
  const Kernel k(
    "signed",
    [=](double v) { return 0.75 * (1.0 - v * v) + c * (v * v - 1.0 / 3.0); },
    [=](double v) { return -1.5 * v + 2.0 * c * v; },
    [=](double) { return -1.5 + 2.0 * c; });
  REQUIRE_FALSE(find(check_kernel_conditions(k, KernelLevel::B4), "B1: K >= 0 on [-1,1]").passed);
}

TEST_CASE("analytic antiderivatives match quadrature", "[kernel]")
{
  for (const auto& k : { epanechnikov_kernel(), biweight_kernel() }) {
    REQUIRE(k.antiderivative(-1.0) == 0.0);
    REQUIRE(k.antiderivative(1.0) == 1.0);
    for (double v : { -0.9, -0.3, 0.0, 0.45, 0.99 })
      REQUIRE(k.antiderivative(v) ==
              Catch::Approx(adaptive_simpson([&](double u) { return k(u); }, -1.0, v, { .abs_tol = 1e-13 })).margin(1e-12));
  }
}

TEST_CASE("kernel lookup by name", "[kernel]")
{
  REQUIRE(kernel_by_name("biweight").name() == "biweight");
  REQUIRE_THROWS_AS(kernel_by_name("gaussian"), std::invalid_argument);
  REQUIRE(epanechnikov_kernel()(1.5) == 0.0);
  REQUIRE(epanechnikov_kernel().d1(-1.01) == 0.0);
}

TEST_CASE("bandwidth rule examples", "[bandwidth]")
{
  REQUIRE(bandwidth(BandwidthRule::pointwise(0.3), 1000) == Catch::Approx(0.125893).margin(1e-6));
  REQUIRE(bandwidth(BandwidthRule::l1(0.18), 10000) == Catch::Approx(0.190546).margin(1e-6));
  REQUIRE(bandwidth(BandwidthRule::pointwise(0.3), 2) == 0.5);
  REQUIRE(bandwidth(BandwidthRule::pointwise(0.3, 2.0), 1000) == Catch::Approx(2 * 0.125893).margin(2e-6));
}

TEST_CASE("bandwidth regimes", "[bandwidth]")
{
  using R = BandwidthRule::Regime;
  REQUIRE(BandwidthRule::admissible(R::pointwise, 0.3));
  REQUIRE_FALSE(BandwidthRule::admissible(R::pointwise, 0.4));
  REQUIRE_FALSE(BandwidthRule::admissible(R::pointwise, 1.0 / 3.0));
  REQUIRE(BandwidthRule::admissible(R::l1, 0.18));
  REQUIRE_FALSE(BandwidthRule::admissible(R::l1, 0.2));
  REQUIRE_FALSE(BandwidthRule::admissible(R::l1, 1.0 / 6.0));
  REQUIRE_THROWS_AS(bandwidth(BandwidthRule::pointwise(0.4), 100), std::invalid_argument);
  REQUIRE_THROWS_AS(bandwidth(BandwidthRule::l1(0.3), 100), std::invalid_argument);
  REQUIRE_THROWS_AS(bandwidth(BandwidthRule::pointwise(0.3, 0.0), 100), std::invalid_argument);
  REQUIRE_THROWS_AS(bandwidth(BandwidthRule::pointwise(0.3), 0), std::invalid_argument);
}
