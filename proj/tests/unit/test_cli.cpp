#include <grenander/analytic_density.hpp>
#include <grenander/stats.hpp>

#include <catch_amalgamated.hpp>
#include <nlohmann/json.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path workdir()
{
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("grenander_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path(const std::string& name)
{
  return (workdir() / name).string();
}

// Runs the CLI with `args`; stderr goes to err.txt in the work directory.
int cli(const std::string& args)
{
  const std::string cmd = std::string(GRENANDER_CLI) + " " + args + " 2> " + path("err.txt") + " > /dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const std::string& p, const std::string& text)
{
  std::ofstream(p, std::ios::binary) << text;
}

json manifest_without_execution(const std::string& p)
{
  auto j = json::parse(slurp(p));
  j.erase("execution");
  return j;
}

std::vector<double> read_numbers(const std::string& p)
{
  std::vector<double> v;
  std::istringstream in(slurp(p));
  for (double x; in >> x;)
    v.push_back(x);
  return v;
}

} // namespace

TEST_CASE("gen writes sorted values in the unit interval", "[cli][gen]")
{
  REQUIRE(cli("gen --density triangular --n 5 --seed 1 --out " + path("g5.txt")) == 0);
  const auto v = read_numbers(path("g5.txt"));
  REQUIRE(v.size() == 5);
  REQUIRE(std::is_sorted(v.begin(), v.end()));
  for (double x : v)
    REQUIRE((x >= 0.0 && x <= 1.0));

  REQUIRE(cli("gen --density triangular --n 5 --seed 1 --out " + path("g5b.txt")) == 0);
  REQUIRE(slurp(path("g5.txt")) == slurp(path("g5b.txt")));
  REQUIRE(cli("gen --density triangular --n 5 --seed 2 --out " + path("g5c.txt")) == 0);
  REQUIRE(slurp(path("g5.txt")) != slurp(path("g5c.txt")));

  const auto m = json::parse(slurp(path("g5.txt.manifest.json")));
  REQUIRE(m["subcommand"] == "gen");
  REQUIRE(m["seed"] == 1);
  REQUIRE(m["parameters"]["n"] == 5);
  REQUIRE(m["outputs"][0] == path("g5.txt"));
  REQUIRE(m["execution"].contains("wall_clock_seconds"));
}

TEST_CASE("gen uniform passes a KS test", "[cli][gen]")
{
  REQUIRE(cli("gen --density uniform --n 10000 --seed 3 --out " + path("u.txt")) == 0);
  const auto v = read_numbers(path("u.txt"));
  REQUIRE(v.size() == 10000);
  REQUIRE(grenander::stats::ks_statistic(v, [](double t) { return t; }) < grenander::stats::ks_critical_1pct(v.size()));
}

TEST_CASE("gen rejects unknown densities", "[cli][gen]")
{
  REQUIRE(cli("gen --density cauchy --n 5 --out " + path("bad.txt")) == 2);
  REQUIRE(slurp(path("err.txt")).find("unknown density") != std::string::npos);
  REQUIRE(cli("gen --n 5") == 2);
  REQUIRE(cli("frobnicate") == 2);
}

TEST_CASE("fit writes the step density", "[cli][fit]")
{
  write(path("two.txt"), "0.25\n0.75\n");
  REQUIRE(cli("fit --data " + path("two.txt") + " --out " + path("two")) == 0);
  REQUIRE(slurp(path("two.csv")) == "breakpoint,height\n0.25,2\n0.75,1\n1,0\n");
  const auto j = json::parse(slurp(path("two.json")));
  REQUIRE(j["n"] == 2);
  REQUIRE(j["steps"] == 3);
  REQUIRE(std::fabs(j["mass"].get<double>() - 1.0) <= 1e-12);
  const auto m = json::parse(slurp(path("two.manifest.json")));
  REQUIRE(m["inputs"][0]["sha256"] == "cf3fbf632de2587259201b26161e69ba0bb739d49d5a5dafb86b1c87bb40caa0");
  REQUIRE(m["inputs"][0]["bytes"] == 10);
}

TEST_CASE("fit mass is one for generated data", "[cli][fit]")
{
  REQUIRE(cli("gen --density trunc-exp:2 --n 5000 --seed 4 --out " + path("e.txt")) == 0);
  REQUIRE(cli("fit --data " + path("e.txt") + " --out " + path("e")) == 0);
  REQUIRE(std::fabs(json::parse(slurp(path("e.json")))["mass"].get<double>() - 1.0) <= 1e-12);
}

TEST_CASE("fit input errors", "[cli][fit]")
{
  write(path("empty.txt"), "");
  REQUIRE(cli("fit --data " + path("empty.txt") + " --out " + path("empty")) == 1);
  write(path("range.txt"), "0.2\n0.4\n1.7\n");
  REQUIRE(cli("fit --data " + path("range.txt") + " --out " + path("range")) == 1);
  REQUIRE(slurp(path("err.txt")).find("line 3") != std::string::npos);
  REQUIRE(cli("fit --data " + path("range.txt") + " --rescale --out " + path("range")) == 0);
  REQUIRE(cli("fit --data " + path("missing.txt") + " --out " + path("missing")) == 1);
}

TEST_CASE("fit can dump the smoothed estimate", "[cli][fit]")
{
  REQUIRE(cli("gen --n 2000 --seed 5 --out " + path("s.txt")) == 0);
  REQUIRE(cli("fit --data " + path("s.txt") + " --out " + path("s") + " --smooth-grid 101") == 0);
  const auto csv = slurp(path("s.smooth.csv"));
  REQUIRE(csv.rfind("t,value,deriv1,deriv2\n", 0) == 0);
  REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 102);
  REQUIRE(cli("fit --data " + path("s.txt") + " --out " + path("s2") + " --smooth-grid 11 --kernel epanechnikov --alpha 0.3") == 0);
  REQUIRE(slurp(path("s2.smooth.csv")).rfind("t,value,deriv1\n", 0) == 0);
}

TEST_CASE("ci contract and gates", "[cli][ci]")
{
  REQUIRE(cli("gen --n 500 --seed 6 --out " + path("c.txt")) == 0);
  REQUIRE(cli("ci --data " + path("c.txt") + " --out " + path("c") + " --alpha 0.4") == 2);
  REQUIRE(cli("ci --data " + path("c.txt") + " --out " + path("c") + " --kernel gaussian") == 2);
  REQUIRE(cli("ci --data " + path("c.txt") + " --out " + path("c") + " --t0 1.2") == 2);
  REQUIRE(cli("ci --data " + path("c.txt") + " --out " + path("c") + " --boot 100 --seed 3") == 0);
  const auto j = json::parse(slurp(path("c.json")));
  REQUIRE(j.contains("grenander_value"));
  REQUIRE(j.contains("smoothed_value"));
  REQUIRE(j["lower"].get<double>() <= j["upper"].get<double>());
  REQUIRE(j["replicates"] == 100);
  REQUIRE(slurp(path("c.csv")).rfind("replicate,deviation\n", 0) == 0);
}

TEST_CASE("band contract and gates", "[cli][band]")
{
  REQUIRE(cli("gen --n 300 --seed 7 --out " + path("b.txt")) == 0);
  REQUIRE(cli("band --data " + path("b.txt") + " --out " + path("b") + " --m 300") == 2);
  REQUIRE(cli("band --data " + path("b.txt") + " --out " + path("b") + " --m 200") == 2);
  REQUIRE(cli("band --data " + path("b.txt") + " --out " + path("b") + " --kernel epanechnikov") == 2);
  REQUIRE(slurp(path("err.txt")).find("B6") != std::string::npos);
  REQUIRE(cli("band --data " + path("b.txt") + " --out " + path("b") + " --alpha 0.3") == 2);
  REQUIRE(cli("band --data " + path("b.txt") + " --out " + path("b") + " --boot 60 --m 3000") == 0);
  const auto j = json::parse(slurp(path("b.json")));
  const double n = j["n"].get<double>();
  const double radius = j["mu_hat"].get<double>() / std::cbrt(n) + j["c_hat"].get<double>() / std::sqrt(n);
  REQUIRE(j["radius"].get<double>() == Catch::Approx(radius).epsilon(1e-14));
  REQUIRE(j["m"] == 3000);
  REQUIRE(slurp(path("b.center.csv")).rfind("breakpoint,height\n", 0) == 0);
}

TEST_CASE("limits contract", "[cli][limits]")
{
  const std::string flags = " --step 0.01 --replicates 2000 --lag-max 2 --seed 5";
  REQUIRE(cli("limits --out " + path("l") + flags + " --check-scaling --dump-draws") == 0);
  const auto j = json::parse(slurp(path("l.json")));
  for (const char* key : { "abs_xi_mean", "abs_xi_mean_se", "chernoff_var", "chernoff_var_se", "sigma2", "sigma2_se" })
    REQUIRE(j.contains(key));
  REQUIRE(j["scaling"]["variance_ratio"].get<double>() == Catch::Approx(1.587).margin(0.3));
  REQUIRE(slurp(path("l.draws.csv")).rfind("replicate,xi0\n", 0) == 0);

  REQUIRE(cli("limits --out " + path("l2") + flags + " --check-scaling --dump-draws") == 0);
  REQUIRE(slurp(path("l.json")) == slurp(path("l2.json")));
  REQUIRE(cli("limits --out " + path("l3") + " --step 0.01 --window 0.3 --replicates 500 --lag-max 1") == 1);
  REQUIRE(slurp(path("err.txt")).find("window") != std::string::npos);
}

TEST_CASE("experiment dispatch", "[cli][experiment]")
{
  REQUIRE(cli("experiment --name bogus --out " + path("x")) == 2);
  REQUIRE(cli("experiment --name inconsistency --out " + path("x")) == 2);
  REQUIRE(cli("experiment --name coverage --target sideways --out " + path("x")) == 2);
  REQUIRE(cli("experiment --name rate --sizes 100 --out " + path("x")) == 2);

  REQUIRE(cli("limits --out " + path("lim") + " --step 0.01 --replicates 1000 --lag-max 2 --seed 1") == 0);
  REQUIRE(cli("experiment --name inconsistency --n 200 --reps 100 --limits " + path("lim.json") + " --out " +
              path("inc")) == 0);
  const auto inc = json::parse(slurp(path("inc.json")));
  REQUIRE(inc["experiment"] == "inconsistency");
  REQUIRE(inc.contains("ratio_ci_low"));
  const auto m = json::parse(slurp(path("inc.manifest.json")));
  REQUIRE(m["inputs"][0]["path"] == path("lim.json"));

  REQUIRE(cli("experiment --name l1clt --n 200 --reps 20 --limits " + path("lim.json") + " --out " + path("clt")) == 0);
  REQUIRE(cli("experiment --name rate --sizes 200,400 --reps 3 --grid 101 --out " + path("rate")) == 0);
  REQUIRE(slurp(path("rate.csv")).rfind("n,bandwidth,", 0) == 0);
  REQUIRE(cli("experiment --name coverage --n 100 --reps 4 --boot 20 --out " + path("cov")) == 0);
  REQUIRE(json::parse(slurp(path("cov.json")))["data_replicates"] == 4);
}

TEST_CASE("manifests differ only in the execution block", "[cli][determinism]")
{
  REQUIRE(cli("gen --n 200 --seed 8 --out " + path("d.txt")) == 0);
  REQUIRE(cli("--threads 1 ci --data " + path("d.txt") + " --out " + path("d1") + " --boot 40") == 0);
  REQUIRE(cli("--threads 3 ci --data " + path("d.txt") + " --out " + path("d3") + " --boot 40") == 0);
  REQUIRE(slurp(path("d1.json")) == slurp(path("d3.json")));
  REQUIRE(slurp(path("d1.csv")) == slurp(path("d3.csv")));
  auto a = manifest_without_execution(path("d1.manifest.json"));
  auto b = manifest_without_execution(path("d3.manifest.json"));
  REQUIRE(a["parameters"] == b["parameters"]);
  REQUIRE(a["inputs"] == b["inputs"]);
  REQUIRE(json::parse(slurp(path("d3.manifest.json")))["execution"]["threads"] == 3);
}
