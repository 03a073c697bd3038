#pragma once

// Exhaustive least-concave-majorant oracle for tiny samples.

#include <grenander/majorant.hpp>
#include <grenander/rng.hpp>
#include <grenander/sample.hpp>

#include <cmath>
#include <cstddef>
#include <vector>

namespace grenander::testing {

struct Pt
{
  double x;
  double y;
};

// ECDF corner points (0,0), (X_(k), F(X_(k))), (1,1).
inline std::vector<Pt> corner_points(const Sample& s)
{
  EmpiricalCDF F(s);
  std::vector<Pt> p{ { 0.0, 0.0 } };
  for (double x : F.jumps())
    p.push_back({ x, F(x) });
  if (p.back().x < 1.0)
    p.push_back({ 1.0, 1.0 });
  return p;
}

// Exhaustive oracle: among all vertex subsets containing both end points whose
// interpolant is concave and dominates every corner point, the least concave
// majorant is the one with the smallest values. Returns its left derivative on
// each gap between consecutive corner points.
inline std::vector<double> brute_force_heights(const std::vector<Pt>& p)
{
  const std::size_t k = p.size();
  const std::size_t inner = k - 2;
  std::vector<std::size_t> best;
  double best_sum = INFINITY;
  for (std::size_t mask = 0; mask < (std::size_t{ 1 } << inner); ++mask) {
    std::vector<std::size_t> idx{ 0 };
    for (std::size_t i = 0; i < inner; ++i)
      if (mask & (std::size_t{ 1 } << i))
        idx.push_back(i + 1);
    idx.push_back(k - 1);
    bool concave = true;
    for (std::size_t j = 2; j < idx.size() && concave; ++j) {
      const double s1 = (p[idx[j - 1]].y - p[idx[j - 2]].y) / (p[idx[j - 1]].x - p[idx[j - 2]].x);
      const double s2 = (p[idx[j]].y - p[idx[j - 1]].y) / (p[idx[j]].x - p[idx[j - 1]].x);
      concave = s2 <= s1 + 1e-12;
    }
    if (!concave)
      continue;
    std::vector<double> vals(k);
    bool dominates = true;
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = 1;
      while (p[idx[j]].x < p[i].x)
        ++j;
      const Pt& a = p[idx[j - 1]];
      const Pt& b = p[idx[j]];
      vals[i] = a.y + (b.y - a.y) * (p[i].x - a.x) / (b.x - a.x);
      dominates = dominates && vals[i] >= p[i].y - 1e-12;
      sum += vals[i];
    }
    if (dominates && sum < best_sum) {
      best_sum = sum;
      best = idx;
    }
  }
  // slope of the winning segment over each gap, not a difference of
  // interpolated values, which loses digits on narrow gaps
  std::vector<double> h(k - 1);
  std::size_t j = 1;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    while (best[j] <= i)
      ++j;
    const Pt& a = p[best[j - 1]];
    const Pt& b = p[best[j]];
    h[i] = (b.y - a.y) / (b.x - a.x);
  }
  return h;
}

inline Sample random_small_sample(RngStream& rng)
{
  const std::size_t n = 1 + rng.index(8);
  std::vector<double> v(n);
  const bool coarse = rng.uniform() < 0.3; // coarse grid produces ties
  for (auto& x : v)
    x = coarse ? static_cast<double>(1 + rng.index(10)) / 10.0 : rng.uniform();
  return Sample(std::move(v));
}

} // namespace grenander::testing
