#pragma once

#include "sample.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace grenander {

struct Vertex
{
  double x;
  double y;
};

//! Least concave majorant of an empirical CDF on [0, 1], stored as the
//! vertices of its graph. Vertices run from (0, 0) to (1, 1) with strictly
//! decreasing chord slopes.
class ConcaveMajorant
{
public:
  ConcaveMajorant(std::vector<Vertex> vertices, std::vector<double> slopes)
    : vertices_(std::move(vertices))
    , slopes_(std::move(slopes))
  {
  }

  const std::vector<Vertex>& vertices() const { return vertices_; }

  //! Chord slopes between consecutive vertices; slopes()[j] belongs to
  //! (vertices()[j].x, vertices()[j + 1].x].
  const std::vector<double>& slopes() const { return slopes_; }

  double operator()(double t) const
  {
    if (t <= 0.0)
      return 0.0;
    if (t >= 1.0)
      return 1.0;
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), t, [](const Vertex& v, double x) {
      return v.x < x;
    });
    const auto j = static_cast<std::size_t>(it - vertices_.begin());
    const Vertex& right = vertices_[j];
    if (right.x == t)
      return right.y;
    const Vertex& left = vertices_[j - 1];
    return left.y + slopes_[j - 1] * (t - left.x);
  }

private:
  std::vector<Vertex> vertices_;
  std::vector<double> slopes_;
};

//! Upper concave hull of {(0,0)} ∪ {(X_(i), i/n)} ∪ {(1,1)} in one monotone
//! stack sweep over the sorted jump points.
//!
//! An observation at exactly 0 puts an atom of the empirical measure at the
//! left end point, where no finite non-increasing density can put mass;
//! such samples are rejected with std::domain_error.
inline ConcaveMajorant least_concave_majorant(const EmpiricalCDF& cdf)
{
  const auto& jumps = cdf.jumps();
  const auto& counts = cdf.cumulative_counts();
  if (!jumps.empty() && jumps.front() <= 0.0)
    throw std::domain_error("observation at 0: the monotone density MLE is unbounded there");

  const double n = static_cast<double>(cdf.n());
  struct Point
  {
    double x;
    double count;
  };
  std::vector<Point> pts;
  pts.reserve(jumps.size() + 2);
  pts.push_back({ 0.0, 0.0 });
  for (std::size_t k = 0; k < jumps.size(); ++k)
    pts.push_back({ jumps[k], static_cast<double>(counts[k]) });
  if (pts.back().x < 1.0)
    pts.push_back({ 1.0, n });

  auto slope = [n](const Point& a, const Point& b) { return (b.count - a.count) / (n * (b.x - a.x)); };

  std::vector<Point> hull;
  hull.reserve(pts.size());
  for (const auto& p : pts) {
    while (hull.size() >= 2 && slope(hull[hull.size() - 2], hull.back()) <= slope(hull.back(), p))
      hull.pop_back();
    hull.push_back(p);
  }

  std::vector<Vertex> vertices;
  std::vector<double> slopes;
  vertices.reserve(hull.size());
  slopes.reserve(hull.size() - 1);
  for (std::size_t j = 0; j < hull.size(); ++j) {
    vertices.push_back({ hull[j].x, hull[j].count / n });
    if (j > 0)
      slopes.push_back(slope(hull[j - 1], hull[j]));
  }
  return ConcaveMajorant(std::move(vertices), std::move(slopes));
}

} // namespace grenander
