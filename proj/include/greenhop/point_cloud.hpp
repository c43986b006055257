#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "greenhop/errors.hpp"
#include "greenhop/rng.hpp"

namespace greenhop {

using Point = Eigen::Vector3d;

/// Ordered list of 3-D points. Index order is meaningful: neighbor lists and
/// region memberships refer back into it.
struct PointCloud {
  std::vector<Point> points;

  PointCloud() = default;
  explicit PointCloud(std::vector<Point> pts) : points(std::move(pts)) {}

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  const Point& operator[](std::size_t i) const { return points[i]; }
  Point& operator[](std::size_t i) { return points[i]; }
};

inline void require_finite(const PointCloud& cloud) {
  for (const auto& p : cloud.points)
    if (!p.allFinite()) throw InvalidInputError("point cloud contains a non-finite coordinate");
}

/// Centers the cloud on its centroid and scales the farthest point to unit
/// norm. Scaling is skipped when every point coincides with the centroid.
inline PointCloud normalize(const PointCloud& cloud) {
  if (cloud.empty()) throw InvalidInputError("normalize: empty point cloud");
  require_finite(cloud);
  Point centroid = Point::Zero();
  for (const auto& p : cloud.points) centroid += p;
  centroid /= static_cast<double>(cloud.size());

  PointCloud out;
  out.points.reserve(cloud.size());
  double max_norm = 0.0;
  for (const auto& p : cloud.points) {
    out.points.push_back(p - centroid);
    max_norm = std::max(max_norm, out.points.back().norm());
  }
  if (max_norm > 0.0)
    for (auto& p : out.points) p /= max_norm;
  return out;
}

/// Uniform sample of m points without replacement (partial Fisher-Yates).
/// A fixed seed always selects the same index pattern.
inline PointCloud downsample(const PointCloud& cloud, std::size_t m, std::uint64_t seed) {
  const std::size_t n = cloud.size();
  if (m < 1 || m > n)
    throw InvalidInputError("downsample: requested " + std::to_string(m) + " of " +
                            std::to_string(n) + " points");
  std::vector<std::uint32_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0U);
  Rng rng(seed);
  PointCloud out;
  out.points.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + rng.next_below(n - i);
    std::swap(idx[i], idx[j]);
    out.points.push_back(cloud.points[idx[i]]);
  }
  return out;
}

inline PointCloud rotate_z(const PointCloud& cloud, double angle_rad) {
  const double c = std::cos(angle_rad);
  const double s = std::sin(angle_rad);
  PointCloud out;
  out.points.reserve(cloud.size());
  for (const auto& p : cloud.points)
    out.points.emplace_back(c * p.x() - s * p.y(), s * p.x() + c * p.y(), p.z());
  return out;
}

/// Train-time augmentation: uniform random rotation about the up (z) axis,
/// then per-point Gaussian jitter with each component clipped to +/- clip.
inline PointCloud augment(const PointCloud& cloud, std::uint64_t seed, double jitter_sigma = 0.01,
                          double jitter_clip = 0.05) {
  if (jitter_sigma < 0.0 || jitter_clip < 0.0)
    throw InvalidInputError("augment: jitter sigma and clip must be nonnegative");
  require_finite(cloud);
  Rng rng(seed);
  const double angle = 2.0 * std::numbers::pi * rng.next_double();
  PointCloud out = rotate_z(cloud, angle);
  if (jitter_sigma > 0.0) {
    for (auto& p : out.points)
      for (int c = 0; c < 3; ++c)
        p[c] += std::clamp(jitter_sigma * rng.next_normal(), -jitter_clip, jitter_clip);
  }
  return out;
}

}  // namespace greenhop
