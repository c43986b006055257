#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "greenhop/errors.hpp"
#include "greenhop/point_cloud.hpp"

namespace greenhop {

inline constexpr int kOctants = 8;
inline constexpr int kDescriptorDim = 24;  // 8 octant centroids x 3 coordinates

/// 24-D per-point vector; used for both the raw octant descriptor and the
/// spectral responses after the Saab transform.
using Descriptor = Eigen::Matrix<double, kDescriptorDim, 1>;

/// Octant slots ordered by descending sign code (x>=0)*4 + (y>=0)*2 + (z>=0),
/// so slot 0 is (+,+,+) and slot 7 is (-,-,-). A coordinate that is exactly
/// zero counts as positive.
inline int octant_slot(const Point& local) {
  const int code = (local.x() >= 0.0 ? 4 : 0) | (local.y() >= 0.0 ? 2 : 0) |
                   (local.z() >= 0.0 ? 1 : 0);
  return 7 - code;
}

/// Per-octant centroids of the neighbors in local coordinates around the query
/// point. Empty octants stay exactly zero. Neighbors are accumulated in
/// ascending point-index order, so the result does not depend on how the
/// neighbor list happens to be sorted.
inline Descriptor octant_descriptor(const PointCloud& cloud, std::span<const std::int32_t> neighbors,
                                    std::int32_t query) {
  if (neighbors.empty()) throw InvalidInputError("octant_descriptor: empty neighbor list");

  std::array<std::int32_t, 64> small_buf;
  std::vector<std::int32_t> big_buf;
  std::span<std::int32_t> sorted;
  if (neighbors.size() <= small_buf.size()) {
    std::copy(neighbors.begin(), neighbors.end(), small_buf.begin());
    sorted = {small_buf.data(), neighbors.size()};
  } else {
    big_buf.assign(neighbors.begin(), neighbors.end());
    sorted = big_buf;
  }
  std::sort(sorted.begin(), sorted.end());

  std::array<Point, kOctants> sums;
  sums.fill(Point::Zero());
  std::array<int, kOctants> counts{};
  const Point& origin = cloud.points[query];
  for (const std::int32_t j : sorted) {
    const Point local = cloud.points[j] - origin;
    const int slot = octant_slot(local);
    sums[slot] += local;
    ++counts[slot];
  }

  Descriptor d = Descriptor::Zero();
  for (int slot = 0; slot < kOctants; ++slot)
    if (counts[slot] > 0) d.segment<3>(slot * 3) = sums[slot] / counts[slot];
  return d;
}

}  // namespace greenhop
