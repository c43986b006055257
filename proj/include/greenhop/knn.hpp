#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "greenhop/errors.hpp"
#include "greenhop/point_cloud.hpp"

namespace greenhop {

/// K nearest neighbors per query point, flattened row-major. Each row is
/// sorted by ascending distance with ties broken by ascending point index;
/// the query itself never appears in its own row.
struct NeighborIndex {
  int k = 0;
  std::size_t n_queries = 0;
  std::vector<std::int32_t> flat;  // n_queries * k entries

  std::span<const std::int32_t> row(std::size_t query) const {
    return {flat.data() + query * static_cast<std::size_t>(k), static_cast<std::size_t>(k)};
  }
};

/// Exact Euclidean K-NN by brute-force scan. The contract is equality with a
/// full distance-sort oracle, so any accelerated replacement must preserve
/// the (distance, index) ordering exactly.
inline NeighborIndex knn(const PointCloud& cloud, int k) {
  const std::size_t n = cloud.size();
  if (k < 1 || static_cast<std::size_t>(k) >= n)
    throw InvalidInputError("knn: k=" + std::to_string(k) + " requires 1 <= k <= N-1 (N=" +
                            std::to_string(n) + ")");

  NeighborIndex out;
  out.k = k;
  out.n_queries = n;
  out.flat.resize(n * static_cast<std::size_t>(k));

  std::vector<std::pair<double, std::int32_t>> cand;
  cand.reserve(n - 1);
  for (std::size_t q = 0; q < n; ++q) {
    cand.clear();
    const Point& pq = cloud.points[q];
    for (std::size_t j = 0; j < n; ++j) {
      if (j == q) continue;
      const double dx = cloud.points[j].x() - pq.x();
      const double dy = cloud.points[j].y() - pq.y();
      const double dz = cloud.points[j].z() - pq.z();
      cand.emplace_back(dx * dx + dy * dy + dz * dz, static_cast<std::int32_t>(j));
    }
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
    for (int i = 0; i < k; ++i) out.flat[q * static_cast<std::size_t>(k) + i] = cand[i].second;
  }
  return out;
}

}  // namespace greenhop
