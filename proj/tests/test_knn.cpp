#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <utility>
#include <vector>

#include "greenhop/knn.hpp"
#include "support/synthetic.hpp"

using namespace greenhop;

namespace {

// Oracle: full sort of every (squared distance, index) pair per query. Uses
// the same scalar distance expression as the implementation so agreement is
// exact, not approximate.
std::vector<std::int32_t> knn_oracle_row(const PointCloud& cloud, std::size_t q, int k) {
  std::vector<std::pair<double, std::int32_t>> all;
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    if (j == q) continue;
    const double dx = cloud.points[j].x() - cloud.points[q].x();
    const double dy = cloud.points[j].y() - cloud.points[q].y();
    const double dz = cloud.points[j].z() - cloud.points[q].z();
    all.emplace_back(dx * dx + dy * dy + dz * dz, static_cast<std::int32_t>(j));
  }
  std::sort(all.begin(), all.end());
  std::vector<std::int32_t> row(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) row[static_cast<std::size_t>(i)] = all[static_cast<std::size_t>(i)].second;
  return row;
}

}  // namespace

TEST_CASE("knn equals the full-sort oracle on 200 random instances") {
  Rng rng(21);
  for (int instance = 0; instance < 200; ++instance) {
    const std::size_t n = 5 + rng.next_below(56);
    const int k = 1 + static_cast<int>(rng.next_below(n - 1));
    const PointCloud cloud = synth::random_cloud(rng, n);
    const NeighborIndex idx = knn(cloud, k);
    REQUIRE(idx.n_queries == n);
    REQUIRE(idx.k == k);
    for (std::size_t q = 0; q < n; ++q) {
      const auto row = idx.row(q);
      const auto expected = knn_oracle_row(cloud, q, k);
      for (int i = 0; i < k; ++i)
        REQUIRE(row[static_cast<std::size_t>(i)] == expected[static_cast<std::size_t>(i)]);
    }
  }
}

TEST_CASE("knn breaks exact distance ties by ascending index") {
  PointCloud cloud;
  cloud.points.emplace_back(0.0, 0.0, 0.0);   // query
  cloud.points.emplace_back(1.0, 0.0, 0.0);   // d2 = 1
  cloud.points.emplace_back(0.0, 1.0, 0.0);   // d2 = 1
  cloud.points.emplace_back(-1.0, 0.0, 0.0);  // d2 = 1
  cloud.points.emplace_back(2.0, 0.0, 0.0);   // d2 = 4
  const NeighborIndex idx = knn(cloud, 3);
  const auto row = idx.row(0);
  CHECK(row[0] == 1);
  CHECK(row[1] == 2);
  CHECK(row[2] == 3);
}

TEST_CASE("knn excludes the query point itself") {
  Rng rng(22);
  const PointCloud cloud = synth::random_cloud(rng, 20);
  const NeighborIndex idx = knn(cloud, 19);
  for (std::size_t q = 0; q < cloud.size(); ++q)
    for (const std::int32_t j : idx.row(q)) CHECK(j != static_cast<std::int32_t>(q));
}

TEST_CASE("knn validates k") {
  Rng rng(23);
  const PointCloud cloud = synth::random_cloud(rng, 10);
  CHECK_THROWS_AS(knn(cloud, 0), InvalidInputError);
  CHECK_THROWS_AS(knn(cloud, 10), InvalidInputError);
  CHECK_NOTHROW(knn(cloud, 9));
}
