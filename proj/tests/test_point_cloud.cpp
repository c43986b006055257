#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <set>

#include "greenhop/point_cloud.hpp"
#include "support/synthetic.hpp"

using namespace greenhop;

TEST_CASE("normalize centers and scales to the unit ball") {
  Rng rng(11);
  const PointCloud cloud = synth::random_cloud(rng, 200);
  const PointCloud out = normalize(cloud);

  Point centroid = Point::Zero();
  double max_norm = 0.0;
  for (const auto& p : out.points) {
    centroid += p;
    max_norm = std::max(max_norm, p.norm());
  }
  centroid /= static_cast<double>(out.size());
  CHECK(centroid.norm() < 1e-12);
  CHECK(max_norm == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(out.size() == cloud.size());
}

TEST_CASE("normalize is idempotent up to roundoff") {
  Rng rng(12);
  const PointCloud once = normalize(synth::random_cloud(rng, 64));
  const PointCloud twice = normalize(once);
  for (std::size_t i = 0; i < once.size(); ++i)
    CHECK((once[i] - twice[i]).norm() < 1e-12);
}

TEST_CASE("normalize handles the degenerate all-coincident cloud") {
  PointCloud cloud;
  for (int i = 0; i < 5; ++i) cloud.points.emplace_back(2.0, -1.0, 3.0);
  const PointCloud out = normalize(cloud);
  for (const auto& p : out.points) {
    CHECK(p.allFinite());
    CHECK(p.norm() == 0.0);
  }
}

TEST_CASE("normalize rejects bad input") {
  CHECK_THROWS_AS(normalize(PointCloud{}), InvalidInputError);
  PointCloud cloud;
  cloud.points.emplace_back(0.0, 1.0, 2.0);
  cloud.points.emplace_back(0.0, std::nan(""), 2.0);
  CHECK_THROWS_AS(normalize(cloud), InvalidInputError);
}

TEST_CASE("downsample picks a deterministic subset without replacement") {
  Rng rng(13);
  const PointCloud cloud = synth::random_cloud(rng, 100);
  const PointCloud a = downsample(cloud, 40, 7);
  const PointCloud b = downsample(cloud, 40, 7);
  REQUIRE(a.size() == 40);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);

  const PointCloud c = downsample(cloud, 40, 8);
  bool any_diff = false;
  for (std::size_t i = 0; i < c.size(); ++i) any_diff |= (a[i] != c[i]);
  CHECK(any_diff);

  std::set<std::array<double, 3>> source, picked;
  for (const auto& p : cloud.points) source.insert({p.x(), p.y(), p.z()});
  for (const auto& p : a.points) picked.insert({p.x(), p.y(), p.z()});
  CHECK(picked.size() == 40);
  for (const auto& p : picked) CHECK(source.count(p) == 1);
}

TEST_CASE("downsample with m = n is a permutation of the whole cloud") {
  Rng rng(14);
  const PointCloud cloud = synth::random_cloud(rng, 30);
  const PointCloud out = downsample(cloud, 30, 99);
  std::multiset<double> a, b;
  for (const auto& p : cloud.points) a.insert(p.x());
  for (const auto& p : out.points) b.insert(p.x());
  CHECK(a == b);
}

TEST_CASE("downsample validates the requested count") {
  Rng rng(15);
  const PointCloud cloud = synth::random_cloud(rng, 10);
  CHECK_THROWS_AS(downsample(cloud, 0, 1), InvalidInputError);
  CHECK_THROWS_AS(downsample(cloud, 11, 1), InvalidInputError);
}

TEST_CASE("rotate_z by a quarter turn maps x to y") {
  PointCloud cloud;
  cloud.points.emplace_back(1.0, 0.0, 0.5);
  const PointCloud out = rotate_z(cloud, std::numbers::pi / 2.0);
  CHECK(out[0].x() == Catch::Approx(0.0).margin(1e-15));
  CHECK(out[0].y() == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(out[0].z() == 0.5);
}

TEST_CASE("augment is deterministic and respects the jitter clip") {
  Rng rng(16);
  const PointCloud cloud = synth::random_cloud(rng, 50);

  const PointCloud a = augment(cloud, 1234, 0.01, 0.05);
  const PointCloud b = augment(cloud, 1234, 0.01, 0.05);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);

  // sigma = 0: a pure rotation about z, so every norm and z survive.
  const PointCloud rot = augment(cloud, 77, 0.0, 0.05);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    CHECK(rot[i].norm() == Catch::Approx(cloud[i].norm()).margin(1e-12));
    CHECK(rot[i].z() == cloud[i].z());
  }

  // Huge sigma with a tight clip: each point stays within clip per component
  // of some z-rotation of the original, which preserves sqrt(x^2+y^2) and z.
  const double clip = 0.01;
  const PointCloud jit = augment(cloud, 77, 1000.0, clip);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double r_before = std::hypot(cloud[i].x(), cloud[i].y());
    const double r_after = std::hypot(jit[i].x(), jit[i].y());
    CHECK(std::abs(r_after - r_before) <= std::sqrt(2.0) * clip + 1e-12);
    CHECK(std::abs(jit[i].z() - cloud[i].z()) <= clip + 1e-12);
  }

  CHECK_THROWS_AS(augment(cloud, 1, -0.1, 0.1), InvalidInputError);
  CHECK_THROWS_AS(augment(cloud, 1, 0.1, -0.1), InvalidInputError);
}
