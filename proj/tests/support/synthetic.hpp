#pragma once

// Synthetic shape clouds and on-disk datasets shared by the test suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "greenhop/dataset.hpp"
#include "greenhop/point_cloud.hpp"
#include "greenhop/rng.hpp"

namespace synth {

using greenhop::Point;
using greenhop::PointCloud;
using greenhop::Rng;

inline Point random_unit_vector(Rng& rng) {
  while (true) {
    const Point v(rng.next_normal(), rng.next_normal(), rng.next_normal());
    const double n = v.norm();
    if (n > 1e-9) return v / n;
  }
}

/// Uniform sample on an axis-scaled sphere surface.
inline PointCloud sphere_cloud(Rng& rng, std::size_t n, const Point& scale) {
  PointCloud cloud;
  cloud.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    cloud.points.push_back(random_unit_vector(rng).cwiseProduct(scale));
  return cloud;
}

/// Uniform sample on the surface of a box with the given half-extents,
/// faces weighted by area.
inline PointCloud box_cloud(Rng& rng, std::size_t n, const Point& half) {
  const double areas[3] = {half.y() * half.z(), half.x() * half.z(), half.x() * half.y()};
  const double total = areas[0] + areas[1] + areas[2];
  PointCloud cloud;
  cloud.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double pick = rng.next_double() * total;
    const int axis = pick < areas[0] ? 0 : (pick < areas[0] + areas[1] ? 1 : 2);
    Point p;
    for (int c = 0; c < 3; ++c) p(c) = (2.0 * rng.next_double() - 1.0) * half(c);
    p(axis) = rng.next_double() < 0.5 ? -half(axis) : half(axis);
    cloud.points.push_back(p);
  }
  return cloud;
}

/// Uniform sample on a closed cylinder (axis z), lateral wall and caps
/// weighted by area.
inline PointCloud cylinder_cloud(Rng& rng, std::size_t n, double radius, double half_height) {
  const double lateral = 2.0 * std::numbers::pi * radius * 2.0 * half_height;
  const double caps = 2.0 * std::numbers::pi * radius * radius;
  PointCloud cloud;
  cloud.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double angle = 2.0 * std::numbers::pi * rng.next_double();
    if (rng.next_double() * (lateral + caps) < lateral) {
      const double z = (2.0 * rng.next_double() - 1.0) * half_height;
      cloud.points.emplace_back(radius * std::cos(angle), radius * std::sin(angle), z);
    } else {
      const double r = radius * std::sqrt(rng.next_double());
      const double z = rng.next_double() < 0.5 ? -half_height : half_height;
      cloud.points.emplace_back(r * std::cos(angle), r * std::sin(angle), z);
    }
  }
  return cloud;
}

/// Two spherical lobes on the z axis joined by a thin rod.
inline PointCloud dumbbell_cloud(Rng& rng, std::size_t n, double lobe_radius, double lobe_offset,
                                 double rod_radius) {
  const double lobe_area = 4.0 * std::numbers::pi * lobe_radius * lobe_radius;
  const double rod_len = 2.0 * (lobe_offset - lobe_radius * 0.5);
  const double rod_area = 2.0 * std::numbers::pi * rod_radius * rod_len;
  const double total = 2.0 * lobe_area + rod_area;
  PointCloud cloud;
  cloud.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double pick = rng.next_double() * total;
    if (pick < 2.0 * lobe_area) {
      const double side = pick < lobe_area ? 1.0 : -1.0;
      Point p = random_unit_vector(rng) * lobe_radius;
      p.z() += side * lobe_offset;
      cloud.points.push_back(p);
    } else {
      const double angle = 2.0 * std::numbers::pi * rng.next_double();
      const double z = (rng.next_double() - 0.5) * rod_len;
      cloud.points.emplace_back(rod_radius * std::cos(angle), rod_radius * std::sin(angle), z);
    }
  }
  return cloud;
}

/// Fully random ball cloud for property tests (not class-separable).
inline PointCloud random_cloud(Rng& rng, std::size_t n) {
  PointCloud cloud;
  cloud.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    cloud.points.push_back(random_unit_vector(rng) * std::cbrt(rng.next_double()));
  return cloud;
}

/// One sample of a named shape family with per-sample size variation, a
/// random z rotation and light clipped jitter.
inline PointCloud make_shape(const std::string& kind, Rng& rng, std::size_t n) {
  auto span = [&](double lo, double hi) { return lo + (hi - lo) * rng.next_double(); };
  PointCloud cloud;
  if (kind == "sphere") {
    cloud = sphere_cloud(rng, n, Point(span(0.85, 1.15), span(0.85, 1.15), span(0.85, 1.15)));
  } else if (kind == "box") {
    cloud = box_cloud(rng, n, Point(span(0.8, 1.0), span(0.5, 0.7), span(0.25, 0.4)));
  } else if (kind == "cylinder") {
    cloud = cylinder_cloud(rng, n, span(0.25, 0.4), span(0.9, 1.1));
  } else if (kind == "dumbbell") {
    cloud = dumbbell_cloud(rng, n, span(0.35, 0.45), span(0.7, 0.9), 0.12);
  } else {
    throw std::runtime_error("unknown shape kind '" + kind + "'");
  }
  cloud = greenhop::rotate_z(cloud, 2.0 * std::numbers::pi * rng.next_double());
  for (auto& p : cloud.points)
    for (int c = 0; c < 3; ++c)
      p(c) += std::clamp(0.005 * rng.next_normal(), -0.02, 0.02);
  return cloud;
}

/// Writes `per_class` samples of each listed shape under dir/<kind>/ and a
/// manifest with a #classes header. Returns the manifest path.
inline std::string write_shape_dataset(const std::string& dir,
                                       const std::vector<std::string>& kinds, int per_class,
                                       std::size_t points_per_cloud, std::uint64_t seed) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::string manifest_path = (fs::path(dir) / "manifest.tsv").string();
  std::ofstream manifest(manifest_path);
  manifest << "#classes:";
  for (std::size_t k = 0; k < kinds.size(); ++k) manifest << (k ? "," : " ") << kinds[k];
  manifest << "\n";
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    fs::create_directories(fs::path(dir) / kinds[k]);
    for (int j = 0; j < per_class; ++j) {
      Rng rng(greenhop::mix_seed(seed, k * 100000ULL + static_cast<std::uint64_t>(j)));
      const PointCloud cloud = make_shape(kinds[k], rng, points_per_cloud);
      const std::string rel = kinds[k] + "/" + kinds[k] + "_" + std::to_string(j) + ".xyz";
      greenhop::write_points_text(cloud, (fs::path(dir) / rel).string());
      manifest << rel << "\t" << kinds[k] << "\n";
    }
  }
  manifest.close();
  return manifest_path;
}

/// Fresh scratch directory under the current working directory.
inline std::string test_dir(const std::string& name) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::path("scratch") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

}  // namespace synth
