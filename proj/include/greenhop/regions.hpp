#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "greenhop/errors.hpp"
#include "greenhop/point_cloud.hpp"
#include "greenhop/strings.hpp"

namespace greenhop {

constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }

/// One geometric aggregation region over the normalized cloud.
///
/// kGlobal        : every point.
/// kCone          : symmetric double cone about `axis` with half-angle `angle`;
///                  membership |p.a| >= |p| cos(angle). Includes the origin.
/// kInvertedCone  : cone with vertex at sign*delta*axis opening back toward
///                  the origin, restricted to the hemisphere sign*(p.a) >= 0.
struct Region {
  enum class Kind { kGlobal, kCone, kInvertedCone };

  Kind kind = Kind::kGlobal;
  int axis = 0;       // 0=x, 1=y, 2=z
  int sign = +1;      // inverted cones only
  double angle = 0.0; // half-angle, radians
  double delta = 0.0; // vertex offset, inverted cones only

  bool contains(const Point& p) const {
    switch (kind) {
      case Kind::kGlobal:
        return true;
      case Kind::kCone: {
        const double along = p(axis);
        return std::abs(along) >= p.norm() * std::cos(angle);
      }
      case Kind::kInvertedCone: {
        const double s = static_cast<double>(sign);
        if (s * p(axis) < 0.0) return false;
        Point vertex = Point::Zero();
        vertex(axis) = s * delta;
        const Point to_point = p - vertex;
        // Cone axis points from the vertex back toward the origin: -s*axis.
        return -s * to_point(axis) >= to_point.norm() * std::cos(angle);
      }
    }
    return false;
  }
};

/// Canonical region set: global, three symmetric cones (x, y, z), then six
/// inverted cones (+x, -x, +y, -y, +z, -z), in that order.
inline std::vector<Region> make_regions(double theta1_rad, double theta2_rad, double delta) {
  std::vector<Region> regions;
  regions.reserve(10);
  regions.push_back(Region{});
  for (int axis = 0; axis < 3; ++axis) {
    Region r;
    r.kind = Region::Kind::kCone;
    r.axis = axis;
    r.angle = theta1_rad;
    regions.push_back(r);
  }
  for (int axis = 0; axis < 3; ++axis) {
    for (int sign : {+1, -1}) {
      Region r;
      r.kind = Region::Kind::kInvertedCone;
      r.axis = axis;
      r.sign = sign;
      r.angle = theta2_rad;
      r.delta = delta;
      regions.push_back(r);
    }
  }
  return regions;
}

inline std::string region_to_string(const Region& r) {
  static const char* axis_names[3] = {"x", "y", "z"};
  switch (r.kind) {
    case Region::Kind::kGlobal:
      return "global";
    case Region::Kind::kCone:
      return std::string("cone ") + axis_names[r.axis] + " " + format_double(r.angle);
    case Region::Kind::kInvertedCone:
      return std::string("icone ") + (r.sign > 0 ? "+" : "-") + axis_names[r.axis] + " " +
             format_double(r.angle) + " " + format_double(r.delta);
  }
  throw NumericError("region_to_string: unknown region kind");
}

inline Region region_from_string(const std::string& line) {
  const std::vector<std::string> tokens = split(std::string(trim(line)), ' ');
  auto parse_axis = [](const std::string& name, int& axis, int& sign) {
    std::string base = name;
    sign = +1;
    if (!base.empty() && (base[0] == '+' || base[0] == '-')) {
      sign = base[0] == '-' ? -1 : +1;
      base = base.substr(1);
    }
    if (base == "x") axis = 0;
    else if (base == "y") axis = 1;
    else if (base == "z") axis = 2;
    else throw ModelFormatError("bad region axis '" + name + "'");
  };

  Region r;
  if (tokens.size() == 1 && tokens[0] == "global") return r;
  if (tokens.size() == 3 && tokens[0] == "cone") {
    r.kind = Region::Kind::kCone;
    int sign = +1;
    parse_axis(tokens[1], r.axis, sign);
    if (sign < 0) throw ModelFormatError("symmetric cone axis must be unsigned: " + line);
    r.angle = parse_double_strict(tokens[2], "region angle");
    return r;
  }
  if (tokens.size() == 4 && tokens[0] == "icone") {
    r.kind = Region::Kind::kInvertedCone;
    parse_axis(tokens[1], r.axis, r.sign);
    r.angle = parse_double_strict(tokens[2], "region angle");
    r.delta = parse_double_strict(tokens[3], "region delta");
    return r;
  }
  throw ModelFormatError("unrecognized region line '" + line + "'");
}

}  // namespace greenhop
