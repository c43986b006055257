#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "greenhop/regions.hpp"
#include "support/synthetic.hpp"

using namespace greenhop;

TEST_CASE("make_regions emits global, three cones, six inverted cones in order") {
  const auto regions = make_regions(deg_to_rad(75.0), deg_to_rad(45.0), 1.0);
  REQUIRE(regions.size() == 10);
  CHECK(regions[0].kind == Region::Kind::kGlobal);
  for (int i = 1; i <= 3; ++i) {
    CHECK(regions[static_cast<std::size_t>(i)].kind == Region::Kind::kCone);
    CHECK(regions[static_cast<std::size_t>(i)].axis == i - 1);
  }
  for (int i = 4; i < 10; ++i)
    CHECK(regions[static_cast<std::size_t>(i)].kind == Region::Kind::kInvertedCone);
  CHECK(regions[4].axis == 0);
  CHECK(regions[4].sign == +1);
  CHECK(regions[5].axis == 0);
  CHECK(regions[5].sign == -1);
  CHECK(regions[9].axis == 2);
  CHECK(regions[9].sign == -1);
}

TEST_CASE("global region contains everything") {
  const Region g{};
  CHECK(g.contains(Point(0.0, 0.0, 0.0)));
  CHECK(g.contains(Point(5.0, -3.0, 100.0)));
}

TEST_CASE("symmetric cone membership") {
  Region cone;
  cone.kind = Region::Kind::kCone;
  cone.axis = 2;
  cone.angle = deg_to_rad(75.0);

  CHECK(cone.contains(Point(0.0, 0.0, 1.0)));     // on the axis
  CHECK(cone.contains(Point(0.0, 0.0, -1.0)));    // double cone: mirror side
  CHECK(!cone.contains(Point(1.0, 0.0, 0.0)));    // equatorial, 90 degrees off
  CHECK(cone.contains(Point(0.0, 0.0, 0.0)));     // centroid: included by convention

  // 60 degrees off-axis is inside a 75-degree cone, 80 degrees is not.
  const Point at60(std::sin(deg_to_rad(60.0)), 0.0, std::cos(deg_to_rad(60.0)));
  const Point at80(std::sin(deg_to_rad(80.0)), 0.0, std::cos(deg_to_rad(80.0)));
  CHECK(cone.contains(at60));
  CHECK(!cone.contains(at80));
  CHECK(cone.contains(-at60));  // mirror invariance
  CHECK(!cone.contains(-at80));
}

TEST_CASE("symmetric cone membership grows with the half-angle") {
  Rng rng(61);
  Region narrow, wide;
  narrow.kind = wide.kind = Region::Kind::kCone;
  narrow.axis = wide.axis = 1;
  narrow.angle = deg_to_rad(30.0);
  wide.angle = deg_to_rad(70.0);
  int narrow_count = 0, wide_count = 0;
  for (int i = 0; i < 500; ++i) {
    const Point p = synth::random_unit_vector(rng);
    const bool in_narrow = narrow.contains(p);
    if (in_narrow) CHECK(wide.contains(p));  // monotone coverage
    narrow_count += in_narrow;
    wide_count += wide.contains(p);
  }
  CHECK(narrow_count < wide_count);
}

TEST_CASE("inverted cone membership with vertex offset") {
  Region icone;
  icone.kind = Region::Kind::kInvertedCone;
  icone.axis = 2;
  icone.sign = +1;
  icone.angle = deg_to_rad(45.0);
  icone.delta = 1.0;

  CHECK(icone.contains(Point(0.0, 0.0, 0.5)));    // on the axis below the vertex
  CHECK(icone.contains(Point(0.0, 0.0, 1.0)));    // the vertex itself
  CHECK(icone.contains(Point(0.0, 0.0, 0.0)));    // origin: 0 degrees off the cone axis
  CHECK(icone.contains(Point(0.3, 0.0, 0.1)));
  CHECK(!icone.contains(Point(1.2, 0.0, 0.0)));   // outside the 45-degree opening
  CHECK(!icone.contains(Point(0.0, 0.0, -0.2)));  // behind the base plane
  CHECK(!icone.contains(Point(0.3, 0.0, -0.01))); // just behind the base plane

  Region mirrored = icone;
  mirrored.sign = -1;
  CHECK(mirrored.contains(Point(0.0, 0.0, -0.5)));
  CHECK(!mirrored.contains(Point(0.0, 0.0, 0.2)));
}

TEST_CASE("region strings round-trip") {
  const auto regions = make_regions(deg_to_rad(75.0), deg_to_rad(45.0), 1.0);
  for (const Region& r : regions) {
    const Region back = region_from_string(region_to_string(r));
    CHECK(back.kind == r.kind);
    CHECK(back.axis == r.axis);
    CHECK(back.angle == r.angle);
    if (r.kind == Region::Kind::kInvertedCone) {
      CHECK(back.sign == r.sign);
      CHECK(back.delta == r.delta);
    }
  }
  CHECK_THROWS_AS(region_from_string("pyramid x 1.0"), ModelFormatError);
  CHECK_THROWS_AS(region_from_string("cone w 1.0"), ModelFormatError);
  CHECK_THROWS_AS(region_from_string("cone -x 1.0"), ModelFormatError);
}
