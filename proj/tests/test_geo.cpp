#include <doctest.h>

#include <random>

#include "meddispatch/geo.h"
#include "test_support.h"

using namespace meddispatch;
using testsupport::chord_distance_km;

TEST_CASE("haversine matches the chord formula on random pairs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lat(-85.0, 85.0), lon(-180.0, 180.0);
  for (int i = 0; i < 500; ++i) {
    const LatLon a{lat(rng), lon(rng)}, b{lat(rng), lon(rng)};
    const double expected = chord_distance_km(a, b);
    CHECK(haversine_km(a, b) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("one degree of latitude is R pi / 180") {
  const double expected = kEarthRadiusKm * std::numbers::pi / 180.0;
  CHECK(haversine_km({40.0, -81.0}, {41.0, -81.0}) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(haversine_km({0.0, 0.0}, {0.0, 1.0}) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("haversine is zero on coincident points and symmetric") {
  const LatLon p{41.5, -81.6};
  CHECK(haversine_km(p, p) == 0.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lat(-80.0, 80.0), lon(-179.0, 179.0);
  for (int i = 0; i < 200; ++i) {
    const LatLon a{lat(rng), lon(rng)}, b{lat(rng), lon(rng)};
    CHECK(haversine_km(a, b) == haversine_km(b, a));
  }
}

TEST_CASE("haversine satisfies the triangle inequality") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lat(-80.0, 80.0), lon(-179.0, 179.0);
  for (int i = 0; i < 300; ++i) {
    const LatLon a{lat(rng), lon(rng)}, b{lat(rng), lon(rng)}, c{lat(rng), lon(rng)};
    CHECK(haversine_km(a, c) <= haversine_km(a, b) + haversine_km(b, c) + 1e-9);
  }
}

TEST_CASE("antipodal points are half the circumference apart") {
  CHECK(haversine_km({10.0, 20.0}, {-10.0, -160.0}) == doctest::Approx(std::numbers::pi * kEarthRadiusKm));
}

TEST_CASE("bearing in the four cardinal directions") {
  CHECK(initial_bearing_deg({40.0, -81.0}, {41.0, -81.0}) == doctest::Approx(0.0));
  CHECK(initial_bearing_deg({0.0, 10.0}, {0.0, 11.0}) == doctest::Approx(90.0));
  CHECK(initial_bearing_deg({41.0, -81.0}, {40.0, -81.0}) == doctest::Approx(180.0));
  CHECK(initial_bearing_deg({0.0, 11.0}, {0.0, 10.0}) == doctest::Approx(270.0));
}

TEST_CASE("bearing stays in [0, 360) and lands in the expected quadrant") {
  const LatLon c{41.0, -81.0};
  const double ne = initial_bearing_deg(c, {41.2, -80.8});
  const double se = initial_bearing_deg(c, {40.8, -80.8});
  const double sw = initial_bearing_deg(c, {40.8, -81.2});
  const double nw = initial_bearing_deg(c, {41.2, -81.2});
  CHECK((ne > 0.0 && ne < 90.0));
  CHECK((se > 90.0 && se < 180.0));
  CHECK((sw > 180.0 && sw < 270.0));
  CHECK((nw > 270.0 && nw < 360.0));
}

TEST_CASE("bearing between coincident points is undefined") {
  CHECK_THROWS_AS(initial_bearing_deg({41.0, -81.0}, {41.0, -81.0}), UndefinedBearing);
}

TEST_CASE("coordinate validation") {
  CHECK(valid_coordinates({90.0, 180.0}));
  CHECK(valid_coordinates({-90.0, -180.0}));
  CHECK_FALSE(valid_coordinates({90.5, 0.0}));
  CHECK_FALSE(valid_coordinates({0.0, -180.5}));
  CHECK_FALSE(valid_coordinates({std::nan(""), 0.0}));
}
