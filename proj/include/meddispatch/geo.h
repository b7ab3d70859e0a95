#pragma once

#include <stdexcept>

namespace meddispatch {

// IUGG mean Earth radius.
inline constexpr double kEarthRadiusKm = 6371.0088;

struct LatLon {
  double lat = 0.0;  // decimal degrees, [-90, 90]
  double lon = 0.0;  // decimal degrees, [-180, 180]

  friend bool operator==(const LatLon&, const LatLon&) = default;
};

class UndefinedBearing : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

bool valid_coordinates(const LatLon& p);

// Great-circle distance on the sphere of radius kEarthRadiusKm.
double haversine_km(const LatLon& a, const LatLon& b);

// Forward azimuth from a to b in [0, 360), clockwise from true north.
// Throws UndefinedBearing when a and b coincide.
double initial_bearing_deg(const LatLon& a, const LatLon& b);

}  // namespace meddispatch
