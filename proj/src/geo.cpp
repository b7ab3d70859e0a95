#include "meddispatch/geo.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace meddispatch {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

}  // namespace

bool valid_coordinates(const LatLon& p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 &&
         p.lat <= 90.0 && p.lon >= -180.0 && p.lon <= 180.0;
}

double haversine_km(const LatLon& a, const LatLon& b) {
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double dphi = (b.lat - a.lat) * kDegToRad;
  const double dlambda = (b.lon - a.lon) * kDegToRad;

  const double s_phi = std::sin(0.5 * dphi);
  const double s_lambda = std::sin(0.5 * dlambda);
  double h = s_phi * s_phi + std::cos(phi1) * std::cos(phi2) * s_lambda * s_lambda;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

double initial_bearing_deg(const LatLon& a, const LatLon& b) {
  if (a == b) {
    throw UndefinedBearing("bearing undefined for coincident points");
  }
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double dlambda = (b.lon - a.lon) * kDegToRad;

  const double y = std::sin(dlambda) * std::cos(phi2);
  const double x = std::cos(phi1) * std::sin(phi2) -
                   std::sin(phi1) * std::cos(phi2) * std::cos(dlambda);
  double deg = std::atan2(y, x) / kDegToRad;
  deg = std::fmod(deg + 360.0, 360.0);
  // fmod can return exactly 360 after rounding a tiny negative angle.
  if (deg >= 360.0) deg -= 360.0;
  return deg;
}

}  // namespace meddispatch
