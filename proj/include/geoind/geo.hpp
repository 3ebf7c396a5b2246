// Copyright 2026 The geoind Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GEOIND_GEO_HPP_
#define GEOIND_GEO_HPP_

// Spherical-earth geodesy for applying a polar displacement to a
// latitude/longitude point. Bearings are radians clockwise from north.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "geoind/error.hpp"

namespace geoind {

inline constexpr double kEarthRadiusMeters = 6'371'000.0;

inline constexpr double DegToRad(double deg) {
  return deg * (std::numbers::pi / 180.0);
}
inline constexpr double RadToDeg(double rad) {
  return rad * (180.0 / std::numbers::pi);
}

/// Maps any finite longitude into [-180, 180). Values already in range are
/// returned unchanged.
inline double NormalizeLongitude(double lon) {
  if (lon >= -180.0 && lon < 180.0) return lon;
  double x = std::fmod(lon + 180.0, 360.0);
  if (x < 0.0) x += 360.0;
  x -= 180.0;
  return x >= 180.0 ? -180.0 : x;
}

/// WGS-84 style coordinate in decimal degrees. Construct through
/// GeoPoint::Make to get range checks and longitude normalization.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  /// Accepts lat in [-90, 90] and lon in [-180, 180]; lon = 180 maps to -180.
  /// Error messages never echo the rejected coordinate.
  static GeoPoint Make(double lat, double lon) {
    if (!std::isfinite(lat) || lat < -90.0 || lat > 90.0) {
      throw Error(ErrorCode::kCoordinateRange,
                  "latitude must lie in [-90, 90]");
    }
    if (!std::isfinite(lon) || lon < -180.0 || lon > 180.0) {
      throw Error(ErrorCode::kCoordinateRange,
                  "longitude must lie in [-180, 180]");
    }
    return GeoPoint{lat, NormalizeLongitude(lon)};
  }

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// A polar offset: `radius_m` meters along initial bearing `bearing_rad`.
struct Displacement {
  double radius_m = 0.0;
  double bearing_rad = 0.0;

  static Displacement Make(double radius_m, double bearing_rad) {
    if (!std::isfinite(radius_m) || radius_m < 0.0) {
      throw Error(ErrorCode::kDomain, "displacement radius must be >= 0, got " +
                                          std::to_string(radius_m));
    }
    if (!std::isfinite(bearing_rad)) {
      throw Error(ErrorCode::kDomain, "bearing must be finite");
    }
    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    double theta = std::fmod(bearing_rad, kTwoPi);
    if (theta < 0.0) theta += kTwoPi;
    if (theta >= kTwoPi) theta = 0.0;
    return Displacement{radius_m, theta};
  }

  friend bool operator==(const Displacement&, const Displacement&) = default;
};

/// Haversine distance in meters on a sphere of radius kEarthRadiusMeters.
inline double GreatCircleDistance(const GeoPoint& a, const GeoPoint& b) {
  const double phi1 = DegToRad(a.lat);
  const double phi2 = DegToRad(b.lat);
  const double s_dphi = std::sin(0.5 * (phi2 - phi1));
  const double s_dlambda = std::sin(0.5 * DegToRad(b.lon - a.lon));
  double h = s_dphi * s_dphi +
             std::cos(phi1) * std::cos(phi2) * s_dlambda * s_dlambda;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusMeters * std::atan2(std::sqrt(h), std::sqrt(1 - h));
}

/// Initial bearing from `from` towards `to`, in [0, 2pi). Zero when the
/// points coincide.
inline double InitialBearing(const GeoPoint& from, const GeoPoint& to) {
  const double phi1 = DegToRad(from.lat);
  const double phi2 = DegToRad(to.lat);
  const double dlambda = DegToRad(to.lon - from.lon);
  const double y = std::sin(dlambda) * std::cos(phi2);
  const double x = std::cos(phi1) * std::sin(phi2) -
                   std::sin(phi1) * std::cos(phi2) * std::cos(dlambda);
  double theta = std::atan2(y, x);
  if (theta < 0.0) theta += 2.0 * std::numbers::pi;
  if (theta >= 2.0 * std::numbers::pi) theta = 0.0;
  return theta;
}

/// The point reached by travelling `d.radius_m` along the great circle that
/// leaves `origin` on bearing `d.bearing_rad`.
inline GeoPoint DestinationPoint(const GeoPoint& origin,
                                 const Displacement& d) {
  if (d.radius_m == 0.0) return origin;
  const double delta = d.radius_m / kEarthRadiusMeters;
  const double phi1 = DegToRad(origin.lat);
  const double lambda1 = DegToRad(origin.lon);
  const double sin_phi1 = std::sin(phi1);
  const double cos_phi1 = std::cos(phi1);
  const double sin_delta = std::sin(delta);
  const double cos_delta = std::cos(delta);

  const double sin_phi2 = std::clamp(
      sin_phi1 * cos_delta + cos_phi1 * sin_delta * std::cos(d.bearing_rad),
      -1.0, 1.0);
  const double phi2 = std::asin(sin_phi2);
  const double lambda2 =
      lambda1 + std::atan2(std::sin(d.bearing_rad) * sin_delta * cos_phi1,
                           cos_delta - sin_phi1 * sin_phi2);
  return GeoPoint{RadToDeg(phi2), NormalizeLongitude(RadToDeg(lambda2))};
}

}  // namespace geoind

#endif  // GEOIND_GEO_HPP_
