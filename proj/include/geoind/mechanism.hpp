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

#ifndef GEOIND_MECHANISM_HPP_
#define GEOIND_MECHANISM_HPP_

// The planar Laplace mechanism. A point is released as origin + (r, theta)
// with theta uniform on [0, 2pi) and r drawn from the radial marginal
// eps^2 r exp(-eps r) by inverse transform. Epsilon is per meter throughout.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geoind/error.hpp"
#include "geoind/geo.hpp"
#include "geoind/numerics.hpp"
#include "geoind/random.hpp"

namespace geoind {

inline constexpr int kDefaultMaxAttempts = 1000;

/// Epsilon (per meter), optionally remembering the (level, radius) pair it
/// was calibrated from: "level-privacy within radius" means eps = level/r.
class PrivacyParams {
 public:
  static PrivacyParams FromEpsilon(double epsilon) {
    detail::RequirePositiveEpsilon(epsilon);
    return PrivacyParams(epsilon, std::nullopt, std::nullopt);
  }

  static PrivacyParams Calibrate(double level, double radius_m) {
    if (!(level > 0.0) || !std::isfinite(level)) {
      throw Error(ErrorCode::kDomain, "privacy level must be positive, got " +
                                          std::to_string(level));
    }
    if (!(radius_m > 0.0) || !std::isfinite(radius_m)) {
      throw Error(ErrorCode::kDomain, "protection radius must be positive, got " +
                                          std::to_string(radius_m));
    }
    const double epsilon = level / radius_m;
    detail::RequirePositiveEpsilon(epsilon);
    return PrivacyParams(epsilon, level, radius_m);
  }

  double epsilon() const { return epsilon_; }
  std::optional<double> level() const { return level_; }
  std::optional<double> radius_m() const { return radius_m_; }

  /// Mean of the radial marginal (a Gamma(2, 1/eps) law).
  double ExpectedDistance() const { return 2.0 / epsilon_; }

 private:
  PrivacyParams(double epsilon, std::optional<double> level,
                std::optional<double> radius_m)
      : epsilon_(epsilon), level_(level), radius_m_(radius_m) {}

  double epsilon_;
  std::optional<double> level_;
  std::optional<double> radius_m_;
};

struct PerturbResult {
  GeoPoint noisy;
  double applied_radius_m = 0.0;
  double applied_bearing_rad = 0.0;
  int attempts = 1;
  // Set whenever the output came out of a retry loop: rejection sampling
  // conditions the release on the region and voids the formal guarantee.
  bool guarantee_weakened = false;
};

/// A closed ring of vertices in (lat, lon) degrees. A repeated first vertex
/// at the end is accepted and dropped.
using Ring = std::vector<GeoPoint>;

/// Outer ring followed by optional holes; membership is the even-odd rule
/// over all rings of the polygon.
using Polygon = std::vector<Ring>;

/// Union of polygons. Edges are straight lines in the lat/lon plane, and
/// rings crossing the antimeridian are not supported. A mask with no
/// polygons is the empty region.
class RegionMask {
 public:
  RegionMask() = default;

  static RegionMask Make(std::vector<Polygon> polygons) {
    for (std::size_t i = 0; i < polygons.size(); ++i) {
      auto& polygon = polygons[i];
      if (polygon.empty()) {
        throw Error(ErrorCode::kInvalidMask,
                    "polygon " + std::to_string(i) + " has no rings");
      }
      for (auto& ring : polygon) {
        if (ring.size() >= 2 && ring.front() == ring.back()) ring.pop_back();
        if (ring.size() < 3) {
          throw Error(ErrorCode::kInvalidMask,
                      "polygon " + std::to_string(i) +
                          " has a ring with fewer than 3 distinct vertices");
        }
      }
    }
    RegionMask mask;
    mask.polygons_ = std::move(polygons);
    return mask;
  }

  bool Contains(const GeoPoint& p) const {
    for (const auto& polygon : polygons_) {
      bool inside = false;
      for (const auto& ring : polygon) {
        if (RingCrossingParity(ring, p)) inside = !inside;
      }
      if (inside) return true;
    }
    return false;
  }

  const std::vector<Polygon>& polygons() const { return polygons_; }

 private:
  static bool RingCrossingParity(const Ring& ring, const GeoPoint& p) {
    bool odd = false;
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const GeoPoint& a = ring[i];
      const GeoPoint& b = ring[j];
      if ((a.lat > p.lat) != (b.lat > p.lat)) {
        const double lon_at =
            a.lon + (p.lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat);
        if (p.lon < lon_at) odd = !odd;
      }
    }
    return odd;
  }

  std::vector<Polygon> polygons_;
};

/// One draw of polar Laplace noise. Bearing and radius come from the two
/// independent streams of `rng`.
inline Displacement SampleNoise(const PrivacyParams& params, NoiseRng& rng) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double theta = kTwoPi * rng.NextAngleUniform();
  if (theta >= kTwoPi) theta = 0.0;
  const double r = RadialInverseCdf(rng.NextRadiusUniform(), params.epsilon());
  return Displacement{r, theta};
}

inline PerturbResult Perturb(const GeoPoint& p, const PrivacyParams& params,
                             NoiseRng& rng) {
  const Displacement d = SampleNoise(params, rng);
  return PerturbResult{DestinationPoint(p, d), d.radius_m, d.bearing_rad, 1,
                       false};
}

/// Redraws until the released point lies in `mask`. Throws ExhaustedError
/// once `max_attempts` draws have all fallen outside.
inline PerturbResult PerturbConstrained(const GeoPoint& p,
                                        const PrivacyParams& params,
                                        const RegionMask& mask,
                                        int max_attempts, NoiseRng& rng) {
  if (max_attempts < 1) {
    throw Error(ErrorCode::kDomain, "max_attempts must be >= 1, got " +
                                        std::to_string(max_attempts));
  }
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    PerturbResult result = Perturb(p, params, rng);
    if (mask.Contains(result.noisy)) {
      result.attempts = attempt;
      result.guarantee_weakened = attempt > 1;
      return result;
    }
  }
  throw ExhaustedError(max_attempts);
}

/// Natural log of LaplaceDensity; stays finite where the density underflows.
inline double LogLaplaceDensity(const PrivacyParams& params,
                                const GeoPoint& center, const GeoPoint& x) {
  const double eps = params.epsilon();
  return std::log(eps * eps / (2.0 * std::numbers::pi)) -
         eps * GreatCircleDistance(center, x);
}

/// Density of the planar Laplace distribution centred at `center`,
/// (eps^2 / 2pi) exp(-eps d(center, x)), with d the great-circle distance.
inline double LaplaceDensity(const PrivacyParams& params,
                             const GeoPoint& center, const GeoPoint& x) {
  const double eps = params.epsilon();
  return eps * eps / (2.0 * std::numbers::pi) *
         std::exp(-eps * GreatCircleDistance(center, x));
}

}  // namespace geoind

#endif  // GEOIND_MECHANISM_HPP_
