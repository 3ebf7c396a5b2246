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

#ifndef GEOIND_NUMERICS_HPP_
#define GEOIND_NUMERICS_HPP_

// Scalar routines behind the radius sampler: the lower real branch W_{-1} of
// the Lambert W function and the radial CDF of the planar Laplace
// distribution, whose marginal density is eps^2 * r * exp(-eps * r).

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "geoind/error.hpp"

namespace geoind {

inline constexpr double kMinusInvE = -1.0 / std::numbers::e;

namespace detail {

// Series around the branch point in p = -sqrt(2 (1 + e x)).
inline double LambertWm1BranchSeries(double p) {
  constexpr double c[] = {
      -1.0,
      1.0,
      -1.0 / 3.0,
      11.0 / 72.0,
      -43.0 / 540.0,
      769.0 / 17280.0,
      -221.0 / 8505.0,
      680863.0 / 43545600.0,
      -1963.0 / 204120.0,
      226287557.0 / 37623398400.0,
  };
  double acc = 0.0;
  for (int i = 9; i >= 0; --i) acc = acc * p + c[i];
  return acc;
}

// Solves w e^w = x on the w <= -1 branch. `q` is 1 + e*x, supplied by the
// caller so that arguments near the branch point keep their precision.
inline double LambertWm1(double x, double q) {
  if (q <= 0.0) return -1.0;

  const double p = -std::sqrt(2.0 * q);
  if (q < 1e-3) return LambertWm1BranchSeries(p);

  double w;
  if (q < 0.3) {
    w = LambertWm1BranchSeries(p);
  } else {
    const double l1 = std::log(-x);
    const double l2 = std::log(-l1);
    w = l1 - l2 + l2 / l1;
  }

  // Halley on h(w) = w - x e^{-w}; with s = x e^{-w} evaluated in log space
  // the iteration neither overflows nor underflows for tiny |x|.
  const double log_minus_x = std::log(-x);
  for (int iter = 0; iter < 64; ++iter) {
    const double s = -std::exp(log_minus_x - w);
    const double h = w - s;
    const double dh = 1.0 + s;
    if (dh == 0.0) break;
    const double ratio = h / dh;
    double step = ratio / (1.0 + 0.5 * ratio * s / dh);
    double next = w - step;
    if (!(next <= -1.0)) next = 0.5 * (w - 1.0);
    step = w - next;
    w = next;
    if (std::abs(step) <= 1e-15 * std::abs(w)) break;
  }
  return w;
}

inline void RequirePositiveEpsilon(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorCode::kDomain,
                "epsilon must be a positive finite number (per meter), got " +
                    std::to_string(eps));
  }
}

}  // namespace detail

/// Lower branch W_{-1}(x) for x in [-1/e, 0). The result satisfies w <= -1
/// and w e^w = x to ~1e-15 relative; x = -1/e returns exactly -1.
/// Arguments within a few ulps of -1/e (rounding of the literal) are treated
/// as the branch point; anything below that throws ErrorCode::kDomain.
inline double LambertWMinus1(double x) {
  if (!(x < 0.0)) {
    throw Error(ErrorCode::kDomain,
                "W_{-1} is real only on [-1/e, 0), got " + std::to_string(x));
  }
  // Rounding of -1/e to a double leaves q uncertain by a few ulps; inside
  // that band the argument is the branch point.
  constexpr double kBranchBand = 8 * std::numeric_limits<double>::epsilon();
  const double q = std::fma(std::numbers::e, x, 1.0);
  if (q < -kBranchBand) {
    throw Error(ErrorCode::kDomain,
                "W_{-1} is real only on [-1/e, 0), got " + std::to_string(x));
  }
  if (q <= kBranchBand) return -1.0;
  return detail::LambertWm1(x, q);
}

/// P(R <= r) for the radial marginal: 1 - (1 + eps r) exp(-eps r).
inline double RadialCdf(double r, double eps) {
  detail::RequirePositiveEpsilon(eps);
  if (!(r >= 0.0)) {
    throw Error(ErrorCode::kDomain,
                "radius must be nonnegative, got " + std::to_string(r));
  }
  const double t = eps * r;
  return -std::expm1(-t) - t * std::exp(-t);
}

/// Inverse of RadialCdf: r = -(W_{-1}((z - 1)/e) + 1) / eps.
///
/// Any z in [0, 1) is accepted. As z approaches 1 the argument of W_{-1}
/// approaches 0 from below and r grows without bound, but stays finite for
/// every representable z < 1 (about 40.46/eps at the largest one).
inline double RadialInverseCdf(double z, double eps) {
  detail::RequirePositiveEpsilon(eps);
  if (!(z >= 0.0 && z < 1.0)) {
    throw Error(ErrorCode::kDomain,
                "probability must lie in [0, 1), got " + std::to_string(z));
  }
  const double x = (z - 1.0) / std::numbers::e;
  const double w = detail::LambertWm1(x, z);
  const double r = -(w + 1.0) / eps;
  return r > 0.0 ? r : 0.0;
}

}  // namespace geoind

#endif  // GEOIND_NUMERICS_HPP_
