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

#ifndef GEOIND_STATS_HPP_
#define GEOIND_STATS_HPP_

// Validation harness: sample clouds around a site, summarize them, and
// reproduce the nine-epsilon mean-distance table.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "geoind/error.hpp"
#include "geoind/format.hpp"
#include "geoind/geo.hpp"
#include "geoind/mechanism.hpp"
#include "geoind/numerics.hpp"
#include "geoind/random.hpp"

namespace geoind {

inline constexpr std::array<double, 9> kTable1Epsilons = {
    0.5, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001};

inline constexpr int kAngleBins = 36;

struct CloudStats {
  std::size_t n = 0;
  double mean_distance_m = 0.0;
  double median_distance_m = 0.0;
  double expected_mean_m = 0.0;  // 2 / epsilon
  double angle_chi2 = 0.0;       // kAngleBins equal bins on [0, 2pi)
  double radius_ks = 0.0;        // sup |F_n - RadialCdf|
};

/// n independent releases of `p`, all drawn from one NoiseRng(seed). The
/// first element equals Perturb(p, params, NoiseRng(seed)).noisy.
inline std::vector<GeoPoint> GenerateCloud(const GeoPoint& p,
                                           const PrivacyParams& params,
                                           std::size_t n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::kEmptyInput, "cloud size must be >= 1");
  NoiseRng rng(seed);
  std::vector<GeoPoint> cloud;
  cloud.reserve(n);
  for (std::size_t i = 0; i < n; ++i) cloud.push_back(Perturb(p, params, rng).noisy);
  return cloud;
}

/// Pearson statistic of `angles` (radians in [0, 2pi)) against the uniform
/// law over `bins` equal-width bins.
inline double AngleChiSquare(const std::vector<double>& angles,
                             int bins = kAngleBins) {
  if (angles.empty()) throw Error(ErrorCode::kEmptyInput, "no angles");
  std::vector<std::size_t> counts(bins, 0);
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  for (double a : angles) {
    auto bin = static_cast<int>(a / kTwoPi * bins);
    counts[std::clamp(bin, 0, bins - 1)]++;
  }
  const double expected = static_cast<double>(angles.size()) / bins;
  double chi2 = 0.0;
  for (auto c : counts) {
    const double diff = static_cast<double>(c) - expected;
    chi2 += diff * diff / expected;
  }
  return chi2;
}

/// One-sample Kolmogorov-Smirnov statistic of `radii` against RadialCdf.
inline double RadiusKsStatistic(std::vector<double> radii, double epsilon) {
  if (radii.empty()) throw Error(ErrorCode::kEmptyInput, "no radii");
  std::sort(radii.begin(), radii.end());
  const double n = static_cast<double>(radii.size());
  double d = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double f = RadialCdf(radii[i], epsilon);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

/// Upper critical value of the chi-square law, e.g. (35, 0.999) -> 66.62.
inline double ChiSquareCriticalValue(int degrees_of_freedom, double confidence) {
  boost::math::chi_squared dist(degrees_of_freedom);
  return boost::math::quantile(dist, confidence);
}

/// Critical value of the one-sample KS statistic at level `alpha`: the
/// asymptotic Kolmogorov quantile with Stephens' finite-sample correction.
inline double KsCriticalValue(std::size_t n, double alpha) {
  // Survival function of the Kolmogorov distribution.
  auto survival = [](double lambda) {
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double term = std::exp(-2.0 * k * k * lambda * lambda);
      sum += (k % 2 == 1 ? term : -term);
      if (term < 1e-18) break;
    }
    return 2.0 * sum;
  };
  double lo = 0.2;
  double hi = 5.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (survival(mid) > alpha ? lo : hi) = mid;
  }
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  return 0.5 * (lo + hi) / (sqrt_n + 0.12 + 0.11 / sqrt_n);
}

/// Standard error of the mean release distance, sqrt(2) / (eps sqrt(n)).
inline double MeanDistanceStandardError(double epsilon, std::size_t n) {
  return std::numbers::sqrt2 / (epsilon * std::sqrt(static_cast<double>(n)));
}

inline double Median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "median of nothing");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  if (values.size() % 2 == 1) return values[mid];
  const double upper = values[mid];
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

inline CloudStats Summarize(const GeoPoint& p,
                            const std::vector<GeoPoint>& cloud,
                            const PrivacyParams& params) {
  if (cloud.empty()) throw Error(ErrorCode::kEmptyInput, "cloud is empty");
  std::vector<double> distances;
  std::vector<double> bearings;
  distances.reserve(cloud.size());
  bearings.reserve(cloud.size());
  double sum = 0.0;
  for (const auto& q : cloud) {
    const double d = GreatCircleDistance(p, q);
    distances.push_back(d);
    bearings.push_back(InitialBearing(p, q));
    sum += d;
  }
  CloudStats stats;
  stats.n = cloud.size();
  stats.mean_distance_m = sum / static_cast<double>(cloud.size());
  stats.median_distance_m = Median(distances);
  stats.expected_mean_m = params.ExpectedDistance();
  stats.angle_chi2 = AngleChiSquare(bearings);
  stats.radius_ks = RadiusKsStatistic(std::move(distances), params.epsilon());
  return stats;
}

struct Table1Row {
  double epsilon = 0.0;
  std::size_t n = 0;
  double mean_m = 0.0;
  double median_m = 0.0;
  double expected_mean_m = 0.0;

  double standard_error_m() const { return MeanDistanceStandardError(epsilon, n); }
  bool WithinThreeStandardErrors() const {
    return std::abs(mean_m - expected_mean_m) <= 3.0 * standard_error_m();
  }
};

/// Mean/median release distance for each epsilon in kTable1Epsilons. Row i
/// is a cloud seeded with DeriveSeed(seed, i), so rows are independent and
/// can be computed in any order.
inline std::vector<Table1Row> Table1Report(const GeoPoint& p, std::size_t n,
                                           std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::kEmptyInput, "sample count must be >= 1");
  std::vector<Table1Row> rows;
  for (std::size_t i = 0; i < kTable1Epsilons.size(); ++i) {
    const auto params = PrivacyParams::FromEpsilon(kTable1Epsilons[i]);
    const auto cloud = GenerateCloud(p, params, n, DeriveSeed(seed, i));
    std::vector<double> distances;
    distances.reserve(n);
    double sum = 0.0;
    for (const auto& q : cloud) {
      distances.push_back(GreatCircleDistance(p, q));
      sum += distances.back();
    }
    rows.push_back(Table1Row{params.epsilon(), n, sum / static_cast<double>(n),
                             Median(std::move(distances)),
                             params.ExpectedDistance()});
  }
  return rows;
}

inline std::string FormatTable1Csv(const std::vector<Table1Row>& rows) {
  std::string out = "epsilon,n,mean_m,median_m,expected_mean_m\n";
  for (const auto& row : rows) {
    out += FormatFixed(row.epsilon, 3) + "," + std::to_string(row.n) + "," +
           FormatFixed(row.mean_m, 4) + "," + FormatFixed(row.median_m, 4) +
           "," + FormatFixed(row.expected_mean_m, 4) + "\n";
  }
  return out;
}

inline std::string FormatTable1Text(const std::vector<Table1Row>& rows) {
  auto pad = [](std::string s, std::size_t width) {
    if (s.size() < width) s.insert(0, width - s.size(), ' ');
    return s;
  };
  std::string out = pad("epsilon", 8) + pad("n", 8) + pad("mean_m", 12) +
                    pad("median_m", 12) + pad("expected_m", 12) +
                    pad("3se_band", 10) + "\n";
  for (const auto& row : rows) {
    out += pad(FormatFixed(row.epsilon, 3), 8) +
           pad(std::to_string(row.n), 8) + pad(FormatFixed(row.mean_m, 2), 12) +
           pad(FormatFixed(row.median_m, 2), 12) +
           pad(FormatFixed(row.expected_mean_m, 2), 12) +
           pad(row.WithinThreeStandardErrors() ? "ok" : "OUTSIDE", 10) + "\n";
  }
  return out;
}

}  // namespace geoind

#endif  // GEOIND_STATS_HPP_
