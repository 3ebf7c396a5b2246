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

#include "geoind/numerics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "gtest/gtest.h"

namespace geoind {
namespace {

// Independent oracle: bisection on w e^w = x over w in [-800, -1], where
// w e^w decreases monotonically from 0- to -1/e.
double BisectLambertWm1(double x) {
  double lo = -800.0;
  double hi = -1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid * std::exp(mid) > x ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Independent oracle: bisection on the closed-form CDF.
double BisectRadius(double z, double eps) {
  auto cdf = [eps](double r) { return 1.0 - (1.0 + eps * r) * std::exp(-eps * r); };
  double lo = 0.0;
  double hi = 100.0 / eps;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < z ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double RelativeResidual(double x) {
  const double w = LambertWMinus1(x);
  return std::abs(w * std::exp(w) - x) / std::abs(x);
}

TEST(LambertWMinus1, BranchPointIsMinusOne) {
  EXPECT_EQ(LambertWMinus1(kMinusInvE), -1.0);
  EXPECT_NEAR(LambertWMinus1(-std::exp(-1.0)), -1.0, 1e-12);
  EXPECT_EQ(LambertWMinus1(std::nextafter(kMinusInvE, -1.0)), -1.0);
}

TEST(LambertWMinus1, MatchesBisectionOracle) {
  // Frozen from the bisection oracle (and an mpmath cross-check).
  EXPECT_NEAR(BisectLambertWm1(-0.1), -3.5771520639573, 1e-12);
  EXPECT_NEAR(BisectLambertWm1(-0.3), -1.78133702342163, 1e-12);

  EXPECT_NEAR(LambertWMinus1(-0.1), -3.5771520639573, 1e-12);
  EXPECT_NEAR(LambertWMinus1(-0.3), -1.78133702342163, 1e-12);
  for (double x : {-0.36, -0.25, -0.05, -1e-3, -1e-8, -1e-100}) {
    EXPECT_NEAR(LambertWMinus1(x), BisectLambertWm1(x),
                1e-12 * std::abs(BisectLambertWm1(x)))
        << "x = " << x;
  }
}

TEST(LambertWMinus1, ResidualOnDenseGrid) {
  constexpr int kPoints = 10'000;
  double worst = 0.0;
  for (int i = 1; i <= kPoints; ++i) {
    const double x = kMinusInvE * (1.0 - static_cast<double>(i) / (kPoints + 1));
    const double w = LambertWMinus1(x);
    ASSERT_LE(w, -1.0) << "x = " << x;
    worst = std::max(worst, RelativeResidual(x));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(LambertWMinus1, ResidualNearBranchPoint) {
  for (double offset : {1e-16, 1e-14, 1e-12, 1e-10, 1e-8, 1e-6, 1e-4, 1e-3, 2e-3}) {
    const double x = kMinusInvE + offset;
    EXPECT_LE(RelativeResidual(x), 1e-12) << "offset = " << offset;
    EXPECT_LE(LambertWMinus1(x), -1.0);
  }
}

TEST(LambertWMinus1, TinyArguments) {
  for (double x : {-1e-20, -1e-200, -std::numeric_limits<double>::min()}) {
    const double w = LambertWMinus1(x);
    EXPECT_TRUE(std::isfinite(w));
    // w + ln(-w) = ln(-x) is the underflow-free form of the residual.
    EXPECT_NEAR(w + std::log(-w), std::log(-x), 1e-12 * std::abs(std::log(-x)));
  }
}

TEST(LambertWMinus1, DomainErrors) {
  EXPECT_THROW(LambertWMinus1(0.0), Error);
  EXPECT_THROW(LambertWMinus1(0.5), Error);
  EXPECT_THROW(LambertWMinus1(-0.4), Error);
  EXPECT_THROW(LambertWMinus1(std::nan("")), Error);
  try {
    LambertWMinus1(-1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDomain);
  }
}

TEST(RadialCdf, Examples) {
  EXPECT_EQ(RadialCdf(0.0, 0.1), 0.0);
  EXPECT_EQ(RadialCdf(0.0, 7.0), 0.0);
  EXPECT_NEAR(RadialCdf(16.7834699001666, 0.1), 0.5, 1e-12);
  EXPECT_NEAR(RadialCdf(1000.0, 0.1), 1.0, 1e-9);
}

TEST(RadialCdf, MonotoneInRadius) {
  double prev = 0.0;
  for (double r = 0.0; r < 500.0; r += 0.25) {
    const double f = RadialCdf(r, 0.05);
    EXPECT_GE(f, prev);
    prev = f;
  }
}

TEST(RadialCdf, DomainErrors) {
  EXPECT_THROW(RadialCdf(-1.0, 0.1), Error);
  EXPECT_THROW(RadialCdf(1.0, 0.0), Error);
  EXPECT_THROW(RadialCdf(1.0, -0.1), Error);
}

TEST(RadialInverseCdf, Examples) {
  EXPECT_EQ(RadialInverseCdf(0.0, 0.1), 0.0);
  EXPECT_NEAR(BisectRadius(0.5, 0.1), 16.7834699001666, 1e-9);
  EXPECT_NEAR(RadialInverseCdf(0.5, 0.1), 16.7834699001666, 1e-9);
  const double r = RadialInverseCdf(0.9, 0.05);
  EXPECT_NEAR(RadialCdf(r, 0.05), 0.9, 1e-9);
  EXPECT_NEAR(r, BisectRadius(0.9, 0.05), 1e-8);
}

TEST(RadialInverseCdf, RoundTripOnGrid) {
  for (double eps : {0.5, 0.05, 0.001}) {
    for (int i = 0; i <= 20'000; ++i) {
      const double z = 0.999999 * i / 20'000.0;
      ASSERT_NEAR(RadialCdf(RadialInverseCdf(z, eps), eps), z, 1e-9)
          << "z = " << z << " eps = " << eps;
    }
  }
}

TEST(RadialInverseCdf, Monotonicity) {
  for (double eps : {0.5, 0.05, 0.001}) {
    double prev = -1.0;
    for (int i = 0; i < 5000; ++i) {
      const double r = RadialInverseCdf(i / 5000.0, eps);
      EXPECT_GT(r, prev);
      prev = r;
    }
  }
  for (double z : {1e-6, 0.3, 0.9}) {
    EXPECT_GT(RadialInverseCdf(z, 0.01), RadialInverseCdf(z, 0.02));
    EXPECT_GT(RadialInverseCdf(z, 0.02), RadialInverseCdf(z, 0.5));
  }
}

TEST(RadialInverseCdf, EpsilonIsAScale) {
  for (double z : {1e-9, 0.01, 0.5, 0.99, 0.999999}) {
    const double unit = RadialInverseCdf(z, 1.0);
    for (double eps : {0.5, 0.05, 0.001}) {
      EXPECT_NEAR(RadialInverseCdf(z, eps), unit / eps, 1e-9 * unit / eps);
    }
  }
}

TEST(RadialInverseCdf, LargestProbabilityIsFinite) {
  const double z = std::nextafter(1.0, 0.0);
  const double r = RadialInverseCdf(z, 1.0);
  EXPECT_TRUE(std::isfinite(r));
  EXPECT_NEAR(r, 40.4615674830875, 1e-9);
}

TEST(RadialInverseCdf, DomainErrors) {
  EXPECT_THROW(RadialInverseCdf(1.0, 0.1), Error);
  EXPECT_THROW(RadialInverseCdf(-0.1, 0.1), Error);
  EXPECT_THROW(RadialInverseCdf(0.5, 0.0), Error);
  EXPECT_THROW(RadialInverseCdf(0.5, -1.0), Error);
}

}  // namespace
}  // namespace geoind
