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

// Releases one site at a few privacy levels and prints how far each noisy
// copy landed from the original.

#include <cstdio>

#include "geoind/geoind.hpp"

int main() {
  const auto site = geoind::GeoPoint::Make(26.689, -80.018);
  geoind::NoiseRng rng(42);
  for (double epsilon : {0.1, 0.05, 0.01}) {
    const auto params = geoind::PrivacyParams::FromEpsilon(epsilon);
    const auto result = geoind::Perturb(site, params, rng);
    std::printf("eps=%-5g  released (%.6f, %.6f)  %.1f m away (mean %.0f m)\n",
                epsilon, result.noisy.lat, result.noisy.lon,
                geoind::GreatCircleDistance(site, result.noisy),
                params.ExpectedDistance());
  }
  // ln 2 within 100 m.
  const auto calibrated = geoind::PrivacyParams::Calibrate(0.6931471805599453, 100);
  std::printf("l=ln2 within 100 m -> eps = %.6g per meter\n", calibrated.epsilon());
}
