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

#ifndef GEOIND_RANDOM_HPP_
#define GEOIND_RANDOM_HPP_

// Reproducible randomness. The generator family is fixed project-wide so that
// a seed pins output bit-for-bit on every conforming standard library:
//
//   * seeds are expanded with SplitMix64,
//   * each stream is a std::mt19937_64 (its output sequence is fixed by the
//     C++ standard),
//   * a 64-bit draw maps to [0, 1) as (bits >> 11) * 2^-53.
//
// std::uniform_real_distribution is deliberately not used: its algorithm is
// implementation-defined.

#include <cstdint>
#include <random>

namespace geoind {

inline std::uint64_t SplitMix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed for substream `stream` of `seed`. Distinct streams of one seed, and
/// the same stream of distinct seeds, give unrelated generators.
inline std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed;
  std::uint64_t mixed = SplitMix64(state);
  state = mixed ^ (stream * 0xD1B54A32D192ED03ULL);
  return SplitMix64(state);
}

inline double ToUnitInterval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Seed from the OS entropy source, limited to 53 bits so that it survives
/// a round trip through a JSON number.
inline std::uint64_t EntropySeed() {
  std::random_device device;
  const std::uint64_t hi = device();
  const std::uint64_t lo = device();
  return ((hi << 32) | lo) & ((std::uint64_t{1} << 53) - 1);
}

/// The caller-owned randomness of one perturbation pipeline: two independent
/// uniform streams, one feeding bearings and one feeding radii. Not
/// thread-safe; use one instance per thread.
class NoiseRng {
 public:
  explicit NoiseRng(std::uint64_t seed)
      : seed_(seed),
        angle_engine_(DeriveSeed(seed, 0)),
        radius_engine_(DeriveSeed(seed, 1)) {}

  std::uint64_t seed() const { return seed_; }

  double NextAngleUniform() { return ToUnitInterval(angle_engine_()); }
  double NextRadiusUniform() { return ToUnitInterval(radius_engine_()); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 angle_engine_;
  std::mt19937_64 radius_engine_;
};

}  // namespace geoind

#endif  // GEOIND_RANDOM_HPP_
