// Copyright 2026 The biosim Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

#include "biosim/vec3.hpp"

namespace biosim {

/// SplitMix64: a 64-bit generator whose whole state is one word, so a fresh
/// stream per (seed, step, agent) costs nothing to create. Satisfies
/// UniformRandomBitGenerator and works with the <random> distributions.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t state = 0) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Mixes an ordered list of words into one well-distributed stream key.
constexpr std::uint64_t mix_key(std::uint64_t a, std::uint64_t b) {
  SplitMix64 g(a ^ (b + 0x632be59bd9b4e019ULL + (a << 6) + (a >> 2)));
  return g();
}

/// Deterministic random source for one simulation run. Streams are derived
/// from (seed, step, subject id, salt) and never depend on the worker that
/// happens to execute the subject.
class RandomStream {
 public:
  explicit constexpr RandomStream(std::uint64_t seed = 0) : seed_(seed) {}

  constexpr std::uint64_t seed() const { return seed_; }

  constexpr SplitMix64 substream(std::uint64_t step, std::uint64_t subject,
                                 std::uint64_t salt = 0) const {
    return SplitMix64(mix_key(mix_key(mix_key(seed_, step), subject), salt));
  }

 private:
  std::uint64_t seed_;
};

inline double uniform01(SplitMix64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline bool bernoulli(SplitMix64& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform01(rng) < p;
}

/// Uniformly distributed direction on the unit sphere.
inline Vec3 random_unit_vector(SplitMix64& rng) {
  const double z = 2.0 * uniform01(rng) - 1.0;
  const double phi = 2.0 * std::numbers::pi * uniform01(rng);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(phi), r * std::sin(phi), z};
}

/// Uniform point inside a ball of the given radius around the origin.
inline Vec3 random_in_ball(SplitMix64& rng, double radius) {
  return random_unit_vector(rng) * (radius * std::cbrt(uniform01(rng)));
}

inline Vec3 random_normal_vector(SplitMix64& rng, double sigma) {
  std::normal_distribution<double> n(0.0, sigma);
  const double x = n(rng);
  const double y = n(rng);
  return {x, y, n(rng)};
}

}  // namespace biosim
