// Copyright 2026 The ECGN Authors
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

#ifndef ECGN_RNG_H_
#define ECGN_RNG_H_

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace ecgn {

// std::mt19937_64 is bit-exact across standard libraries, but the
// std::*_distribution adaptors are not. The helpers below are used instead
// so that a seed reproduces the same stream everywhere.
using Rng = std::mt19937_64;

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream for (seed, stream_id), e.g. one per cluster or class.
inline Rng DeriveRng(std::uint64_t seed, std::uint64_t stream_id) {
  return Rng(SplitMix64(SplitMix64(seed) ^ SplitMix64(stream_id + 0x51ed27)));
}

// Uniform in [0, 1).
inline double Uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double UniformReal(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * Uniform01(rng);
}

// Uniform in [0, bound), bound > 0. Rejection sampling, no modulo bias.
inline std::uint64_t UniformIndex(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % bound;
}

// Standard normal via Box-Muller.
inline double Gaussian(Rng& rng) {
  double u1 = Uniform01(rng);
  while (u1 <= 0.0) u1 = Uniform01(rng);
  const double u2 = Uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

template <typename T>
void Shuffle(std::span<T> values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = UniformIndex(rng, i);
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace ecgn

#endif  // ECGN_RNG_H_
