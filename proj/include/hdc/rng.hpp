// Copyright 2026 The hdcagg Authors
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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace hdc::rng {

/// SplitMix64 finalizer. Stateless 64-bit mixing with full avalanche; the
/// basis of every random stream in this library. We roll our own generator
/// instead of <random> engines/distributions because the standard
/// distributions are implementation-defined and would break cross-platform
/// reproducibility of symbol vectors.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// FNV-1a over a byte string.
constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

/// Derives the stream key for a named entity under a master seed. Each
/// (seed, name) pair owns an independent stream, so lookup order never
/// matters: encoders built in separate runs agree bit for bit.
constexpr std::uint64_t derive_key(std::uint64_t master_seed,
                                   std::string_view name) noexcept {
  return mix64(mix64(master_seed) ^ fnv1a(name));
}

/// Combines an existing key with an integer (e.g. matrix dimensions).
constexpr std::uint64_t derive_key(std::uint64_t key, std::uint64_t v) noexcept {
  return mix64(key ^ mix64(v));
}

/// Deterministic random stream over a fixed key. Counter-based: the n-th
/// output depends only on (key, n).
class Stream {
 public:
  explicit constexpr Stream(std::uint64_t key) noexcept : state_(key) {}

  constexpr std::uint64_t next_u64() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 random bits.
  constexpr double next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  constexpr double next_uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * next_unit();
  }

  /// Integer in [0, n). n must be > 0. Modulo bias is negligible for the
  /// small ranges used here (n << 2^64).
  constexpr std::uint64_t next_below(std::uint64_t n) noexcept {
    return next_u64() % n;
  }

  /// Standard normal via Box-Muller; consumes two uniforms per pair and
  /// caches the second value.
  double next_gaussian() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - next_unit();  // (0, 1]
    double u2 = next_unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace hdc::rng
