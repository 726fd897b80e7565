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

#include <cstdint>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include "hdc/hdvector.hpp"
#include "hdc/rng.hpp"

namespace hdc {

/// Deterministic store of bipolar symbol vectors. Each named symbol is drawn
/// from its own counter-based stream keyed on (master_seed, name), so the
/// table contents are a pure function of the seed and the set of requested
/// names -- independent of lookup order, process, and platform.
///
/// Lookups memoize; the cache is the only mutable state and is mutex
/// protected, so a fully populated table can be shared across threads.
class SymbolTable {
 public:
  SymbolTable(std::uint64_t master_seed, std::size_t dim)
      : master_seed_(master_seed), dim_(dim) {}

  SymbolTable(const SymbolTable&) = delete;
  SymbolTable& operator=(const SymbolTable&) = delete;

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::size_t dim() const noexcept { return dim_; }

  /// Returns the symbol vector for `name`, generating it on first use.
  /// Every dimension is -1 or +1 with probability 1/2 each. References stay
  /// valid for the lifetime of the table.
  const HDVector& get(std::string_view name) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find(std::string(name));
    if (it != entries_.end()) return it->second;
    auto [pos, _] = entries_.emplace(std::string(name), generate(name));
    return pos->second;
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return entries_.size();
  }

 private:
  HDVector generate(std::string_view name) const {
    rng::Stream stream(rng::derive_key(master_seed_, name));
    HDVector v(dim_);
    std::size_t i = 0;
    while (i < dim_) {
      std::uint64_t bits = stream.next_u64();
      for (int b = 0; b < 64 && i < dim_; ++b, ++i) {
        v[i] = (bits >> b) & 1u ? 1.0 : -1.0;
      }
    }
    return v;
  }

  std::uint64_t master_seed_;
  std::size_t dim_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::string, HDVector> entries_;
};

}  // namespace hdc
