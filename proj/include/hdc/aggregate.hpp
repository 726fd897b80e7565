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
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hdc/config.hpp"
#include "hdc/error.hpp"
#include "hdc/features.hpp"
#include "hdc/hdvector.hpp"
#include "hdc/position.hpp"
#include "hdc/preprocess.hpp"
#include "hdc/symbol_table.hpp"

namespace hdc {

enum class AggregationKind : std::uint8_t {
  bundled = 0,     // plain elementwise sum of descriptors
  typed = 1,       // descriptors bound to type symbols, then summed
  local_pose = 2,  // local descriptors bound to pose encodings, then summed
};

inline const char* to_string(AggregationKind k) noexcept {
  switch (k) {
    case AggregationKind::bundled: return "bundled";
    case AggregationKind::typed: return "typed";
    default: return "local_pose";
  }
}

/// One fixed-size vector summarizing a whole image (or a set of descriptors).
/// Stored unnormalized so later incremental bundling stays exact;
/// normalization happens inside cosine.
struct HolisticDescriptor {
  std::string id;
  HDVector vector;
  AggregationKind kind = AggregationKind::bundled;
  EncoderFingerprint meta;
  bool degenerate = false;  // zero vector from an empty feature set
};

/// Vector-level operation counts of one aggregation. An aggregation over n
/// features costs exactly n-1 vector sums and 2n elementwise multiplications
/// (one inside each pose encoding, one for binding the descriptor to it).
struct AggregateCost {
  std::uint64_t vector_sums = 0;
  std::uint64_t vector_multiplies = 0;
};

/// Cosine between holistic descriptors; rejects fingerprint mismatches.
inline double holistic_cosine(const HolisticDescriptor& a,
                              const HolisticDescriptor& b) {
  if (!(a.meta == b.meta)) {
    throw IoError("holistic descriptors are not comparable: fingerprint '" +
                  a.meta.to_string() + "' vs '" + b.meta.to_string() + "'");
  }
  return cosine(a.vector, b.vector);
}

/// Plain aggregation: the elementwise sum of preprocessed descriptors. The
/// result stays similar to each input, and comparing two such sums
/// approximates the average similarity of the bundled inputs when the inputs
/// are mutually quasi-orthogonal.
inline HolisticDescriptor bundle_holistic(const std::vector<HDVector>& hs,
                                          std::string id = {}) {
  if (hs.empty()) throw std::invalid_argument("bundle_holistic: empty input");
  HolisticDescriptor out;
  out.id = std::move(id);
  out.vector = bundle(hs);
  out.kind = AggregationKind::bundled;
  out.meta = EncoderFingerprint::bare(static_cast<std::uint32_t>(out.vector.dim()));
  return out;
}

/// Type-tagged aggregation: each descriptor is bound to the symbol of its
/// type name before summing, so individual inputs can later be recovered by
/// unbinding with the same symbol.
inline HolisticDescriptor typed_bundle(
    const SymbolTable& table,
    const std::vector<std::pair<std::string, HDVector>>& pairs,
    std::string id = {}) {
  if (pairs.empty()) throw std::invalid_argument("typed_bundle: empty input");
  std::unordered_set<std::string> seen;
  for (const auto& [name, _] : pairs) {
    if (!seen.insert(name).second)
      throw std::invalid_argument("typed_bundle: duplicate type name '" + name + "'");
  }
  HDVector acc;
  for (const auto& [name, h] : pairs) {
    HDVector bound = bind(table.get(name), h);
    if (acc.empty())
      acc = std::move(bound);
    else
      accumulate(acc, bound);
  }
  HolisticDescriptor out;
  out.id = std::move(id);
  out.vector = std::move(acc);
  out.kind = AggregationKind::typed;
  out.meta = EncoderFingerprint::bare(static_cast<std::uint32_t>(out.vector.dim()));
  return out;
}

/// Approximate recovery of the descriptor stored under `type_name`: binding
/// is self-inverse for bipolar symbols, so unbinding is another bind. An
/// unknown type name yields a vector quasi-orthogonal to everything, which
/// callers can detect by low similarity.
inline HDVector recover_typed(const SymbolTable& table,
                              const HolisticDescriptor& h,
                              const std::string& type_name) {
  if (h.kind != AggregationKind::typed)
    throw std::invalid_argument("recover_typed: descriptor is not type-tagged");
  return bind(table.get(type_name), h.vector);
}

namespace detail {

/// Binds each descriptor to its pose encoding and sums. Every vector-level
/// operation is counted next to the call that performs it.
inline HDVector pose_bundle(const std::vector<HDVector>& descs,
                            const std::vector<std::pair<double, double>>& positions,
                            const BasisBank& bx, const BasisBank& by,
                            AggregateCost* cost) {
  HDVector acc;
  for (std::size_t i = 0; i < descs.size(); ++i) {
    // encode_pose performs one elementwise multiplication (X (x) Y).
    HDVector pose = encode_pose(bx, by, positions[i].first, positions[i].second);
    if (cost) ++cost->vector_multiplies;
    HDVector bound = bind(descs[i], pose);
    if (cost) ++cost->vector_multiplies;
    if (acc.empty()) {
      acc = std::move(bound);
    } else {
      accumulate(acc, bound);
      if (cost) ++cost->vector_sums;
    }
  }
  return acc;
}

}  // namespace detail

/// Aggregates one image's local features into a single holistic vector:
/// project each descriptor into the target space (when a projection is
/// given), standardize per image, bind each descriptor to the encoding of
/// its position, and sum. An empty feature set yields a zero vector flagged
/// degenerate instead of an error, so batch pipelines never abort on a
/// degenerate frame.
inline HolisticDescriptor aggregate_local(const FeatureSet& fs,
                                          const BasisBank& bx,
                                          const BasisBank& by,
                                          const Projection* proj = nullptr,
                                          AggregateCost* cost = nullptr) {
  if (bx.dim() != by.dim())
    throw std::invalid_argument("aggregate_local: bank dimensionality mismatch");
  const std::size_t d = bx.dim();

  HolisticDescriptor out;
  out.id = fs.image_id;
  out.kind = AggregationKind::local_pose;
  out.meta = EncoderFingerprint::bare(static_cast<std::uint32_t>(d));
  if (fs.empty()) {
    out.vector = HDVector(d);
    out.degenerate = true;
    return out;
  }

  FeatureSet work = fs;
  if (proj) {
    if (proj->spec().out_dim != d)
      throw std::invalid_argument("aggregate_local: projection output dim mismatch");
    for (auto& f : work.features) f.descriptor = proj->apply(f.descriptor).release();
    work.dim = d;
  } else if (work.dim != d) {
    throw std::invalid_argument("aggregate_local: descriptor dim " +
                                std::to_string(work.dim) +
                                " does not match encoder dim " + std::to_string(d));
  }
  work = standardize_per_image(work);

  std::vector<HDVector> descs;
  std::vector<std::pair<double, double>> positions;
  descs.reserve(work.size());
  positions.reserve(work.size());
  for (auto& f : work.features) {
    descs.emplace_back(std::move(f.descriptor));
    positions.emplace_back(f.x, f.y);
  }
  out.vector = detail::pose_bundle(descs, positions, bx, by, cost);
  return out;
}

}  // namespace hdc
