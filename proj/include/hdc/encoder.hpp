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

#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "hdc/aggregate.hpp"
#include "hdc/config.hpp"
#include "hdc/error.hpp"
#include "hdc/features.hpp"
#include "hdc/preprocess.hpp"

namespace hdc {

/// Batch encoder: turns feature sets into holistic descriptors under one run
/// configuration. Owns the symbol table, the projection, and per-image-size
/// basis banks; all of it derives deterministically from the config seed, so
/// database and query encoders built in separate runs agree.
class Encoder {
 public:
  Encoder(const RunConfig& cfg, std::size_t in_dim)
      : cfg_(cfg), in_dim_(in_dim), table_(cfg.seed, cfg.dim) {
    if (cfg.project) {
      proj_ = std::make_unique<Projection>(
          ProjectionSpec{cfg.project_seed, in_dim, cfg.dim});
    } else if (in_dim != cfg.dim) {
      throw IoError("projection disabled but descriptor dim " +
                    std::to_string(in_dim) + " != encoder dim " +
                    std::to_string(cfg.dim));
    }
  }

  const RunConfig& config() const noexcept { return cfg_; }
  const SymbolTable& symbols() const noexcept { return table_; }
  const Projection* projection() const noexcept { return proj_.get(); }

  EncoderFingerprint fingerprint() const {
    EncoderFingerprint fp;
    fp.dim = cfg_.dim;
    fp.seed = cfg_.seed;
    fp.nx = static_cast<std::uint32_t>(cfg_.nx);
    fp.ny = static_cast<std::uint32_t>(cfg_.ny);
    fp.centering = cfg_.centering;
    fp.projection = proj_ != nullptr;
    fp.projection_seed = proj_ ? cfg_.project_seed : 0;
    fp.projection_in_dim = proj_ ? static_cast<std::uint32_t>(in_dim_) : 0;
    fp.budget = static_cast<std::uint32_t>(cfg_.budget);
    return fp;
  }

  /// Pose banks for an image size, cached per (width, height). Banks of all
  /// images share the same basis symbols; only the pixel range differs.
  const BasisBank& bank_x(double width) const {
    return bank(Axis::X, width, cfg_.nx);
  }
  const BasisBank& bank_y(double height) const {
    return bank(Axis::Y, height, cfg_.ny);
  }

  /// Encodes a batch. `kind` selects pose-bound aggregation (local_pose) or
  /// plain bundling of the same preprocessed descriptors (bundled). With
  /// set centering the mean is taken over all descriptors of this batch;
  /// with image centering each image standardizes on its own.
  std::vector<HolisticDescriptor> encode(const std::vector<FeatureSet>& sets,
                                         AggregationKind kind,
                                         AggregateCost* cost = nullptr) const {
    if (kind == AggregationKind::typed)
      throw std::invalid_argument("Encoder::encode: typed aggregation takes explicit type names");
    for (const auto& fs : sets) {
      if (!fs.empty() && fs.dim != in_dim_)
        throw IoError("feature set '" + fs.image_id + "' has descriptor dim " +
                      std::to_string(fs.dim) + ", encoder expects " +
                      std::to_string(in_dim_));
    }

    std::vector<FeatureSet> work;
    work.reserve(sets.size());
    for (const auto& fs : sets)
      work.push_back(select_top_features(fs, static_cast<std::size_t>(cfg_.budget)));

    if (cfg_.centering == CenteringMode::set) center_over_batch(work);

    std::vector<HolisticDescriptor> out;
    out.reserve(work.size());
    for (const auto& fs : work) {
      HolisticDescriptor h = cfg_.centering == CenteringMode::image
                                 ? encode_image_centered(fs, kind, cost)
                                 : encode_precentered(fs, kind, cost);
      h.meta = fingerprint();
      out.push_back(std::move(h));
    }
    return out;
  }

 private:
  const BasisBank& bank(Axis axis, double extent, int n) const {
    auto key = std::make_pair(axis == Axis::X ? 0 : 1, extent);
    auto it = banks_.find(key);
    if (it == banks_.end())
      it = banks_.emplace(key, BasisBank(table_, axis, 1.0, extent, n)).first;
    return it->second;
  }

  HolisticDescriptor encode_image_centered(const FeatureSet& fs,
                                           AggregationKind kind,
                                           AggregateCost* cost) const {
    if (kind == AggregationKind::local_pose)
      return aggregate_local(fs, bank_x(fs.width), bank_y(fs.height),
                             proj_.get(), cost);
    // Plain bundling of the same per-image standardized descriptors.
    HolisticDescriptor out;
    out.id = fs.image_id;
    out.kind = AggregationKind::bundled;
    out.meta = EncoderFingerprint::bare(cfg_.dim);
    if (fs.empty()) {
      out.vector = HDVector(cfg_.dim);
      out.degenerate = true;
      return out;
    }
    FeatureSet std_fs = standardize_per_image(projected(fs));
    std::vector<HDVector> descs;
    descs.reserve(std_fs.size());
    for (auto& f : std_fs.features) descs.emplace_back(std::move(f.descriptor));
    out.vector = bundle(descs);
    return out;
  }

  /// Set-centered path: descriptors were already projected, L2-normalized
  /// and centered over the batch by center_over_batch.
  HolisticDescriptor encode_precentered(const FeatureSet& fs,
                                        AggregationKind kind,
                                        AggregateCost* cost) const {
    HolisticDescriptor out;
    out.id = fs.image_id;
    out.kind = kind;
    out.meta = EncoderFingerprint::bare(cfg_.dim);
    if (fs.empty()) {
      out.vector = HDVector(cfg_.dim);
      out.degenerate = true;
      return out;
    }
    std::vector<HDVector> descs;
    std::vector<std::pair<double, double>> positions;
    descs.reserve(fs.size());
    for (const auto& f : fs.features) {
      descs.emplace_back(f.descriptor);
      positions.emplace_back(f.x, f.y);
    }
    if (kind == AggregationKind::local_pose) {
      out.vector = detail::pose_bundle(descs, positions, bank_x(fs.width),
                                       bank_y(fs.height), cost);
    } else {
      out.vector = bundle(descs);
    }
    return out;
  }

  FeatureSet projected(const FeatureSet& fs) const {
    if (!proj_) return fs;
    FeatureSet out = fs;
    for (auto& f : out.features) f.descriptor = proj_->apply(f.descriptor).release();
    out.dim = cfg_.dim;
    return out;
  }

  /// Projects and L2-normalizes every descriptor, then subtracts the batch
  /// mean in place.
  void center_over_batch(std::vector<FeatureSet>& sets) const {
    std::vector<HDVector> all;
    for (auto& fs : sets) {
      fs = projected(fs);
      for (auto& f : fs.features)
        all.push_back(l2_normalize(HDVector(std::move(f.descriptor))));
    }
    if (all.empty()) return;
    all = mean_center_set(all);
    std::size_t k = 0;
    for (auto& fs : sets)
      for (auto& f : fs.features) f.descriptor = std::move(all[k++]).release();
  }

  RunConfig cfg_;
  std::size_t in_dim_;
  SymbolTable table_;
  std::unique_ptr<Projection> proj_;
  mutable std::map<std::pair<int, double>, BasisBank> banks_;
};

}  // namespace hdc
