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

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

namespace hdc {

/// One local feature: a raw descriptor vector at a pixel position with a
/// detector score.
struct Feature {
  std::vector<double> descriptor;
  double x = 0.0;
  double y = 0.0;
  double score = 0.0;
};

/// One image's local features. All descriptors share dimensionality.
struct FeatureSet {
  std::string image_id;
  double width = 0.0;
  double height = 0.0;
  std::size_t dim = 0;
  std::vector<Feature> features;

  std::size_t size() const noexcept { return features.size(); }
  bool empty() const noexcept { return features.empty(); }
};

/// Keeps the `budget` highest-score features; ties broken by input order.
/// Sets with at most `budget` features pass through unchanged.
inline FeatureSet select_top_features(const FeatureSet& fs, std::size_t budget) {
  if (fs.features.size() <= budget) return fs;
  std::vector<std::size_t> order(fs.features.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return fs.features[a].score > fs.features[b].score;
  });
  order.resize(budget);
  std::sort(order.begin(), order.end());  // keep original feature order
  FeatureSet out;
  out.image_id = fs.image_id;
  out.width = fs.width;
  out.height = fs.height;
  out.dim = fs.dim;
  out.features.reserve(budget);
  for (std::size_t i : order) out.features.push_back(fs.features[i]);
  return out;
}

}  // namespace hdc
