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
#include <sstream>
#include <string>

namespace hdc {

/// Population used for descriptor mean-centering: `set` subtracts the mean
/// over all descriptors of the encoded batch (holistic-descriptor pipeline),
/// `image` subtracts each image's own mean (local-feature pipeline).
enum class CenteringMode : std::uint8_t { set = 0, image = 1 };

inline const char* to_string(CenteringMode m) noexcept {
  return m == CenteringMode::set ? "set" : "image";
}

/// Identifies the encoder configuration a holistic descriptor was produced
/// with. Descriptors are comparable only if their fingerprints match;
/// mismatches are rejected, never silently computed.
struct EncoderFingerprint {
  std::uint32_t dim = 0;
  std::uint64_t seed = 0;
  std::uint32_t nx = 0;
  std::uint32_t ny = 0;
  CenteringMode centering = CenteringMode::image;
  bool projection = false;
  std::uint64_t projection_seed = 0;
  std::uint32_t projection_in_dim = 0;  // 0 when projection is off
  std::uint32_t budget = 0;

  bool operator==(const EncoderFingerprint&) const = default;

  std::string to_string() const {
    std::ostringstream os;
    os << "d=" << dim << " seed=" << seed << " nx=" << nx << " ny=" << ny
       << " centering=" << hdc::to_string(centering)
       << " project=" << (projection ? "on" : "off")
       << " pseed=" << projection_seed << " pin=" << projection_in_dim
       << " budget=" << budget;
    return os.str();
  }

  /// Fingerprint carrying only the dimensionality, used by library-level
  /// aggregation ops that run outside an encoder configuration.
  static EncoderFingerprint bare(std::uint32_t dim) {
    EncoderFingerprint fp;
    fp.dim = dim;
    return fp;
  }
};

/// Parameters of the synthetic place-recognition benchmark. A benchmark is a
/// database of `places` images plus one query image per place that revisits
/// it under descriptor noise, positional jitter, feature dropout and clutter.
///
/// Each database image holds three feature populations:
///   - place-unique features (fresh descriptors, only seen at this place),
///   - material features drawn from a small global pool of descriptors that
///     recur everywhere at unrelated positions (repetitive structure),
///   - world landmarks living on the 1-D place trajectory, visible from
///     nearby places at a stable image position (shared scenery), which
///     gives neighboring places smoothly graded similarity.
/// Remaining capacity up to features_per_place is filled with random
/// distractors. Query images replicate the unique and material features
/// (noise + jitter + dropout), re-observe world landmarks independently,
/// and refill dropped features with distractors.
struct SynthParams {
  int places = 200;
  int features_per_place = 50;
  int desc_dim = 128;
  double width = 640.0;
  double height = 480.0;
  double noise_cosine = 0.6;  // cosine between a query descriptor and its source
  double jitter_frac = 0.05;  // positional jitter stddev, fraction of image size
  double dropout = 0.2;       // per-feature drop probability in query images
  int unique_per_place = 10;
  int material_pool = 8;
  int materials_per_place = 10;
  int world_pool = 60;
  double world_range = 100.0;  // landmark visibility half-window, in places
  int world_per_place = 30;
  double world_scatter = 20.0;  // px, per-observation landmark position scatter
  double shift_x = 0.0;  // horizontal viewpoint shift of queries, px; shifted-out features vanish
  std::uint64_t seed = 42;

  std::string to_string() const {
    std::ostringstream os;
    os << "places=" << places << " features=" << features_per_place
       << " desc_dim=" << desc_dim << " width=" << width
       << " height=" << height << " noise_cosine=" << noise_cosine
       << " jitter=" << jitter_frac << " dropout=" << dropout
       << " unique=" << unique_per_place << " material_pool=" << material_pool
       << " materials=" << materials_per_place << " world_pool=" << world_pool
       << " world_range=" << world_range << " world=" << world_per_place
       << " world_scatter=" << world_scatter << " shift_x=" << shift_x
       << " seed=" << seed;
    return os.str();
  }
};

/// Top-level run configuration. Defaults are the standard operating point:
/// d=4096, n_x=4, n_y=6, feature budget 200.
struct RunConfig {
  std::uint32_t dim = 4096;
  std::uint64_t seed = 42;
  int nx = 4;
  int ny = 6;
  int budget = 200;
  CenteringMode centering = CenteringMode::image;
  bool project = true;
  std::uint64_t project_seed = 42;
  SynthParams synth;
};

}  // namespace hdc
