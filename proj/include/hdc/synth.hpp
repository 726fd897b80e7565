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
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdc/config.hpp"
#include "hdc/evaluation.hpp"
#include "hdc/features.hpp"
#include "hdc/rng.hpp"

namespace hdc {

struct SynthBenchmark {
  std::vector<FeatureSet> database;
  std::vector<FeatureSet> queries;
  GroundTruth gt;
};

namespace detail {

inline std::vector<double> unit_gaussian(rng::Stream& s, int dim) {
  std::vector<double> v(static_cast<std::size_t>(dim));
  double n2 = 0.0;
  for (double& e : v) {
    e = s.next_gaussian();
    n2 += e * e;
  }
  double inv = n2 > 0.0 ? 1.0 / std::sqrt(n2) : 0.0;
  for (double& e : v) e *= inv;
  return v;
}

/// A unit vector with exact cosine c to the unit vector u: mixes u with a
/// random direction orthogonalized against it.
inline std::vector<double> noisy_descriptor(rng::Stream& s,
                                            const std::vector<double>& u,
                                            double c) {
  std::vector<double> g = unit_gaussian(s, static_cast<int>(u.size()));
  double proj = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) proj += g[i] * u[i];
  double n2 = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    g[i] -= proj * u[i];
    n2 += g[i] * g[i];
  }
  double scale = n2 > 0.0 ? std::sqrt(std::max(0.0, 1.0 - c * c) / n2) : 0.0;
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = c * u[i] + scale * g[i];
  return out;
}

inline std::string padded_id(const char* prefix, int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%04d", prefix, i);
  return buf;
}

}  // namespace detail

/// Generates the synthetic place-recognition benchmark described on
/// SynthParams. Fully deterministic in the seed. Ground truth pairs each
/// query with its own place.
inline SynthBenchmark make_synth(const SynthParams& p) {
  if (p.places < 1 || p.features_per_place < 1 || p.desc_dim < 1)
    throw std::invalid_argument("make_synth: places, features and desc_dim must be positive");
  if (p.unique_per_place + p.materials_per_place + p.world_per_place >
      p.features_per_place)
    throw std::invalid_argument(
        "make_synth: unique + materials + world exceeds features_per_place");
  if (p.materials_per_place > 0 && p.material_pool < 1)
    throw std::invalid_argument("make_synth: material_pool must be >= 1");
  if (!(p.noise_cosine >= -1.0 && p.noise_cosine <= 1.0))
    throw std::invalid_argument("make_synth: noise_cosine must be in [-1,1]");

  rng::Stream s(rng::derive_key(p.seed, "synth"));

  struct Landmark {
    std::vector<double> descriptor;
    double t = 0.0;  // trajectory position
    double x = 0.0, y = 0.0;
  };

  std::vector<std::vector<double>> materials(static_cast<std::size_t>(p.material_pool));
  for (auto& m : materials) m = detail::unit_gaussian(s, p.desc_dim);

  std::vector<Landmark> world(static_cast<std::size_t>(std::max(0, p.world_pool)));
  for (auto& lm : world) {
    lm.descriptor = detail::unit_gaussian(s, p.desc_dim);
    lm.t = s.next_uniform(0.0, static_cast<double>(p.places));
    lm.x = s.next_uniform(1.0, p.width);
    lm.y = s.next_uniform(1.0, p.height);
  }

  auto clamp_x = [&](double x) { return std::clamp(x, 1.0, p.width); };
  auto clamp_y = [&](double y) { return std::clamp(y, 1.0, p.height); };

  auto in_range_landmarks = [&](int place) {
    std::vector<std::size_t> idx;
    for (std::size_t l = 0; l < world.size(); ++l)
      if (std::abs(world[l].t - static_cast<double>(place)) <= p.world_range)
        idx.push_back(l);
    return idx;
  };

  auto fresh_feature = [&]() {
    Feature f;
    f.descriptor = detail::unit_gaussian(s, p.desc_dim);
    f.x = s.next_uniform(1.0, p.width);
    f.y = s.next_uniform(1.0, p.height);
    f.score = s.next_unit();
    return f;
  };

  SynthBenchmark bench;
  bench.database.reserve(static_cast<std::size_t>(p.places));
  bench.queries.reserve(static_cast<std::size_t>(p.places));

  for (int place = 0; place < p.places; ++place) {
    std::vector<std::size_t> visible = in_range_landmarks(place);

    FeatureSet db;
    db.image_id = detail::padded_id("db_", place);
    db.width = p.width;
    db.height = p.height;
    db.dim = static_cast<std::size_t>(p.desc_dim);

    // Unique and material features are the replicable scene content.
    std::size_t replicable = 0;
    for (int u = 0; u < p.unique_per_place; ++u) db.features.push_back(fresh_feature());
    for (int mi = 0; mi < p.materials_per_place; ++mi) {
      Feature f;
      f.descriptor = materials[s.next_below(materials.size())];
      f.x = s.next_uniform(1.0, p.width);
      f.y = s.next_uniform(1.0, p.height);
      f.score = s.next_unit();
      db.features.push_back(std::move(f));
    }
    replicable = db.features.size();

    auto observe_landmark = [&](std::size_t l) {
      Feature f;
      f.descriptor = world[l].descriptor;
      f.x = clamp_x(world[l].x + p.world_scatter * s.next_gaussian());
      f.y = clamp_y(world[l].y + p.world_scatter * s.next_gaussian());
      f.score = s.next_unit();
      return f;
    };
    for (int wi = 0; wi < p.world_per_place; ++wi) {
      if (visible.empty()) {
        db.features.push_back(fresh_feature());
      } else {
        db.features.push_back(observe_landmark(visible[s.next_below(visible.size())]));
      }
    }
    while (db.features.size() < static_cast<std::size_t>(p.features_per_place))
      db.features.push_back(fresh_feature());

    // Query: revisit the place under noise, jitter, dropout and clutter.
    FeatureSet q;
    q.image_id = detail::padded_id("q_", place);
    q.width = p.width;
    q.height = p.height;
    q.dim = static_cast<std::size_t>(p.desc_dim);

    const double jx = p.jitter_frac * p.width;
    const double jy = p.jitter_frac * p.height;
    for (std::size_t i = 0; i < replicable; ++i) {
      bool keep = s.next_unit() >= p.dropout;
      // Draw the replica unconditionally to keep the random stream aligned
      // across dropout decisions.
      Feature f;
      f.descriptor = detail::noisy_descriptor(s, db.features[i].descriptor, p.noise_cosine);
      f.x = clamp_x(db.features[i].x + jx * s.next_gaussian());
      f.y = clamp_y(db.features[i].y + jy * s.next_gaussian());
      f.score = s.next_unit();
      if (keep) q.features.push_back(std::move(f));
    }
    for (int wi = 0; wi < p.world_per_place; ++wi) {
      if (visible.empty()) {
        q.features.push_back(fresh_feature());
        continue;
      }
      Feature f = observe_landmark(visible[s.next_below(visible.size())]);
      f.descriptor = detail::noisy_descriptor(s, f.descriptor, p.noise_cosine);
      f.x = clamp_x(f.x + jx * s.next_gaussian());
      f.y = clamp_y(f.y + jy * s.next_gaussian());
      q.features.push_back(std::move(f));
    }
    while (q.features.size() < static_cast<std::size_t>(p.features_per_place))
      q.features.push_back(fresh_feature());

    if (p.shift_x != 0.0) {
      std::vector<Feature> shifted;
      shifted.reserve(q.features.size());
      for (Feature& f : q.features) {
        f.x += p.shift_x;
        if (f.x >= 1.0 && f.x <= p.width) shifted.push_back(std::move(f));
      }
      q.features = std::move(shifted);
    }

    bench.gt.positives.insert({static_cast<std::size_t>(place),
                               static_cast<std::size_t>(place)});
    bench.database.push_back(std::move(db));
    bench.queries.push_back(std::move(q));
  }
  return bench;
}

}  // namespace hdc
