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
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "hdc/features.hpp"

namespace hdc {

/// One mutual match: database feature i and query feature j are each other's
/// highest-similarity counterpart.
struct Match {
  std::size_t db_index = 0;
  std::size_t q_index = 0;
  double sim = 0.0;
  double weight = 1.0;
};

/// Partial bijection between two feature sets: each index appears at most
/// once on its side.
struct MatchSet {
  std::vector<Match> pairs;
};

enum class WeightMode { uniform, positional };

namespace detail {

/// Dense cosine matrix between the descriptors of two feature sets.
/// Zero-norm descriptors compare as 0.
inline std::vector<double> cosine_matrix(const FeatureSet& db, const FeatureSet& q) {
  const std::size_t n = db.size(), m = q.size();
  std::vector<double> inv_norm_db(n, 0.0), inv_norm_q(m, 0.0);
  auto inv_norm = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    return s > 0.0 ? 1.0 / std::sqrt(s) : 0.0;
  };
  for (std::size_t i = 0; i < n; ++i) inv_norm_db[i] = inv_norm(db.features[i].descriptor);
  for (std::size_t j = 0; j < m; ++j) inv_norm_q[j] = inv_norm(q.features[j].descriptor);

  std::vector<double> sims(n * m, 0.0);
  const std::size_t d = db.dim;
  for (std::size_t i = 0; i < n; ++i) {
    const double* a = db.features[i].descriptor.data();
    for (std::size_t j = 0; j < m; ++j) {
      const double* b = q.features[j].descriptor.data();
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += a[k] * b[k];
      sims[i * m + j] = s * inv_norm_db[i] * inv_norm_q[j];
    }
  }
  return sims;
}

}  // namespace detail

/// Computes the full pairwise cosine matrix and keeps pair (i, j) iff each
/// feature is the other's best match. Argmax ties break toward the lowest
/// index. Both sets are expected to be preprocessed identically (per-image
/// standardization). Empty input on either side yields an empty match set.
inline MatchSet mutual_matches(const FeatureSet& db, const FeatureSet& q) {
  MatchSet out;
  const std::size_t n = db.size(), m = q.size();
  if (n == 0 || m == 0) return out;
  if (db.dim != q.dim)
    throw std::invalid_argument("mutual_matches: descriptor dim mismatch");

  std::vector<double> sims = detail::cosine_matrix(db, q);

  std::vector<std::size_t> best_q_for_db(n, 0), best_db_for_q(m, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = sims.data() + i * m;
    std::size_t best = 0;
    for (std::size_t j = 1; j < m; ++j)
      if (row[j] > row[best]) best = j;
    best_q_for_db[i] = best;
  }
  for (std::size_t j = 0; j < m; ++j) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (sims[i * m + j] > sims[best * m + j]) best = i;
    best_db_for_q[j] = best;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = best_q_for_db[i];
    if (best_db_for_q[j] == i)
      out.pairs.push_back(Match{i, j, sims[i * m + j], 1.0});
  }
  return out;
}

/// Spatial weight of a matched pair from its position displacement: per-axis
/// weights decay linearly to 0 at one grid-cell width, combined by min.
inline double position_weight(double dx, double dy, double w, double h,
                              int nx, int ny) {
  if (w <= 0.0 || h <= 0.0)
    throw std::invalid_argument("position_weight: image size must be positive");
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("position_weight: grid counts must be >= 1");
  double wx = std::max(0.0, 1.0 - std::abs(dx) / (w / nx));
  double wy = std::max(0.0, 1.0 - std::abs(dy) / (h / ny));
  return std::min(wx, wy);
}

/// Image similarity from mutual matchings:
///   s = (1 / sqrt(n_db * n_q)) * sum over matches of p_ij * sim_ij
/// with p_ij = 1 in uniform mode and the spatial weight in positional mode.
/// Negative similarities are included in the sum (no clipping). Image
/// dimensions for the spatial weight come from the database image.
inline double exhaustive_similarity(const FeatureSet& db, const FeatureSet& q,
                                    WeightMode mode, int nx = 4, int ny = 6) {
  if (db.empty() || q.empty()) return 0.0;
  MatchSet matches = mutual_matches(db, q);
  double s = 0.0;
  for (const Match& mth : matches.pairs) {
    double p = 1.0;
    if (mode == WeightMode::positional) {
      const Feature& fd = db.features[mth.db_index];
      const Feature& fq = q.features[mth.q_index];
      p = position_weight(fd.x - fq.x, fd.y - fq.y, db.width, db.height, nx, ny);
    }
    s += p * mth.sim;
  }
  return s / std::sqrt(static_cast<double>(db.size()) * static_cast<double>(q.size()));
}

}  // namespace hdc
