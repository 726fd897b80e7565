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
#include <stdexcept>
#include <utility>
#include <vector>

#include "hdc/features.hpp"
#include "hdc/hdvector.hpp"
#include "hdc/rng.hpp"

namespace hdc {

/// Gaussian random projection, entries i.i.d. N(0, 1/out_dim). The matrix is
/// a pure function of (seed, in_dim, out_dim) and is regenerated from the
/// seed on demand; only the seed travels in file headers. The 1/out_dim
/// variance keeps unit inputs approximately unit after projection.
struct ProjectionSpec {
  std::uint64_t seed = 0;
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
};

class Projection {
 public:
  explicit Projection(const ProjectionSpec& spec) : spec_(spec) {
    if (spec.in_dim == 0 || spec.out_dim == 0)
      throw std::invalid_argument("Projection: dimensions must be positive");
    rng::Stream stream(rng::derive_key(
        rng::derive_key(rng::derive_key(spec.seed, "projection"), spec.in_dim),
        spec.out_dim));
    m_.resize(spec.in_dim * spec.out_dim);
    const double scale = 1.0 / std::sqrt(static_cast<double>(spec.out_dim));
    for (double& e : m_) e = scale * stream.next_gaussian();
  }

  const ProjectionSpec& spec() const noexcept { return spec_; }

  /// M * v, length out_dim.
  HDVector apply(const std::vector<double>& v) const {
    if (v.size() != spec_.in_dim)
      throw std::invalid_argument("project: input length mismatch");
    HDVector out(spec_.out_dim);
    const std::size_t in = spec_.in_dim;
    for (std::size_t o = 0; o < spec_.out_dim; ++o) {
      const double* row = m_.data() + o * in;
      double s = 0.0;
      for (std::size_t i = 0; i < in; ++i) s += row[i] * v[i];
      out[o] = s;
    }
    return out;
  }

 private:
  ProjectionSpec spec_;
  std::vector<double> m_;  // row-major out_dim x in_dim
};

/// v / ||v|| ; vectors with norm below eps pass through unchanged.
inline HDVector l2_normalize(const HDVector& v, double eps = 1e-12) {
  double n = norm(v);
  if (n <= eps) return v;
  HDVector out(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) out[i] = v[i] / n;
  return out;
}

/// Subtracts the arithmetic mean of the set from every element. The output
/// set has zero mean by construction.
inline std::vector<HDVector> mean_center_set(const std::vector<HDVector>& vs) {
  if (vs.empty()) throw std::invalid_argument("mean_center_set: empty input");
  const std::size_t d = vs.front().dim();
  for (const auto& v : vs) require_same_dim(vs.front(), v, "mean_center_set");
  HDVector mean(d);
  for (const auto& v : vs) accumulate(mean, v);
  const double inv = 1.0 / static_cast<double>(vs.size());
  for (std::size_t i = 0; i < d; ++i) mean[i] *= inv;
  std::vector<HDVector> out;
  out.reserve(vs.size());
  for (const auto& v : vs) {
    HDVector c(d);
    for (std::size_t i = 0; i < d; ++i) c[i] = v[i] - mean[i];
    out.push_back(std::move(c));
  }
  return out;
}

/// Per-image standardization: every descriptor is L2-normalized, then the
/// image's mean descriptor is subtracted from each. Positions and scores are
/// untouched.
inline FeatureSet standardize_per_image(const FeatureSet& fs) {
  if (fs.empty())
    throw std::invalid_argument("standardize_per_image: empty feature set");
  std::vector<HDVector> descs;
  descs.reserve(fs.size());
  for (const auto& f : fs.features)
    descs.push_back(l2_normalize(HDVector(f.descriptor)));
  descs = mean_center_set(descs);
  FeatureSet out = fs;
  for (std::size_t i = 0; i < out.features.size(); ++i)
    out.features[i].descriptor = std::move(descs[i]).release();
  return out;
}

}  // namespace hdc
