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
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hdc {

/// A d-dimensional real vector, the universal currency of all HDC
/// operations. Arithmetic is done in 64-bit floating point; bipolar vectors
/// ({-1,+1}^d) are a special case produced by symbol generation and position
/// encoding.
class HDVector {
 public:
  HDVector() = default;
  explicit HDVector(std::size_t d, double fill = 0.0) : v_(d, fill) {}
  explicit HDVector(std::vector<double> values) : v_(std::move(values)) {}

  std::size_t dim() const noexcept { return v_.size(); }
  bool empty() const noexcept { return v_.empty(); }

  double* data() noexcept { return v_.data(); }
  const double* data() const noexcept { return v_.data(); }

  double& operator[](std::size_t i) noexcept { return v_[i]; }
  double operator[](std::size_t i) const noexcept { return v_[i]; }

  auto begin() noexcept { return v_.begin(); }
  auto end() noexcept { return v_.end(); }
  auto begin() const noexcept { return v_.begin(); }
  auto end() const noexcept { return v_.end(); }

  const std::vector<double>& values() const noexcept { return v_; }

  /// Moves the underlying storage out.
  std::vector<double> release() && noexcept { return std::move(v_); }

  bool operator==(const HDVector& o) const noexcept { return v_ == o.v_; }

 private:
  std::vector<double> v_;
};

inline void require_same_dim(const HDVector& x, const HDVector& y,
                             const char* op) {
  if (x.dim() != y.dim()) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                std::to_string(x.dim()) + " vs " +
                                std::to_string(y.dim()) + ")");
  }
}

/// Neutral element of binding: the all-ones vector.
inline HDVector ones(std::size_t d) { return HDVector(d, 1.0); }

/// Binding: elementwise multiplication. Commutative, associative,
/// self-inverse for bipolar operands.
inline HDVector bind(const HDVector& x, const HDVector& y) {
  require_same_dim(x, y, "bind");
  HDVector out(x.dim());
  const double* a = x.data();
  const double* b = y.data();
  double* o = out.data();
  for (std::size_t i = 0; i < x.dim(); ++i) o[i] = a[i] * b[i];
  return out;
}

/// acc += v. Building block of bundling; kept separate so incremental
/// aggregation costs exactly one vector sum per added term.
inline void accumulate(HDVector& acc, const HDVector& v) {
  require_same_dim(acc, v, "accumulate");
  double* a = acc.data();
  const double* b = v.data();
  for (std::size_t i = 0; i < acc.dim(); ++i) a[i] += b[i];
}

/// Bundling: elementwise sum of a non-empty list. The output is not
/// renormalized; normalization happens only inside cosine, which keeps
/// incremental bundling associative.
inline HDVector bundle(std::span<const HDVector> vs) {
  if (vs.empty()) throw std::invalid_argument("bundle: empty input");
  HDVector acc = vs.front();
  for (std::size_t j = 1; j < vs.size(); ++j) accumulate(acc, vs[j]);
  return acc;
}

inline HDVector bundle(const std::vector<HDVector>& vs) {
  return bundle(std::span<const HDVector>(vs));
}

inline double dot(const HDVector& x, const HDVector& y) {
  require_same_dim(x, y, "dot");
  const double* a = x.data();
  const double* b = y.data();
  double s = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline double squared_norm(const HDVector& x) { return dot(x, x); }
inline double norm(const HDVector& x) { return std::sqrt(squared_norm(x)); }

/// Cosine similarity (normalized dot product). A zero-norm operand yields 0:
/// a degenerate vector carries no evidence of similarity.
inline double cosine(const HDVector& x, const HDVector& y) {
  require_same_dim(x, y, "cosine");
  const double* a = x.data();
  const double* b = y.data();
  double s = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    s += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return s / (std::sqrt(na) * std::sqrt(nb));
}

inline bool is_bipolar(const HDVector& x) noexcept {
  for (double v : x) {
    if (v != 1.0 && v != -1.0) return false;
  }
  return true;
}

inline bool all_finite(const HDVector& x) noexcept {
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace hdc
