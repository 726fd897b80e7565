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
#include <string>
#include <vector>

#include "hdc/hdvector.hpp"
#include "hdc/symbol_table.hpp"

namespace hdc {

enum class Axis { X, Y };

inline const char* axis_name(Axis a) noexcept {
  return a == Axis::X ? "x" : "y";
}

/// Bank of bipolar basis vectors for encoding a scalar range. The range
/// [lo, hi] is split into n equal subintervals; each of the n+1 borders owns
/// one basis symbol. A scalar is encoded by splicing the two border vectors
/// of its subinterval, which makes the expected cosine of two encodings
/// decay linearly from 1 at distance 0 to 0 at one subinterval width --
/// including across subinterval borders.
class BasisBank {
 public:
  /// Builds the n+1 basis vectors from the table. Basis symbols are named by
  /// (axis, border index) only, so banks built in separate runs from the
  /// same seed agree.
  BasisBank(const SymbolTable& table, Axis axis, double lo, double hi, int n)
      : axis_(axis), lo_(lo), hi_(hi), n_(n), dim_(table.dim()) {
    if (n < 1) throw std::invalid_argument("BasisBank: n must be >= 1");
    if (!(hi > lo)) throw std::invalid_argument("BasisBank: degenerate range");
    basis_.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
      basis_.push_back(
          table.get("pose/" + std::string(axis_name(axis)) + "/" + std::to_string(i)));
    }
  }

  Axis axis() const noexcept { return axis_; }
  double range_lo() const noexcept { return lo_; }
  double range_hi() const noexcept { return hi_; }
  int subintervals() const noexcept { return n_; }
  std::size_t dim() const noexcept { return dim_; }

  /// Width L of one subinterval.
  double subinterval_width() const noexcept { return (hi_ - lo_) / n_; }

  const HDVector& basis(int i) const { return basis_.at(static_cast<std::size_t>(i)); }

  /// Encodes a scalar as a bipolar vector: the first alpha entries come from
  /// the left border's basis vector, the rest from the right border's, with
  /// alpha proportional to the distance to the right border. Out-of-range
  /// values are clamped. A value exactly on an interior border belongs to
  /// the subinterval on its right, which reduces to that border's basis
  /// vector from both sides.
  HDVector encode(double v) const {
    v = std::clamp(v, lo_, hi_);
    double width = subinterval_width();
    int cell = static_cast<int>(std::floor((v - lo_) / width));
    cell = std::clamp(cell, 0, n_ - 1);
    double left_border = lo_ + cell * width;
    double delta_left = v - left_border;
    double delta_right = width - delta_left;
    // Round half away from zero; the argument is never negative here.
    auto alpha = static_cast<std::size_t>(
        std::llround(static_cast<double>(dim_) * delta_right / width));
    alpha = std::min(alpha, dim_);

    const HDVector& left = basis_[static_cast<std::size_t>(cell)];
    const HDVector& right = basis_[static_cast<std::size_t>(cell) + 1];
    HDVector out(dim_);
    for (std::size_t i = 0; i < alpha; ++i) out[i] = left[i];
    for (std::size_t i = alpha; i < dim_; ++i) out[i] = right[i];
    return out;
  }

 private:
  Axis axis_;
  double lo_, hi_;
  int n_;
  std::size_t dim_;
  std::vector<HDVector> basis_;  // copies; banks outlive their table cheaply
};

/// 2-D pose encoding P = X (x) Y: one binding of the per-axis encodings.
/// Bipolar because both factors are bipolar.
inline HDVector encode_pose(const BasisBank& bx, const BasisBank& by, double x,
                            double y) {
  if (bx.dim() != by.dim())
    throw std::invalid_argument("encode_pose: bank dimensionality mismatch");
  return bind(bx.encode(x), by.encode(y));
}

}  // namespace hdc
