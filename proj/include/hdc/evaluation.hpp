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
#include <numeric>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hdc/aggregate.hpp"
#include "hdc/error.hpp"
#include "hdc/hdvector.hpp"

namespace hdc {

/// Database x query matrix of scalar similarities with provenance metadata.
struct SimilarityMatrix {
  std::vector<std::string> db_ids;
  std::vector<std::string> q_ids;
  std::vector<double> values;  // row-major, db_ids.size() x q_ids.size()
  std::string method;
  std::string fingerprint;

  std::size_t rows() const noexcept { return db_ids.size(); }
  std::size_t cols() const noexcept { return q_ids.size(); }
  double at(std::size_t i, std::size_t j) const { return values[i * cols() + j]; }
  double& at(std::size_t i, std::size_t j) { return values[i * cols() + j]; }
};

/// Set of (db_index, query_index) pairs deemed the same place.
struct GroundTruth {
  std::set<std::pair<std::size_t, std::size_t>> positives;

  bool is_positive(std::size_t db, std::size_t q) const {
    return positives.count({db, q}) != 0;
  }
};

/// Pairwise cosines between two holistic descriptor lists. All descriptors
/// must carry the same fingerprint and aggregation kind.
inline SimilarityMatrix similarity_matrix(const std::vector<HolisticDescriptor>& db,
                                          const std::vector<HolisticDescriptor>& q) {
  if (db.empty() || q.empty())
    throw std::invalid_argument("similarity_matrix: empty descriptor list");
  const EncoderFingerprint& meta = db.front().meta;
  const AggregationKind kind = db.front().kind;
  auto check = [&](const HolisticDescriptor& h) {
    if (!(h.meta == meta))
      throw IoError("similarity_matrix: fingerprint mismatch: '" +
                    meta.to_string() + "' vs '" + h.meta.to_string() + "'");
    if (h.kind != kind)
      throw IoError("similarity_matrix: aggregation kind mismatch");
  };
  for (const auto& h : db) check(h);
  for (const auto& h : q) check(h);

  SimilarityMatrix m;
  m.method = std::string("hdc-") + to_string(kind);
  m.fingerprint = meta.to_string();
  m.db_ids.reserve(db.size());
  m.q_ids.reserve(q.size());
  for (const auto& h : db) m.db_ids.push_back(h.id);
  for (const auto& h : q) m.q_ids.push_back(h.id);
  m.values.resize(db.size() * q.size());
  for (std::size_t i = 0; i < db.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j)
      m.values[i * q.size() + j] = cosine(db[i].vector, q[j].vector);
  return m;
}

struct PrPoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

struct PrCurve {
  std::vector<PrPoint> points;
  double average_precision = 0.0;
};

namespace detail {

inline void check_gt_bounds(const SimilarityMatrix& m, const GroundTruth& gt) {
  for (const auto& [i, j] : gt.positives) {
    if (i >= m.rows() || j >= m.cols())
      throw IoError("ground truth pair (" + std::to_string(i) + "," +
                    std::to_string(j) + ") outside matrix bounds");
  }
}

}  // namespace detail

/// Threshold-swept precision-recall curve over all matrix entries. One point
/// per distinct similarity value (pairs with sim >= threshold classified as
/// matches), swept from the highest value down. Average precision is the
/// trapezoidal area under the curve over the recall axis, with the curve
/// extended to recall 0 at the precision of the highest-threshold point.
inline PrCurve precision_recall_curve(const SimilarityMatrix& m,
                                      const GroundTruth& gt) {
  detail::check_gt_bounds(m, gt);
  const std::size_t total = m.rows() * m.cols();
  std::size_t total_pos = gt.positives.size();
  if (total_pos == 0)
    throw std::invalid_argument("precision_recall_curve: ground truth has no positives");

  // (value, is_positive) for every pair, sorted by value descending.
  std::vector<std::pair<double, bool>> entries;
  entries.reserve(total);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      entries.emplace_back(m.at(i, j), gt.is_positive(i, j));
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  PrCurve curve;
  std::size_t tp = 0, fp = 0;
  std::size_t k = 0;
  while (k < total) {
    double threshold = entries[k].first;
    while (k < total && entries[k].first == threshold) {
      if (entries[k].second)
        ++tp;
      else
        ++fp;
      ++k;
    }
    PrPoint pt;
    pt.threshold = threshold;
    pt.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    pt.recall = static_cast<double>(tp) / static_cast<double>(total_pos);
    curve.points.push_back(pt);
  }

  double ap = 0.0;
  double prev_recall = 0.0;
  double prev_precision = curve.points.front().precision;
  for (const PrPoint& pt : curve.points) {
    ap += (pt.recall - prev_recall) * 0.5 * (pt.precision + prev_precision);
    prev_recall = pt.recall;
    prev_precision = pt.precision;
  }
  curve.average_precision = ap;
  return curve;
}

inline double average_precision(const SimilarityMatrix& m, const GroundTruth& gt) {
  return precision_recall_curve(m, gt).average_precision;
}

/// Recall over the k best database matches per query. A query counts as a
/// hit at k iff any of its k highest-similarity database entries is a
/// positive; ties in similarity break toward the lower database index.
/// Queries without any positive are excluded from the denominator.
inline std::vector<std::pair<int, double>> recall_at_k(
    const SimilarityMatrix& m, const GroundTruth& gt, const std::vector<int>& ks) {
  detail::check_gt_bounds(m, gt);
  for (int k : ks)
    if (k < 1) throw std::invalid_argument("recall_at_k: k must be >= 1");

  const std::size_t n_db = m.rows(), n_q = m.cols();
  std::vector<std::size_t> queries_with_pos;
  for (std::size_t j = 0; j < n_q; ++j) {
    bool any = false;
    for (std::size_t i = 0; i < n_db && !any; ++i) any = gt.is_positive(i, j);
    if (any) queries_with_pos.push_back(j);
  }

  std::vector<std::pair<int, double>> out;
  if (queries_with_pos.empty()) {
    for (int k : ks) out.emplace_back(k, 0.0);
    return out;
  }

  // Rank of the best-placed positive per query, under (sim desc, index asc).
  std::vector<std::size_t> best_positive_rank(queries_with_pos.size());
  std::vector<std::size_t> order(n_db);
  for (std::size_t qi = 0; qi < queries_with_pos.size(); ++qi) {
    std::size_t j = queries_with_pos[qi];
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      double sa = m.at(a, j), sb = m.at(b, j);
      if (sa != sb) return sa > sb;
      return a < b;
    });
    std::size_t rank = n_db;
    for (std::size_t r = 0; r < n_db; ++r) {
      if (gt.is_positive(order[r], j)) {
        rank = r;
        break;
      }
    }
    best_positive_rank[qi] = rank;
  }

  for (int k : ks) {
    std::size_t hits = 0;
    for (std::size_t rank : best_positive_rank)
      if (rank < static_cast<std::size_t>(k)) ++hits;
    out.emplace_back(k, static_cast<double>(hits) /
                            static_cast<double>(queries_with_pos.size()));
  }
  return out;
}

/// Spearman rank correlation with average ranks for ties.
inline double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("spearman: need two equal-length series of size >= 2");
  auto ranks = [](std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return v[x] < v[y]; });
    std::vector<double> r(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
      std::size_t j = i;
      while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
      double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  std::vector<double> ra = ranks(a), rb = ranks(b);
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= static_cast<double>(ra.size());
  mb /= static_cast<double>(rb.size());
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    double da = ra[i] - ma, db_ = rb[i] - mb;
    cov += da * db_;
    va += da * da;
    vb += db_ * db_;
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

}  // namespace hdc
