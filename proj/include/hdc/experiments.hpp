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
#include <cstdint>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "hdc/config.hpp"
#include "hdc/encoder.hpp"
#include "hdc/evaluation.hpp"
#include "hdc/position.hpp"
#include "hdc/rng.hpp"
#include "hdc/symbol_table.hpp"
#include "hdc/synth.hpp"

namespace hdc {

struct CapacityRow {
  int n = 0;             // bundle size: one true match plus n-1 distractors
  double pose_mean = 0.0, pose_std = 0.0;    // with pose binding
  double plain_mean = 0.0, plain_std = 0.0;  // without binding
};

struct CapacityResult {
  std::vector<CapacityRow> rows;
  double random_mean = 0.0;  // similarity of random descriptor pairs
  double random_std = 0.0;
  int dim = 0;
  std::uint64_t seed = 0;
  int trials = 0;
};

/// Bundle-capacity experiment: how well does the similarity to a single true
/// matching survive when the query side bundles n-1 additional distractor
/// encodings? Measured once with pose binding (each unit descriptor bound to
/// the encoding of a random image position) and once with plain bundling of
/// the raw unit descriptors, against the random-pair baseline. The expected
/// decay for quasi-orthogonal unit encodings is 1/sqrt(n).
inline CapacityResult capacity_experiment(const std::vector<int>& counts,
                                          int dim, std::uint64_t seed,
                                          int trials, double width = 640.0,
                                          double height = 480.0, int nx = 4,
                                          int ny = 6) {
  if (counts.empty()) throw std::invalid_argument("capacity_experiment: empty count list");
  for (int n : counts)
    if (n < 1) throw std::invalid_argument("capacity_experiment: counts must be >= 1");
  if (dim < 1 || trials < 1)
    throw std::invalid_argument("capacity_experiment: dim and trials must be positive");

  std::vector<int> ns = counts;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  const int max_n = ns.back();

  SymbolTable table(seed, static_cast<std::size_t>(dim));
  BasisBank bx(table, Axis::X, 1.0, width, nx);
  BasisBank by(table, Axis::Y, 1.0, height, ny);
  rng::Stream s(rng::derive_key(seed, "capacity"));

  auto unit_vec = [&]() {
    HDVector v(static_cast<std::size_t>(dim));
    double n2 = 0.0;
    for (std::size_t i = 0; i < v.dim(); ++i) {
      v[i] = s.next_gaussian();
      n2 += v[i] * v[i];
    }
    double inv = 1.0 / std::sqrt(n2);
    for (std::size_t i = 0; i < v.dim(); ++i) v[i] *= inv;
    return v;
  };
  auto random_pose = [&]() {
    return encode_pose(bx, by, s.next_uniform(1.0, width), s.next_uniform(1.0, height));
  };

  std::vector<std::vector<double>> pose_sims(ns.size()), plain_sims(ns.size());
  for (int t = 0; t < trials; ++t) {
    HDVector desc = unit_vec();
    HDVector pose = random_pose();
    HDVector db_pose_enc = bind(desc, pose);

    HDVector acc_pose = db_pose_enc;  // query side contains the identical encoding
    HDVector acc_plain = desc;
    std::size_t next = 0;
    for (int n = 1; n <= max_n; ++n) {
      if (n > 1) {
        HDVector dd = unit_vec();
        accumulate(acc_pose, bind(dd, random_pose()));
        accumulate(acc_plain, dd);
      }
      if (next < ns.size() && ns[next] == n) {
        pose_sims[next].push_back(cosine(db_pose_enc, acc_pose));
        plain_sims[next].push_back(cosine(desc, acc_plain));
        ++next;
      }
    }
  }

  auto mean_std = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double e : v) m += e;
    m /= static_cast<double>(v.size());
    double var = 0.0;
    for (double e : v) var += (e - m) * (e - m);
    var = v.size() > 1 ? var / static_cast<double>(v.size() - 1) : 0.0;
    return std::make_pair(m, std::sqrt(var));
  };

  CapacityResult res;
  res.dim = dim;
  res.seed = seed;
  res.trials = trials;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    CapacityRow row;
    row.n = ns[k];
    std::tie(row.pose_mean, row.pose_std) = mean_std(pose_sims[k]);
    std::tie(row.plain_mean, row.plain_std) = mean_std(plain_sims[k]);
    res.rows.push_back(row);
  }

  std::vector<double> rand_sims;
  rand_sims.reserve(1000);
  for (int t = 0; t < 1000; ++t) rand_sims.push_back(cosine(unit_vec(), unit_vec()));
  std::tie(res.random_mean, res.random_std) = mean_std(rand_sims);
  return res;
}

/// Encodes a benchmark and returns the database x query similarity matrix.
inline SimilarityMatrix benchmark_similarity(const SynthBenchmark& bench,
                                             const RunConfig& cfg,
                                             AggregationKind kind) {
  Encoder enc(cfg, bench.database.front().dim);
  std::vector<HolisticDescriptor> db = enc.encode(bench.database, kind);
  std::vector<HolisticDescriptor> q = enc.encode(bench.queries, kind);
  return similarity_matrix(db, q);
}

/// One full synthetic run: generate, encode, evaluate.
inline double benchmark_ap(const SynthParams& params, const RunConfig& cfg,
                           AggregationKind kind) {
  SynthBenchmark bench = make_synth(params);
  return average_precision(benchmark_similarity(bench, cfg, kind), bench.gt);
}

struct DimSweepRow {
  std::uint32_t dim = 0;
  std::uint64_t seed = 0;
  double ap = 0.0;
};

/// Runs the benchmark at every dimensionality for `seeds` consecutive seeds
/// (benchmark and encoder share the seed). Reports one AP per (d, seed).
inline std::vector<DimSweepRow> dimension_sweep(const SynthParams& base,
                                                const RunConfig& cfg,
                                                const std::vector<std::uint32_t>& dims,
                                                int seeds) {
  if (seeds < 1) throw std::invalid_argument("dimension_sweep: seeds must be >= 1");
  for (std::uint32_t d : dims)
    if (d < 16) throw std::invalid_argument("dimension_sweep: dims must be >= 16");
  std::vector<DimSweepRow> rows;
  for (int r = 0; r < seeds; ++r) {
    SynthParams p = base;
    p.seed = base.seed + static_cast<std::uint64_t>(r);
    SynthBenchmark bench = make_synth(p);
    for (std::uint32_t d : dims) {
      RunConfig c = cfg;
      c.dim = d;
      c.seed = p.seed;
      c.project_seed = p.seed;
      rows.push_back({d, p.seed,
                      average_precision(
                          benchmark_similarity(bench, c, AggregationKind::local_pose),
                          bench.gt)});
    }
  }
  return rows;
}

struct GridSweepRow {
  int nx = 0;
  int ny = 0;
  std::uint64_t seed = 0;
  double ap = 0.0;
};

/// AP for every (n_x, n_y) combination on the benchmark, typically with a
/// horizontal viewpoint shift applied to the queries.
inline std::vector<GridSweepRow> grid_sweep(const SynthParams& base,
                                            const RunConfig& cfg,
                                            const std::vector<int>& nxs,
                                            const std::vector<int>& nys,
                                            int seeds) {
  if (seeds < 1) throw std::invalid_argument("grid_sweep: seeds must be >= 1");
  for (int v : nxs)
    if (v < 1) throw std::invalid_argument("grid_sweep: nx values must be >= 1");
  for (int v : nys)
    if (v < 1) throw std::invalid_argument("grid_sweep: ny values must be >= 1");
  std::vector<GridSweepRow> rows;
  for (int r = 0; r < seeds; ++r) {
    SynthParams p = base;
    p.seed = base.seed + static_cast<std::uint64_t>(r);
    SynthBenchmark bench = make_synth(p);
    for (int nx : nxs) {
      for (int ny : nys) {
        RunConfig c = cfg;
        c.nx = nx;
        c.ny = ny;
        c.seed = p.seed;
        c.project_seed = p.seed;
        rows.push_back({nx, ny, p.seed,
                        average_precision(
                            benchmark_similarity(bench, c, AggregationKind::local_pose),
                            bench.gt)});
      }
    }
  }
  return rows;
}

}  // namespace hdc
