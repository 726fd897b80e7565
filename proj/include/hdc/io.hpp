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
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hdc/aggregate.hpp"
#include "hdc/config.hpp"
#include "hdc/error.hpp"
#include "hdc/evaluation.hpp"
#include "hdc/experiments.hpp"
#include "hdc/features.hpp"

namespace hdc::io {

namespace detail {

// ---- formatting -----------------------------------------------------------

/// Shortest decimal that round-trips a float (9 significant digits).
inline std::string fmt_f32(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(static_cast<float>(v)));
  return buf;
}

/// Full-precision double, round-trips exactly.
inline std::string fmt_f64(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---- text parsing ---------------------------------------------------------

class LineReader {
 public:
  LineReader(std::istream& in, std::string path)
      : in_(in), path_(std::move(path)) {}

  /// Next non-comment line; false at EOF.
  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++lineno_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty() && line[0] == '#') continue;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw IoError(path_ + ":" + std::to_string(lineno_) + ": " + msg);
  }

  int lineno() const noexcept { return lineno_; }
  const std::string& path() const noexcept { return path_; }

 private:
  std::istream& in_;
  std::string path_;
  int lineno_ = 0;
};

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

inline double parse_double(const std::string& tok, LineReader& r) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end != begin + tok.size()) r.fail("not a number: '" + tok + "'");
  if (!std::isfinite(v)) r.fail("non-finite value: '" + tok + "'");
  return v;
}

inline long parse_long(const std::string& tok, LineReader& r) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  long v = std::strtol(begin, &end, 10);
  if (end != begin + tok.size()) r.fail("not an integer: '" + tok + "'");
  return v;
}

// ---- little-endian binary primitives --------------------------------------

inline void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8),
               static_cast<char>(v >> 16), static_cast<char>(v >> 24)};
  out.write(b, 4);
}

inline void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>(v >> (8 * i));
  out.write(b, 8);
}

inline void put_f32(std::ostream& out, double v) {
  float f = static_cast<float>(v);
  std::uint32_t u;
  std::memcpy(&u, &f, 4);
  put_u32(out, u);
}

inline void put_string(std::ostream& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

class BinReader {
 public:
  BinReader(std::istream& in, std::string path) : in_(in), path_(std::move(path)) {}

  std::uint32_t u32() {
    unsigned char b[4];
    read(b, 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  }

  std::uint64_t u64() {
    unsigned char b[8];
    read(b, 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }

  std::uint8_t u8() {
    unsigned char b;
    read(&b, 1);
    return b;
  }

  double f32() {
    std::uint32_t u = u32();
    float f;
    std::memcpy(&f, &u, 4);
    return static_cast<double>(f);
  }

  std::string str() {
    std::uint32_t len = u32();
    if (len > (1u << 20)) fail("unreasonable string length");
    std::string s(len, '\0');
    if (len) read(s.data(), len);
    return s;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw IoError(path_ + ": " + msg);
  }

 private:
  void read(void* dst, std::size_t n) {
    in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) fail("truncated file");
  }

  std::istream& in_;
  std::string path_;
};

inline std::ofstream open_out(const std::filesystem::path& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  return out;
}

inline std::ifstream open_in(const std::filesystem::path& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw IoError("cannot open: " + path.string());
  return in;
}

}  // namespace detail

// ---- feature files ---------------------------------------------------------

inline constexpr char kFeatureBinaryMagic[9] = "HDCFEAT1";  // 8 bytes on disk

/// Text feature file:
///   FEAT v1
///   image <id>
///   size <w> <h>
///   count <n> dim <D>
///   x y score d_1 ... d_D        (n rows, decimal floats)
/// Lines starting with '#' are comments. The binary container (magic
/// HDCFEAT1, little-endian 32-bit floats) holds the same content.
inline void write_feature_file(const std::filesystem::path& path,
                               const FeatureSet& fs, bool binary = false,
                               const std::string& comment = {}) {
  if (binary) {
    auto out = detail::open_out(path, true);
    out.write(kFeatureBinaryMagic, 8);
    detail::put_string(out, fs.image_id);
    detail::put_f32(out, fs.width);
    detail::put_f32(out, fs.height);
    detail::put_u32(out, static_cast<std::uint32_t>(fs.features.size()));
    detail::put_u32(out, static_cast<std::uint32_t>(fs.dim));
    for (const Feature& f : fs.features) {
      detail::put_f32(out, f.x);
      detail::put_f32(out, f.y);
      detail::put_f32(out, f.score);
      for (double v : f.descriptor) detail::put_f32(out, v);
    }
    if (!out) throw IoError("write failed: " + path.string());
    return;
  }

  auto out = detail::open_out(path, false);
  out << "FEAT v1\n";
  if (!comment.empty()) out << "# " << comment << "\n";
  out << "image " << fs.image_id << "\n";
  out << "size " << detail::fmt_f32(fs.width) << " " << detail::fmt_f32(fs.height) << "\n";
  out << "count " << fs.features.size() << " dim " << fs.dim << "\n";
  for (const Feature& f : fs.features) {
    out << detail::fmt_f32(f.x) << " " << detail::fmt_f32(f.y) << " "
        << detail::fmt_f32(f.score);
    for (double v : f.descriptor) out << " " << detail::fmt_f32(v);
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path.string());
}

namespace detail {

inline FeatureSet read_feature_binary(std::istream& in, const std::string& path) {
  BinReader r(in, path);
  FeatureSet fs;
  fs.image_id = r.str();
  fs.width = r.f32();
  fs.height = r.f32();
  std::uint32_t count = r.u32();
  std::uint32_t dim = r.u32();
  if (dim == 0) r.fail("descriptor dim must be positive");
  fs.dim = dim;
  fs.features.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    Feature f;
    f.x = r.f32();
    f.y = r.f32();
    f.score = r.f32();
    f.descriptor.resize(dim);
    for (std::uint32_t k = 0; k < dim; ++k) {
      f.descriptor[k] = r.f32();
      if (!std::isfinite(f.descriptor[k])) r.fail("non-finite descriptor value");
    }
    fs.features.push_back(std::move(f));
  }
  char extra;
  if (in.read(&extra, 1)) r.fail("trailing bytes after last feature");
  return fs;
}

inline FeatureSet read_feature_text(std::istream& in, const std::string& path) {
  LineReader r(in, path);
  std::string line;
  if (!r.next(line) || line != "FEAT v1") r.fail("expected header 'FEAT v1'");

  FeatureSet fs;
  if (!r.next(line) || line.rfind("image ", 0) != 0) r.fail("expected 'image <id>'");
  fs.image_id = line.substr(6);

  if (!r.next(line)) r.fail("expected 'size <w> <h>'");
  auto toks = split_ws(line);
  if (toks.size() != 3 || toks[0] != "size") r.fail("expected 'size <w> <h>'");
  fs.width = parse_double(toks[1], r);
  fs.height = parse_double(toks[2], r);
  if (fs.width <= 0 || fs.height <= 0) r.fail("image size must be positive");

  if (!r.next(line)) r.fail("expected 'count <n> dim <D>'");
  toks = split_ws(line);
  if (toks.size() != 4 || toks[0] != "count" || toks[2] != "dim")
    r.fail("expected 'count <n> dim <D>'");
  long count = parse_long(toks[1], r);
  long dim = parse_long(toks[3], r);
  if (count < 0) r.fail("negative feature count");
  if (dim < 1) r.fail("descriptor dim must be positive");
  fs.dim = static_cast<std::size_t>(dim);

  fs.features.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    if (!r.next(line))
      r.fail("declared count " + std::to_string(count) + " but found only " +
             std::to_string(i) + " rows");
    toks = split_ws(line);
    if (toks.size() != static_cast<std::size_t>(3 + dim))
      r.fail("expected " + std::to_string(3 + dim) + " values, got " +
             std::to_string(toks.size()));
    Feature f;
    f.x = parse_double(toks[0], r);
    f.y = parse_double(toks[1], r);
    f.score = parse_double(toks[2], r);
    f.descriptor.resize(static_cast<std::size_t>(dim));
    for (long k = 0; k < dim; ++k)
      f.descriptor[static_cast<std::size_t>(k)] =
          parse_double(toks[static_cast<std::size_t>(3 + k)], r);
    fs.features.push_back(std::move(f));
  }
  if (r.next(line)) r.fail("trailing content after declared feature rows");
  return fs;
}

}  // namespace detail

/// Reads a feature file; the binary container is detected by its magic.
inline FeatureSet read_feature_file(const std::filesystem::path& path) {
  auto in = detail::open_in(path, true);
  char magic[8] = {};
  in.read(magic, 8);
  if (in.gcount() == 8 && std::memcmp(magic, kFeatureBinaryMagic, 8) == 0)
    return detail::read_feature_binary(in, path.string());
  in.clear();
  in.seekg(0);
  return detail::read_feature_text(in, path.string());
}

// ---- holistic descriptor files ---------------------------------------------

inline constexpr char kHolisticMagic[9] = "HDCHOLO1";

struct HolisticFile {
  EncoderFingerprint meta;
  std::vector<HolisticDescriptor> descriptors;
};

/// Binary container for holistic descriptors. Vectors are stored as
/// little-endian 32-bit floats; the encoder fingerprint is stored once per
/// file and every descriptor must carry it.
inline void write_holistic(const std::filesystem::path& path,
                           std::span<const HolisticDescriptor> descriptors) {
  if (descriptors.empty())
    throw std::invalid_argument("write_holistic: nothing to write");
  const EncoderFingerprint& meta = descriptors.front().meta;
  for (const auto& h : descriptors) {
    if (!(h.meta == meta))
      throw IoError("write_holistic: mixed fingerprints in one file");
    if (h.vector.dim() != meta.dim)
      throw IoError("write_holistic: descriptor dim does not match fingerprint");
  }
  auto out = detail::open_out(path, true);
  out.write(kHolisticMagic, 8);
  detail::put_u32(out, 1);  // version
  detail::put_u32(out, meta.dim);
  detail::put_u64(out, meta.seed);
  detail::put_u32(out, meta.nx);
  detail::put_u32(out, meta.ny);
  out.put(static_cast<char>(meta.centering));
  out.put(meta.projection ? 1 : 0);
  detail::put_u64(out, meta.projection_seed);
  detail::put_u32(out, meta.projection_in_dim);
  detail::put_u32(out, meta.budget);
  detail::put_u32(out, static_cast<std::uint32_t>(descriptors.size()));
  for (const auto& h : descriptors) {
    detail::put_string(out, h.id);
    out.put(static_cast<char>(h.kind));
    out.put(h.degenerate ? 1 : 0);
    for (double v : h.vector) detail::put_f32(out, v);
  }
  if (!out) throw IoError("write failed: " + path.string());
}

inline HolisticFile read_holistic(const std::filesystem::path& path) {
  auto in = detail::open_in(path, true);
  detail::BinReader r(in, path.string());
  char magic[8];
  in.read(magic, 8);
  if (in.gcount() != 8 || std::memcmp(magic, kHolisticMagic, 8) != 0)
    r.fail("not a holistic descriptor file (bad magic)");
  std::uint32_t version = r.u32();
  if (version != 1) r.fail("unsupported version " + std::to_string(version));

  HolisticFile file;
  file.meta.dim = r.u32();
  file.meta.seed = r.u64();
  file.meta.nx = r.u32();
  file.meta.ny = r.u32();
  std::uint8_t centering = r.u8();
  if (centering > 1) r.fail("bad centering mode");
  file.meta.centering = static_cast<CenteringMode>(centering);
  file.meta.projection = r.u8() != 0;
  file.meta.projection_seed = r.u64();
  file.meta.projection_in_dim = r.u32();
  file.meta.budget = r.u32();
  if (file.meta.dim == 0) r.fail("dimensionality must be positive");

  std::uint32_t count = r.u32();
  file.descriptors.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    HolisticDescriptor h;
    h.id = r.str();
    std::uint8_t kind = r.u8();
    if (kind > 2) r.fail("bad aggregation kind");
    h.kind = static_cast<AggregationKind>(kind);
    h.degenerate = r.u8() != 0;
    h.meta = file.meta;
    h.vector = HDVector(file.meta.dim);
    for (std::uint32_t k = 0; k < file.meta.dim; ++k) {
      h.vector[k] = r.f32();
      if (!std::isfinite(h.vector[k])) r.fail("non-finite vector entry");
    }
    file.descriptors.push_back(std::move(h));
  }
  char extra;
  if (in.read(&extra, 1)) r.fail("trailing bytes after last descriptor");
  return file;
}

// ---- ground truth -----------------------------------------------------------

/// CSV rows `db_index,query_index` (0-based); '#' lines are comments.
inline void write_ground_truth(const std::filesystem::path& path,
                               const GroundTruth& gt,
                               const std::string& comment = {}) {
  auto out = detail::open_out(path, false);
  out << "# ground-truth v1\n";
  if (!comment.empty()) out << "# " << comment << "\n";
  for (const auto& [i, j] : gt.positives) out << i << "," << j << "\n";
  if (!out) throw IoError("write failed: " + path.string());
}

inline GroundTruth read_ground_truth(const std::filesystem::path& path) {
  auto in = detail::open_in(path, false);
  detail::LineReader r(in, path.string());
  GroundTruth gt;
  std::string line;
  while (r.next(line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) r.fail("expected 'db_index,query_index'");
    long i = detail::parse_long(line.substr(0, comma), r);
    long j = detail::parse_long(line.substr(comma + 1), r);
    if (i < 0 || j < 0) r.fail("indices must be non-negative");
    gt.positives.insert({static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
  }
  return gt;
}

// ---- similarity matrices ----------------------------------------------------

/// CSV with '#'-prefixed metadata header followed by one row of
/// comma-separated full-precision values per database entry.
inline void write_similarity_csv(const std::filesystem::path& path,
                                 const SimilarityMatrix& m) {
  for (const auto& id : m.db_ids)
    if (id.find(',') != std::string::npos)
      throw IoError("write_similarity_csv: id contains a comma: " + id);
  for (const auto& id : m.q_ids)
    if (id.find(',') != std::string::npos)
      throw IoError("write_similarity_csv: id contains a comma: " + id);

  auto out = detail::open_out(path, false);
  out << "# similarity v1\n";
  out << "# method " << m.method << "\n";
  out << "# fingerprint " << m.fingerprint << "\n";
  out << "# rows " << m.rows() << "\n";
  out << "# cols " << m.cols() << "\n";
  out << "# db_ids";
  for (const auto& id : m.db_ids) out << " " << id;
  out << "\n# q_ids";
  for (const auto& id : m.q_ids) out << " " << id;
  out << "\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ",";
      out << detail::fmt_f64(m.at(i, j));
    }
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path.string());
}

inline SimilarityMatrix read_similarity_csv(const std::filesystem::path& path) {
  auto in = detail::open_in(path, false);
  SimilarityMatrix m;
  std::string line;
  int lineno = 0;
  std::size_t rows = 0, cols = 0;
  bool seen_header = false;
  auto fail = [&](const std::string& msg) -> void {
    throw IoError(path.string() + ":" + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream is(line.substr(1));
      std::string key;
      is >> key;
      if (key == "similarity") {
        seen_header = true;
      } else if (key == "method") {
        is >> m.method;
      } else if (key == "fingerprint") {
        std::getline(is, m.fingerprint);
        if (!m.fingerprint.empty() && m.fingerprint.front() == ' ')
          m.fingerprint.erase(0, 1);
      } else if (key == "rows") {
        is >> rows;
      } else if (key == "cols") {
        is >> cols;
      } else if (key == "db_ids") {
        std::string id;
        while (is >> id) m.db_ids.push_back(id);
      } else if (key == "q_ids") {
        std::string id;
        while (is >> id) m.q_ids.push_back(id);
      }
      continue;
    }
    // data row
    std::size_t start = 0;
    std::vector<double> row;
    while (start <= line.size()) {
      std::size_t comma = line.find(',', start);
      std::string tok = line.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start);
      const char* begin = tok.c_str();
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      if (end != begin + tok.size() || tok.empty()) fail("not a number: '" + tok + "'");
      if (!std::isfinite(v)) fail("non-finite similarity value");
      row.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cols != 0 && row.size() != cols)
      fail("expected " + std::to_string(cols) + " columns, got " +
           std::to_string(row.size()));
    m.values.insert(m.values.end(), row.begin(), row.end());
  }
  if (!seen_header) throw IoError(path.string() + ": missing '# similarity v1' header");
  if (rows == 0 || cols == 0) throw IoError(path.string() + ": missing rows/cols header");
  if (m.db_ids.size() != rows || m.q_ids.size() != cols)
    throw IoError(path.string() + ": id list lengths do not match rows/cols");
  if (m.values.size() != rows * cols)
    throw IoError(path.string() + ": expected " + std::to_string(rows * cols) +
                  " values, got " + std::to_string(m.values.size()));
  return m;
}

// ---- report and sweep outputs (write-only) ----------------------------------

inline void write_pr_csv(const std::filesystem::path& path, const PrCurve& curve,
                         const std::string& fingerprint) {
  auto out = detail::open_out(path, false);
  out << "# pr-curve v1\n";
  out << "# fingerprint " << fingerprint << "\n";
  out << "# ap " << detail::fmt_f64(curve.average_precision) << "\n";
  out << "threshold,precision,recall\n";
  for (const PrPoint& pt : curve.points)
    out << detail::fmt_f64(pt.threshold) << "," << detail::fmt_f64(pt.precision)
        << "," << detail::fmt_f64(pt.recall) << "\n";
  if (!out) throw IoError("write failed: " + path.string());
}

inline void write_recall_csv(const std::filesystem::path& path,
                             const std::vector<std::pair<int, double>>& recalls,
                             const std::string& fingerprint) {
  auto out = detail::open_out(path, false);
  out << "# recall-at-k v1\n";
  out << "# fingerprint " << fingerprint << "\n";
  out << "k,recall\n";
  for (const auto& [k, rec] : recalls)
    out << k << "," << detail::fmt_f64(rec) << "\n";
  if (!out) throw IoError("write failed: " + path.string());
}

inline void write_capacity_csv(const std::filesystem::path& path,
                               const CapacityResult& res) {
  auto out = detail::open_out(path, false);
  out << "# capacity v1\n";
  out << "# d " << res.dim << "\n";
  out << "# seed " << res.seed << "\n";
  out << "# trials " << res.trials << "\n";
  out << "# random_mean " << detail::fmt_f64(res.random_mean) << "\n";
  out << "# random_std " << detail::fmt_f64(res.random_std) << "\n";
  out << "n,pose_mean,pose_std,plain_mean,plain_std\n";
  for (const CapacityRow& row : res.rows)
    out << row.n << "," << detail::fmt_f64(row.pose_mean) << ","
        << detail::fmt_f64(row.pose_std) << "," << detail::fmt_f64(row.plain_mean)
        << "," << detail::fmt_f64(row.plain_std) << "\n";
  if (!out) throw IoError("write failed: " + path.string());
}

inline void write_dim_sweep_csv(const std::filesystem::path& path,
                                const std::vector<DimSweepRow>& rows,
                                const std::string& params) {
  auto out = detail::open_out(path, false);
  out << "# dim-sweep v1\n";
  out << "# synth " << params << "\n";
  out << "d,seed,ap\n";
  for (const DimSweepRow& row : rows)
    out << row.dim << "," << row.seed << "," << detail::fmt_f64(row.ap) << "\n";
  if (!out) throw IoError("write failed: " + path.string());
}

inline void write_grid_sweep_csv(const std::filesystem::path& path,
                                 const std::vector<GridSweepRow>& rows,
                                 const std::string& params) {
  auto out = detail::open_out(path, false);
  out << "# grid-sweep v1\n";
  out << "# synth " << params << "\n";
  out << "nx,ny,seed,ap\n";
  for (const GridSweepRow& row : rows)
    out << row.nx << "," << row.ny << "," << row.seed << ","
        << detail::fmt_f64(row.ap) << "\n";
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace hdc::io
