/*
 * Copyright 2026 The exactsel Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "exactsel/predicate.hpp"
#include "exactsel/table.hpp"

namespace exactsel {

enum class SynopsisKind : std::uint8_t { EquiWidth, EquiDepth, CountMin, Sample };

std::string_view to_string(SynopsisKind kind);

struct SynopsisParams {
  std::size_t buckets = 100;
  std::size_t sketch_width = 2048;
  std::size_t sketch_depth = 4;
  double sample_rate = 0.01;
  std::uint64_t seed = 1;
};

/// One histogram bucket. `lo`/`hi` are the smallest and largest value that
/// landed in it; `extent_lo`/`extent_hi` is the half-open value range the
/// bucket stands for when interpolating (integral data: value x covers
/// [x, x + 1)).
struct HistogramBucket {
  double lo = 0;
  double hi = 0;
  double extent_lo = 0;
  double extent_hi = 0;
  std::uint64_t count = 0;
  std::uint64_t distinct = 0;

  bool operator==(const HistogramBucket&) const = default;
};

/// Single-column histogram, equi-width or equi-depth.
class Histogram {
 public:
  /// B buckets of identical width over [min, max].
  static Histogram equi_width(const Column& column, std::size_t buckets);
  /// Buckets of depth D = ceil(T / B) over the sorted values; only the last
  /// bucket may hold fewer rows.
  static Histogram equi_depth(const Column& column, std::size_t buckets);

  SynopsisKind kind() const { return kind_; }
  const std::vector<HistogramBucket>& buckets() const { return buckets_; }
  std::uint64_t total() const { return total_; }
  /// D for equi-depth histograms, 0 for equi-width.
  std::uint64_t depth() const { return depth_; }
  double min() const { return min_; }
  double max() const { return max_; }

  /// rows(b) / V(b) for the bucket holding `value`; 0 outside [min, max].
  double estimate_equal(double value) const;
  /// Full buckets inside the range plus linear interpolation in the boundary
  /// bucket.
  double estimate_range(CompareOp op, double value) const;

  bool operator==(const Histogram&) const = default;

 private:
  const HistogramBucket* bucket_for(double value) const;
  double count_below(double value, bool inclusive) const;

  SynopsisKind kind_ = SynopsisKind::EquiDepth;
  bool integral_ = true;
  std::uint64_t total_ = 0;
  std::uint64_t depth_ = 0;
  double min_ = 0;
  double max_ = 0;
  std::vector<HistogramBucket> buckets_;
};

/// d x w counter matrix, one seeded multiply-shift hash per row.
class CountMinSketch {
 public:
  CountMinSketch(std::size_t width, std::size_t depth, std::uint64_t seed);
  static CountMinSketch build(const Column& column, std::size_t width, std::size_t depth, std::uint64_t seed);

  void update(std::uint64_t key, std::uint64_t count = 1);
  /// Minimum over rows of the counter each row's hash selects.
  std::uint64_t point(std::uint64_t key) const;
  std::size_t bucket(std::size_t row, std::uint64_t key) const;

  std::size_t width() const { return width_; }
  std::size_t depth() const { return depth_; }
  std::uint64_t counter(std::size_t row, std::size_t col) const { return counters_[row * width_ + col]; }
  std::uint64_t row_sum(std::size_t row) const;
  std::uint64_t total() const { return total_; }

  bool operator==(const CountMinSketch&) const = default;

 private:
  std::size_t width_;
  std::size_t depth_;
  std::vector<std::uint64_t> multipliers_;
  std::vector<std::uint64_t> offsets_;
  std::vector<std::uint64_t> counters_;
  std::uint64_t total_ = 0;
};

/// Key a value is hashed under: the int64 bits, or the double bits with -0.0
/// folded into 0.0.
std::uint64_t sketch_key(const Column& column, std::size_t row);
std::uint64_t sketch_key(const Literal& literal);

/// Uniform sample of row indices drawn without replacement.
class RowSample {
 public:
  /// Reservoir pass over [0, population); sample size = round(rate * population),
  /// at least 1 when the population is non-empty.
  static RowSample draw(std::size_t population, double rate, std::uint64_t seed);

  const std::vector<std::uint32_t>& rows() const { return rows_; }
  std::size_t sample_size() const { return rows_.size(); }
  std::size_t population_size() const { return population_; }
  std::uint64_t seed() const { return seed_; }

  bool operator==(const RowSample&) const = default;

 private:
  std::vector<std::uint32_t> rows_;  // ascending
  std::size_t population_ = 0;
  std::uint64_t seed_ = 0;
};

using Synopsis = std::variant<Histogram, CountMinSketch, RowSample>;

/// Builds a synopsis of `kind` over `column` of `table`. Throws InvalidStatistics
/// for invalid params or a histogram over a text column.
Synopsis build_synopsis(const Table& table, const Column& column, SynopsisKind kind, const SynopsisParams& params);

}  // namespace exactsel
