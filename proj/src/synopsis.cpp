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

#include "exactsel/synopsis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "exactsel/generator.hpp"

namespace exactsel {

std::string_view to_string(SynopsisKind kind) {
  switch (kind) {
    case SynopsisKind::EquiWidth: return "equiwidth";
    case SynopsisKind::EquiDepth: return "equidepth";
    case SynopsisKind::CountMin: return "cms";
    case SynopsisKind::Sample: return "sample";
  }
  return "?";
}

namespace {

std::vector<double> sorted_values(const Column& column) {
  std::vector<double> v;
  v.reserve(column.size());
  if (stores_integers(column.type))
    for (auto x : column.ints) v.push_back(static_cast<double>(x));
  else
    v = column.floats;
  std::sort(v.begin(), v.end());
  return v;
}

void check_histogram_input(const Column& column, std::size_t buckets) {
  if (buckets < 1) throw InvalidStatistics("histogram needs at least one bucket");
  if (column.type == ColumnType::Text)
    throw InvalidStatistics(fmt::format("cannot build a histogram over text column {}", column.name));
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Histogram Histogram::equi_width(const Column& column, std::size_t buckets) {
  check_histogram_input(column, buckets);
  Histogram h;
  h.kind_ = SynopsisKind::EquiWidth;
  h.integral_ = stores_integers(column.type);
  auto values = sorted_values(column);
  h.total_ = values.size();
  if (values.empty()) return h;
  h.min_ = values.front();
  h.max_ = values.back();
  double hi_extent = h.integral_ ? h.max_ + 1 : h.max_;
  if (hi_extent == h.min_) buckets = 1;
  double width = (hi_extent - h.min_) / static_cast<double>(buckets);
  h.buckets_.resize(buckets);
  for (std::size_t b = 0; b < buckets; ++b) {
    auto& bk = h.buckets_[b];
    bk.extent_lo = h.min_ + width * static_cast<double>(b);
    bk.extent_hi = b + 1 == buckets ? hi_extent : h.min_ + width * static_cast<double>(b + 1);
    bk.lo = bk.hi = bk.extent_lo;
  }
  std::size_t b = 0;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (double v : values) {
    std::size_t idx = width > 0 ? static_cast<std::size_t>((v - h.min_) / width) : 0;
    idx = std::min(idx, buckets - 1);
    auto& bk = h.buckets_[idx];
    if (bk.count == 0) bk.lo = v;
    bk.hi = v;
    if (idx != b || v != prev) ++bk.distinct;
    bk.count++;
    b = idx;
    prev = v;
  }
  return h;
}

Histogram Histogram::equi_depth(const Column& column, std::size_t buckets) {
  check_histogram_input(column, buckets);
  Histogram h;
  h.kind_ = SynopsisKind::EquiDepth;
  h.integral_ = stores_integers(column.type);
  auto values = sorted_values(column);
  h.total_ = values.size();
  if (values.empty()) return h;
  h.min_ = values.front();
  h.max_ = values.back();
  const std::size_t depth = (values.size() + buckets - 1) / buckets;
  h.depth_ = depth;
  for (std::size_t start = 0; start < values.size(); start += depth) {
    std::size_t end = std::min(values.size(), start + depth);
    HistogramBucket bk;
    bk.lo = values[start];
    bk.hi = values[end - 1];
    bk.count = end - start;
    bk.distinct = 1;
    for (std::size_t i = start + 1; i < end; ++i)
      if (values[i] != values[i - 1]) ++bk.distinct;
    bk.extent_lo = bk.lo;
    bk.extent_hi = h.integral_ ? bk.hi + 1 : bk.hi;
    h.buckets_.push_back(bk);
  }
  return h;
}

const HistogramBucket* Histogram::bucket_for(double value) const {
  if (kind_ == SynopsisKind::EquiDepth) {
    for (const auto& b : buckets_)
      if (b.lo <= value && value <= b.hi) return &b;
    return nullptr;
  }
  for (std::size_t i = 0; i < buckets_.size(); ++i) {
    const auto& b = buckets_[i];
    bool last = i + 1 == buckets_.size();
    if (b.extent_lo <= value && (value < b.extent_hi || (last && value <= b.extent_hi))) return &b;
  }
  return nullptr;
}

double Histogram::estimate_equal(double value) const {
  if (total_ == 0 || value < min_ || value > max_) return 0;
  if (integral_ && value != std::floor(value)) return 0;
  const auto* b = bucket_for(value);
  if (b == nullptr || b->distinct == 0) return 0;
  return static_cast<double>(b->count) / static_cast<double>(b->distinct);
}

double Histogram::count_below(double x, bool inclusive) const {
  double acc = 0;
  if (integral_) {
    // integer data: "<= x" is "< floor(x) + 1", "< x" is "< ceil(x)"
    x = inclusive ? std::floor(x) + 1 : std::ceil(x);
    for (const auto& b : buckets_) {
      if (b.count == 0) continue;
      if (b.extent_hi <= x)
        acc += static_cast<double>(b.count);
      else if (b.extent_lo < x)
        acc += static_cast<double>(b.count) * (x - b.extent_lo) / (b.extent_hi - b.extent_lo);
    }
    return acc;
  }
  for (const auto& b : buckets_) {
    if (b.count == 0) continue;
    double lo = b.extent_lo, hi = b.extent_hi;
    if (kind_ == SynopsisKind::EquiDepth) {
      lo = b.lo;
      hi = b.hi;
    }
    bool all = hi < x || (inclusive && hi <= x);
    bool none = lo > x || (!inclusive && lo >= x);
    if (all)
      acc += static_cast<double>(b.count);
    else if (!none && hi > lo)
      acc += static_cast<double>(b.count) * (x - lo) / (hi - lo);
  }
  return acc;
}

double Histogram::estimate_range(CompareOp op, double value) const {
  auto total = static_cast<double>(total_);
  switch (op) {
    case CompareOp::Eq: return estimate_equal(value);
    case CompareOp::Lt: return count_below(value, false);
    case CompareOp::Le: return count_below(value, true);
    case CompareOp::Gt: return total - count_below(value, true);
    case CompareOp::Ge: return total - count_below(value, false);
  }
  return 0;
}

CountMinSketch::CountMinSketch(std::size_t width, std::size_t depth, std::uint64_t seed)
    : width_(width), depth_(depth) {
  if (width < 1 || depth < 1) throw InvalidStatistics("sketch width and depth must be >= 1");
  std::uint64_t state = seed;
  for (std::size_t i = 0; i < depth; ++i) {
    multipliers_.push_back(splitmix64(state) | 1);
    offsets_.push_back(splitmix64(state));
  }
  counters_.assign(width * depth, 0);
}

std::size_t CountMinSketch::bucket(std::size_t row, std::uint64_t key) const {
  std::uint64_t h = (multipliers_[row] * key + offsets_[row]) >> 32;
  return static_cast<std::size_t>((h * width_) >> 32);
}

void CountMinSketch::update(std::uint64_t key, std::uint64_t count) {
  for (std::size_t r = 0; r < depth_; ++r) counters_[r * width_ + bucket(r, key)] += count;
  total_ += count;
}

std::uint64_t CountMinSketch::point(std::uint64_t key) const {
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t r = 0; r < depth_; ++r) best = std::min(best, counters_[r * width_ + bucket(r, key)]);
  return best;
}

std::uint64_t CountMinSketch::row_sum(std::size_t row) const {
  std::uint64_t s = 0;
  for (std::size_t c = 0; c < width_; ++c) s += counters_[row * width_ + c];
  return s;
}

CountMinSketch CountMinSketch::build(const Column& column, std::size_t width, std::size_t depth, std::uint64_t seed) {
  CountMinSketch s(width, depth, seed);
  for (std::size_t i = 0; i < column.size(); ++i) s.update(sketch_key(column, i));
  return s;
}

std::uint64_t sketch_key(const Column& column, std::size_t row) {
  if (stores_integers(column.type)) return static_cast<std::uint64_t>(column.ints[row]);
  double v = column.floats[row];
  return std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v);
}

std::uint64_t sketch_key(const Literal& literal) {
  if (literal.type == ColumnType::Float64)
    return std::bit_cast<std::uint64_t>(literal.float_value == 0.0 ? 0.0 : literal.float_value);
  return static_cast<std::uint64_t>(literal.int_value);
}

RowSample RowSample::draw(std::size_t population, double rate, std::uint64_t seed) {
  if (!(rate > 0.0 && rate <= 1.0)) throw InvalidStatistics("sample rate must be in (0, 1]");
  RowSample s;
  s.population_ = population;
  s.seed_ = seed;
  if (population == 0) return s;
  auto k = static_cast<std::size_t>(std::llround(rate * static_cast<double>(population)));
  k = std::clamp<std::size_t>(k, 1, population);
  s.rows_.resize(k);
  for (std::size_t i = 0; i < k; ++i) s.rows_[i] = static_cast<std::uint32_t>(i);
  Rng rng(seed);
  for (std::size_t i = k; i < population; ++i) {
    auto j = rng.below(i + 1);
    if (j < k) s.rows_[j] = static_cast<std::uint32_t>(i);
  }
  std::sort(s.rows_.begin(), s.rows_.end());
  return s;
}

Synopsis build_synopsis(const Table& table, const Column& column, SynopsisKind kind, const SynopsisParams& params) {
  switch (kind) {
    case SynopsisKind::EquiWidth: return Histogram::equi_width(column, params.buckets);
    case SynopsisKind::EquiDepth: return Histogram::equi_depth(column, params.buckets);
    case SynopsisKind::CountMin:
      return CountMinSketch::build(column, params.sketch_width, params.sketch_depth, params.seed);
    case SynopsisKind::Sample: return RowSample::draw(table.row_count(), params.sample_rate, params.seed);
  }
  throw InvalidStatistics("unknown synopsis kind");
}

}  // namespace exactsel
