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
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "exactsel/table.hpp"

namespace exactsel {

enum class SchemaKind { TpchLite, SsbLite };

SchemaKind parse_schema_kind(std::string_view name);

struct GeneratorSpec {
  SchemaKind kind = SchemaKind::TpchLite;
  double scale = 0.01;
  /// Zipf exponent for foreign keys and attribute values; 0 = uniform.
  double skew = 0.0;
  /// Probability that a designated dependent attribute is derived from its
  /// driver attribute instead of drawn independently.
  double correlation = 0.0;
  std::uint64_t seed = 1;
};

using Database = std::vector<Table>;

/// Builds every table of the requested schema. Identical specs give
/// byte-identical tables; only std::mt19937_64 raw output is used, so the
/// result does not depend on the standard library's distributions.
Database generate(const GeneratorSpec& spec);

/// Row count of `table` at `scale`: floor(base * scale), at least 1. Fixed-size
/// tables (region, nation, ddate) ignore the scale.
std::size_t scaled_rows(SchemaKind kind, std::string_view table, double scale);

const Table& find_table(const Database& db, std::string_view name);

/// Deterministic sampling helpers shared by the generator and the harness.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n);
  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  /// Uniform in [0, 1).
  double unit();

 private:
  std::mt19937_64 engine_;
};

/// Zipf(s) over ranks [0, n). s == 0 degenerates to uniform.
class ZipfSampler {
 public:
  ZipfSampler(std::size_t n, double exponent);
  std::size_t operator()(Rng& rng) const;
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::vector<double> cdf_;  // empty when uniform
};

}  // namespace exactsel
