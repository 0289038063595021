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
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "exactsel/plan.hpp"
#include "exactsel/predicate.hpp"
#include "exactsel/table.hpp"

namespace exactsel {

class Catalog;

struct OperatorStats {
  std::string op;
  std::uint64_t rows_out = 0;
  double elapsed_us = 0;
};

struct ExecStats {
  std::uint64_t rows_probed = 0;
  std::uint64_t rows_built = 0;
  std::uint64_t predicate_evals = 0;
  std::uint64_t intermediate_rows_materialized = 0;
  /// Output rows of hash joins that feed another hash join.
  std::uint64_t join_intermediate_rows = 0;
  /// predicate_evals split by every table the evaluated predicate references.
  std::map<std::string, std::uint64_t> predicate_evals_by_table;
  std::vector<OperatorStats> operators;

  void merge(const ExecStats& other);
};

struct ResultSet {
  std::vector<ColumnRef> schema;
  std::vector<Column> columns;
  std::size_t row_count = 0;
  ExecStats stats;

  /// Throws ExecutionError when `ref` is not in the schema.
  const Column& column(const ColumnRef& ref) const;
  std::string row_string(std::size_t row) const;
  /// Every row rendered as "v1|v2|...", in result order.
  std::vector<std::string> row_strings() const;
};

/// The COUNT gate of a push-down attempt rejected the selection.
struct GateExceeded {
  std::uint64_t count = 0;
  std::uint64_t max_size = 0;
};

using ExecOutcome = std::variant<ResultSet, GateExceeded>;

struct ExecutorOptions {
  /// Any operator producing more rows raises ExecutionError.
  std::size_t max_rows = 100'000'000;
};

using Mask = std::vector<std::uint8_t>;
using RowIds = std::vector<std::uint32_t>;

/// Read access to one column through an optional row-id indirection
/// (null `rows` means row i is physical row i).
struct ColumnView {
  const Column* column = nullptr;
  std::shared_ptr<const RowIds> rows;

  std::size_t physical(std::size_t i) const { return rows ? (*rows)[i] : i; }
};

/// Late-materialized intermediate result: each output column is a view into a
/// base, temporary or operator-owned column. Views that came from the same
/// input share their row-id vector.
struct Relation {
  std::vector<ColumnRef> schema;
  std::vector<ColumnView> views;
  std::size_t row_count = 0;
  std::vector<std::shared_ptr<const void>> owned;

  static Relation of_table(std::shared_ptr<const Table> table, const std::string& alias);
  static Relation of_result(std::shared_ptr<const ResultSet> result);

  /// Throws ExecutionError for unknown columns.
  const ColumnView& column(const ColumnRef& ref) const;
  /// Keeps the rows whose id is listed, in that order.
  Relation gather(const RowIds& ids) const;
  ResultSet materialize() const;
};

/// Evaluates `pred` on the rows set in `input` and returns input AND pred.
/// Adds popcount(input) to stats.predicate_evals and to the per-table count of
/// every table `pred` references.
Mask eval_predicate(const PredicateExpr& pred, const Relation& rel, const Mask& input, ExecStats& stats);

/// Chained hash table over the key columns of a build relation.
class HashTable {
 public:
  HashTable(const Relation& build, const std::vector<ColumnRef>& keys);

  std::size_t build_row_count() const { return rows_; }
  /// Calls fn(build_row) for every build row whose keys equal `key`.
  template <typename Fn>
  void for_each_match(const std::uint64_t* key, std::uint64_t hash, Fn&& fn) const {
    for (auto j = heads_[hash & mask_]; j != kNone; j = next_[j]) {
      if (hashes_[j] != hash) continue;
      bool eq = true;
      for (std::size_t c = 0; c < width_ && eq; ++c) eq = keys_[j * width_ + c] == key[c];
      if (eq) fn(j);
    }
  }
  std::size_t width() const { return width_; }

  static constexpr std::uint32_t kNone = 0xffffffffu;

 private:
  std::size_t rows_ = 0;
  std::size_t width_ = 0;
  std::uint64_t mask_ = 0;
  std::vector<std::uint32_t> heads_;
  std::vector<std::uint32_t> next_;
  std::vector<std::uint64_t> hashes_;
  std::vector<std::uint64_t> keys_;
};

/// Hash-key representation of a value: int64 bits, or double bits with -0.0
/// folded into 0.0.
std::uint64_t key_bits(const Column& column, std::size_t row);
std::uint64_t hash_key(const std::uint64_t* key, std::size_t width);

HashTable build_hash(const ResultSet& build, const std::vector<ColumnRef>& keys);
/// Equi-join of `probe` against the table built from `build`; output columns
/// are probe's followed by build's.
ResultSet probe_hash(const ResultSet& probe, const std::vector<ColumnRef>& probe_keys, const HashTable& table,
                     const ResultSet& build, ExecStats& stats);

class Executor {
 public:
  explicit Executor(Catalog& catalog, ExecutorOptions options = {});

  ResultSet execute(const PlanPtr& node);
  /// With `is_spd`, first runs COUNT(*) over `node` and returns GateExceeded if
  /// the count is above `max_size`; otherwise executes `node`.
  ExecOutcome execute(const PlanPtr& node, bool is_spd, std::uint64_t max_size);
  /// Rows `node` produces, by executing COUNT(*) over it.
  std::uint64_t count(const PlanPtr& node, ExecStats* stats = nullptr);

  /// Stores `result` as a temporary table derived from `base_table` and returns
  /// its catalog name. Column names drop their table qualifier.
  std::string add_temporary_table(ResultSet result, const std::string& base_table, ExecStats* stats = nullptr);

  Catalog& catalog() { return catalog_; }
  const ExecutorOptions& options() const { return options_; }

 private:
  Catalog& catalog_;
  ExecutorOptions options_;
};

}  // namespace exactsel
