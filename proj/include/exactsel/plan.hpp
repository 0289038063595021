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
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "exactsel/predicate.hpp"

namespace exactsel {

class Catalog;

/// COUNT(*), or SUM over one of the three expression forms the query suites
/// use: a, a - b, a * (1 - b).
struct AggregateExpr {
  enum class Func : std::uint8_t { CountStar, Sum };
  enum class Form : std::uint8_t { Column, Difference, Discounted };

  Func func = Func::CountStar;
  Form form = Form::Column;
  ColumnRef a;
  ColumnRef b;

  bool operator==(const AggregateExpr&) const = default;

  static AggregateExpr count_star() { return {}; }
  static AggregateExpr sum(ColumnRef a) { return {Func::Sum, Form::Column, std::move(a), {}}; }
  static AggregateExpr sum_difference(ColumnRef a, ColumnRef b) {
    return {Func::Sum, Form::Difference, std::move(a), std::move(b)};
  }
  static AggregateExpr sum_discounted(ColumnRef a, ColumnRef b) {
    return {Func::Sum, Form::Discounted, std::move(a), std::move(b)};
  }

  void collect_columns(std::set<ColumnRef>& out) const;
  std::string to_sql() const;
};

/// One entry of a SELECT list.
struct SelectItem {
  enum class Kind : std::uint8_t { Column, Aggregate };

  Kind kind = Kind::Column;
  ColumnRef column;
  AggregateExpr aggregate;
  std::string alias;

  bool operator==(const SelectItem&) const = default;

  static SelectItem of_column(ColumnRef c, std::string alias = {}) {
    return {Kind::Column, std::move(c), {}, std::move(alias)};
  }
  static SelectItem of_aggregate(AggregateExpr a, std::string alias = {}) {
    return {Kind::Aggregate, {}, std::move(a), std::move(alias)};
  }

  /// Alias if given, otherwise the column name, "count" or "sum".
  std::string output_name() const;
  std::string to_sql() const;
};

/// Sort key by position in the output row.
struct SortKey {
  std::size_t index = 0;
  bool descending = false;

  bool operator==(const SortKey&) const = default;
};

/// Equality pair of a hash join: `probe` comes from the probe input, `build`
/// from the build input.
struct JoinKey {
  ColumnRef probe;
  ColumnRef build;

  bool operator==(const JoinKey&) const = default;
};

enum class PlanKind : std::uint8_t { Scan, TempScan, Filter, Project, HashJoin, Aggregate, Compound, Sort, Limit };

std::string_view to_string(PlanKind kind);

struct PlanNode;
using PlanPtr = std::shared_ptr<const PlanNode>;

/// Immutable logical operator. Which fields are meaningful depends on `kind`:
///   Scan       table (alias == table)
///   TempScan   table = temporary table, alias = table the rows came from
///   Filter     predicate; children[0]
///   Project    items (columns only); children[0]
///   HashJoin   join_keys; children[0] probes, children[1] builds
///   Aggregate  items, group_by; children[0]
///   Compound   predicate (optional), columns, count_cap; children[0]
///   Sort       sort_keys; children[0]
///   Limit      limit; children[0]
struct PlanNode {
  PlanKind kind = PlanKind::Scan;
  std::string table;
  std::string alias;
  std::optional<PredicateExpr> predicate;
  std::vector<ColumnRef> columns;
  std::vector<SelectItem> items;
  std::vector<ColumnRef> group_by;
  std::vector<JoinKey> join_keys;
  std::vector<SortKey> sort_keys;
  std::size_t limit = 0;
  std::optional<std::uint64_t> count_cap;
  std::vector<PlanPtr> children;

  std::optional<double> estimated_rows;
  std::optional<std::uint64_t> exact_rows;

  const PlanNode& child(std::size_t i = 0) const { return *children.at(i); }
};

PlanPtr make_scan(std::string table);
PlanPtr make_temp_scan(std::string temp_table, std::string alias);
PlanPtr make_filter(PredicateExpr predicate, PlanPtr input);
PlanPtr make_project(std::vector<SelectItem> items, PlanPtr input);
/// Throws UnsupportedQuery without keys: Cartesian products are never built.
PlanPtr make_hash_join(PlanPtr probe, PlanPtr build, std::vector<JoinKey> keys);
PlanPtr make_aggregate(std::vector<SelectItem> items, std::vector<ColumnRef> group_by, PlanPtr input);
PlanPtr make_sort(std::vector<SortKey> keys, PlanPtr input);
PlanPtr make_limit(std::size_t n, PlanPtr input);

/// Copy of `node` carrying cardinality annotations.
PlanPtr annotate(const PlanPtr& node, std::optional<double> estimated, std::optional<std::uint64_t> exact);

/// Columns `node` produces, in order.
std::vector<ColumnRef> output_columns(const PlanNode& node, const Catalog& catalog);
/// Scan and TempScan aliases below `node`.
std::set<std::string> leaf_aliases(const PlanNode& node);

/// Fused filter + projection over `input`. Throws CatalogError when a column of
/// `columns` or of `predicate` is not produced by `input`, or `columns` is empty.
PlanPtr coalesce_nodes(std::optional<PredicateExpr> predicate, std::vector<ColumnRef> columns, PlanPtr input,
                       const Catalog& catalog, std::optional<std::uint64_t> count_cap = std::nullopt);

/// COUNT(*) over `node`; `node` itself is shared, not modified.
PlanPtr attach_count(PlanPtr node);

/// Replaces the scan of `alias` with a TempScan of `temp_table` and removes the
/// conjuncts in `removed` from every Filter; a Filter left without conjuncts
/// disappears.
PlanPtr update_tree(const PlanPtr& tree, const std::string& alias, const std::string& temp_table,
                    const std::vector<PredicateExpr>& removed);

/// Compares operators and their arguments, ignoring cardinality annotations.
bool same_structure(const PlanNode& a, const PlanNode& b);

/// Indented rendering, two spaces per level, one operator per line.
std::string explain(const PlanNode& node);

}  // namespace exactsel
