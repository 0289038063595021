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
#include <set>
#include <string>
#include <vector>

#include "exactsel/types.hpp"

namespace exactsel {

/// A column qualified by the table (or temp-table alias) it comes from.
struct ColumnRef {
  std::string table;
  std::string column;

  auto operator<=>(const ColumnRef&) const = default;
  std::string qualified() const { return table + "." + column; }
};

enum class CompareOp : std::uint8_t { Eq, Lt, Gt, Le, Ge };

std::string_view to_string(CompareOp op);
/// Operator with its operands swapped: `lit < col` becomes `col > lit`.
CompareOp flip(CompareOp op);

/// A constant bound to the type of the column it is compared with.
/// Int64/Date/Text use `int_value` (Text: dictionary code, -1 when the string
/// is not in the dictionary, which matches no row); Float64 uses `float_value`.
/// `text` keeps the source spelling of string literals for printing.
struct Literal {
  ColumnType type = ColumnType::Int64;
  std::int64_t int_value = 0;
  double float_value = 0;
  std::string text;

  bool operator==(const Literal&) const = default;

  static Literal integer(std::int64_t v) { return {ColumnType::Int64, v, 0, {}}; }
  static Literal real(double v) { return {ColumnType::Float64, 0, v, {}}; }
  static Literal date(std::int64_t days) { return {ColumnType::Date, days, 0, {}}; }
  static Literal string(std::string s, std::int64_t code) { return {ColumnType::Text, code, 0, std::move(s)}; }

  std::string to_sql() const;
};

/// Boolean expression over column comparisons.
///   Compare:  column op literal
///   ColumnEq: column = column (join predicate when the tables differ)
///   And / Or: two or more children
struct PredicateExpr {
  enum class Kind : std::uint8_t { Compare, ColumnEq, And, Or };

  Kind kind = Kind::Compare;
  ColumnRef column;
  CompareOp op = CompareOp::Eq;
  Literal literal;
  ColumnRef other;
  std::vector<PredicateExpr> children;

  bool operator==(const PredicateExpr&) const = default;

  static PredicateExpr compare(ColumnRef column, CompareOp op, Literal literal);
  static PredicateExpr column_eq(ColumnRef left, ColumnRef right);
  /// Flattens nested Ands; a single child is returned unchanged.
  static PredicateExpr conjunction(std::vector<PredicateExpr> children);
  static PredicateExpr disjunction(std::vector<PredicateExpr> children);

  bool is_leaf() const { return kind == Kind::Compare || kind == Kind::ColumnEq; }
  bool is_join() const { return kind == Kind::ColumnEq && column.table != other.table; }

  /// Every table referenced anywhere in the tree.
  std::set<std::string> tables() const;
  void collect_columns(std::set<ColumnRef>& out) const;
  std::size_t depth() const;

  std::string to_sql() const;
};

/// Top-level AND conjuncts of `expr` (the expression itself if not an And).
std::vector<PredicateExpr> conjuncts(const PredicateExpr& expr);

}  // namespace exactsel
