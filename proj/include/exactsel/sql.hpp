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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "exactsel/plan.hpp"
#include "exactsel/predicate.hpp"

namespace exactsel {

class Catalog;

/// A parsed query before any optimization: the scanned tables, every WHERE
/// conjunct in one predicate, and the output specification.
struct RawPlan {
  std::vector<std::string> tables;
  std::optional<PredicateExpr> where;
  std::vector<SelectItem> items;
  std::vector<ColumnRef> group_by;
  std::vector<SortKey> order_by;
  std::optional<std::size_t> limit;

  bool operator==(const RawPlan&) const = default;

  bool has_aggregates() const;
  /// SQL text that parses back into an equal plan.
  std::string to_sql() const;
};

/// Parses the supported SELECT subset (docs/grammar.ebnf) and resolves names
/// and literal types against `catalog`. Syntax, name and type errors raise
/// ParseError with a 1-based line and column; comparisons between columns other
/// than equality raise UnsupportedQuery.
RawPlan parse(std::string_view sql, const Catalog& catalog);

struct ClassifiedPredicates {
  /// Column = column conjuncts across two tables.
  std::vector<PredicateExpr> joins;
  /// Remaining conjuncts per table, AND-combined.
  std::map<std::string, PredicateExpr> selections;
};

/// Splits the top-level conjuncts of the WHERE clause. Throws UnsupportedQuery
/// for a conjunct that spans tables and is not a single equality.
ClassifiedPredicates classify_predicates(const RawPlan& plan);

}  // namespace exactsel
