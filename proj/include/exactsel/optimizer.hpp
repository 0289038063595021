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
#include <string>
#include <string_view>
#include <vector>

#include "exactsel/estimators.hpp"
#include "exactsel/executor.hpp"
#include "exactsel/plan.hpp"
#include "exactsel/sql.hpp"

namespace exactsel {

/// Upper bound on the rows a pushed selection may produce: a fraction of the
/// base table or an absolute row count.
struct MaxSelectivity {
  enum class Kind : std::uint8_t { Ratio, Absolute };

  Kind kind = Kind::Ratio;
  double value = 1.0;

  static MaxSelectivity ratio(double r);
  static MaxSelectivity absolute(double rows);
  /// "0.05" is a ratio, "3300000" or "3300000abs" an absolute row count.
  static MaxSelectivity parse(std::string_view text);

  double max_size(std::size_t base_rows) const;
  std::string to_string() const;

  bool operator==(const MaxSelectivity&) const = default;
};

struct OptimizerConfig {
  EstimatorKind estimator = EstimatorKind::Exact;
  /// Only tables with more rows than this are considered for push-down.
  std::size_t min_table_size = 1000;
  MaxSelectivity max_selectivity;
  bool pushdown_enabled = true;
  std::uint64_t seed = 1;
  SynopsisParams synopsis;
  ExecutorOptions executor;
};

struct JoinEdge {
  ColumnRef left;
  ColumnRef right;
};

/// Relations with their current cardinality and distinct counts of the join
/// columns, plus the equality edges between them.
struct JoinGraph {
  std::map<std::string, double> cardinality;
  std::map<ColumnRef, double> distinct;
  std::vector<JoinEdge> edges;

  double distinct_of(const ColumnRef& c) const;
  bool adjacent(const std::string& a, const std::string& b) const;
};

/// |R||S| / max(V(R, a), V(S, b)). Throws InvalidStatistics when a distinct
/// count is 0 while the table is not empty.
double estimate_join_size(double left_rows, double right_rows, double left_distinct, double right_distinct);

struct JoinStep {
  std::string relation;
  /// Estimated size of the intermediate result after adding `relation`.
  double estimated_rows = 0;
};

/// Greedy order: start from the adjacent pair with the smallest estimated join,
/// then repeatedly add the adjacent relation minimizing the running estimate.
/// Ties go to the lexicographically smaller name. Throws UnsupportedQuery for
/// a disconnected graph.
std::vector<JoinStep> order_joins(const JoinGraph& graph);

struct PushDownDecision {
  enum class Outcome : std::uint8_t { Pushed, Reverted, Probe, BelowMinSize, NoSelection, Disabled };

  std::string table;
  Outcome outcome = Outcome::NoSelection;
  std::size_t base_rows = 0;
  /// Computed |sigma(R)|, when the estimator ran.
  std::optional<double> selectivity;
  std::optional<double> threshold;
  double count_elapsed_ms = 0;
  std::string temp_table;
};

std::string_view to_string(PushDownDecision::Outcome outcome);

struct OptimizeReport {
  std::vector<PushDownDecision> decisions;
  std::vector<JoinStep> join_order;
  /// Cardinality each relation entered join ordering with.
  std::map<std::string, double> cardinalities;
  /// Work done while optimizing: COUNT queries and temp-table materialization.
  ExecStats stats;
  double elapsed_ms = 0;

  std::string to_string() const;
};

struct OptimizedPlan {
  PlanPtr plan;
  OptimizeReport report;
  std::vector<std::string> temp_tables;
};

/// Algorithm of selective selection push-down followed by join ordering and
/// assembly of the physical plan. Temp tables created for pushed selections
/// stay registered in `catalog` until the caller drops them.
OptimizedPlan evaluate_and_push_down(const RawPlan& raw, const OptimizerConfig& config, Catalog& catalog,
                                     Executor& executor);

struct QueryRun {
  ResultSet result;
  OptimizedPlan optimized;
  double optimize_ms = 0;
  double execute_ms = 0;
  double total_ms = 0;
};

/// Parse, optimize, execute, then drop the query's temp tables.
QueryRun run_query(std::string_view sql, const OptimizerConfig& config, Catalog& catalog);

}  // namespace exactsel
