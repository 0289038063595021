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
#include <string>
#include <string_view>
#include <vector>

#include "exactsel/generator.hpp"
#include "exactsel/optimizer.hpp"

namespace exactsel {

/// Tabular benchmark output, printable as CSV or as an aligned text table.
struct Report {
  std::string title;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> notes;

  void add(std::vector<std::string> row);
  std::string csv() const;
  std::string text() const;
  /// Index of `name` in the header; throws Error when absent.
  std::size_t column(std::string_view name) const;
};

struct BenchConfig {
  int repeat = 5;
  OptimizerConfig optimizer;
};

struct Timing {
  /// Best-of-k wall time from query text to result, microseconds.
  double best_us = 0;
  QueryRun last;
};

/// Runs `sql` `repeat` times and keeps the fastest run.
Timing time_query(std::string_view sql, const OptimizerConfig& config, Catalog& catalog, int repeat);

/// Config with push-down disabled, and with every qualifying selection pushed.
OptimizerConfig baseline_config(const OptimizerConfig& base);
OptimizerConfig pushdown_config(const OptimizerConfig& base);

/// A named query, optionally with the source it was adapted from.
struct NamedQuery {
  std::string name;
  std::string sql;
};

/// Three-table scenario with overlapping predicates on r: every leaf is
/// individually selective under uniform assumptions while the conjunction
/// keeps `hot_fraction` of r.
struct FlipReplicaSpec {
  std::size_t r_rows = 600000;
  std::size_t s_rows = 5000;
  std::size_t t_rows = 1000;
  double hot_fraction = 0.167;
  std::uint64_t seed = 1;
};

Database make_flip_replica(const FlipReplicaSpec& spec);
std::string flip_replica_query();
/// The r-only part of flip_replica_query().
std::string flip_replica_selection();

/// Per estimator: chosen join order, intermediate join rows, result size, time.
Report plan_flip_suite(Catalog& catalog, const BenchConfig& config);

/// COUNT join queries over lineitem with a key predicate on the joined table.
std::vector<NamedQuery> overhead_queries();
/// Attribute sweeps: 1..n conjuncts on orders (and on partsupp).
std::vector<NamedQuery> attribute_queries(std::string_view table);

/// Each query with max selectivity 0 (COUNT runs, nothing pushed) against
/// push-down disabled.
Report overhead_suite(Catalog& catalog, const std::vector<NamedQuery>& queries, const BenchConfig& config);

/// Target of a selectivity sweep: `sql` holds "$1" for the key bound,
/// keys run 1..key_max.
struct CrossoverTarget {
  std::string name;
  std::string sql;
  std::int64_t key_max = 0;
};

CrossoverTarget crossover_target(std::string_view name, const Catalog& catalog);
std::vector<double> default_selectivities();
/// Per selectivity: baseline and push-down times, plan and materialized rows.
Report crossover_suite(Catalog& catalog, const CrossoverTarget& target, const std::vector<double>& selectivities,
                       const BenchConfig& config);

/// Push-down vs baseline for each query.
Report comparison_suite(Catalog& catalog, const std::vector<NamedQuery>& queries, const BenchConfig& config,
                        std::string title);

/// lineitem joined with 1..5 more tables, each with a key bound keeping
/// `selectivity` of it.
std::vector<NamedQuery> consecutive_join_queries(const Catalog& catalog, double selectivity);

std::vector<NamedQuery> tpch_appendix_queries();
std::vector<NamedQuery> ssb_appendix_queries();

/// COUNT(*) queries over one table each.
std::vector<NamedQuery> correlated_corpus();
std::vector<NamedQuery> independent_corpus();

/// Rows of `table` satisfying `pred`, checked one row at a time.
std::uint64_t brute_force_count(const Table& table, const PredicateExpr& pred);

/// Per (query, estimator): estimate, truth, relative error and q-error
/// (max(e/t, t/e), both floored at one row).
Report estimation_error_suite(Catalog& catalog, const std::vector<NamedQuery>& corpus,
                              const std::vector<EstimatorKind>& kinds, const SynopsisParams& params,
                              std::string title);

}  // namespace exactsel
