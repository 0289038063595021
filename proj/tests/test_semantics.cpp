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


#include <gtest/gtest.h>

#include "exactsel/optimizer.hpp"
#include "support.hpp"

namespace exactsel {
namespace {

using testing::canonical_rows;
using testing::cell_of;
using testing::random_database;
using testing::random_query;
using testing::ReferenceInterpreter;

int compare_cells(const Column& c, std::size_t a, std::size_t b) {
  if (c.type == ColumnType::Float64) return (c.floats[a] > c.floats[b]) - (c.floats[a] < c.floats[b]);
  if (c.type == ColumnType::Text) return c.dictionary->value(c.ints[a]).compare(c.dictionary->value(c.ints[b]));
  return (c.ints[a] > c.ints[b]) - (c.ints[a] < c.ints[b]);
}

bool respects_order(const ResultSet& rs, const std::vector<SortKey>& keys) {
  for (std::size_t r = 1; r < rs.row_count; ++r) {
    for (const auto& k : keys) {
      int c = compare_cells(rs.columns[k.index], r - 1, r);
      if (k.descending) c = -c;
      if (c > 0) return false;
      if (c < 0) break;
    }
  }
  return true;
}

std::vector<OptimizerConfig> configs() {
  std::vector<OptimizerConfig> out;
  auto base = OptimizerConfig{};
  base.min_table_size = 40;
  base.synopsis.buckets = 8;
  base.synopsis.sample_rate = 0.2;
  auto off = base;
  off.pushdown_enabled = false;
  out.push_back(off);
  for (auto kind : {EstimatorKind::Exact, EstimatorKind::Uniform, EstimatorKind::EquiWidth, EstimatorKind::EquiDepth,
                    EstimatorKind::CountMin, EstimatorKind::Sample}) {
    auto c = base;
    c.estimator = kind;
    out.push_back(c);
  }
  auto tight = base;
  tight.max_selectivity = MaxSelectivity::ratio(0.3);
  out.push_back(tight);
  auto zero = base;
  zero.max_selectivity = MaxSelectivity::ratio(0);
  out.push_back(zero);
  auto abs = base;
  abs.max_selectivity = MaxSelectivity::absolute(60);
  out.push_back(abs);
  return out;
}

TEST(Semantics, RandomQueriesMatchReferenceUnderEveryConfig) {
  Rng rng(20261019);
  int checked = 0;
  for (int db_round = 0; db_round < 6; ++db_round) {
    Catalog catalog;
    for (auto& t : random_database(rng, 150 + rng.below(150), 60 + rng.below(120), 40 + rng.below(60)))
      catalog.register_table(std::move(t));
    ReferenceInterpreter oracle(catalog);
    for (int q = 0; q < 12; ++q) {
      auto sql = random_query(rng);
      auto raw = parse(sql, catalog);
      auto expected = oracle.run(raw);
      for (const auto& config : configs()) {
        auto run = run_query(sql, config, catalog);
        ASSERT_EQ(canonical_rows(run.result), expected) << sql << "\nestimator " << to_string(config.estimator);
        ASSERT_TRUE(respects_order(run.result, raw.order_by)) << sql;
        ++checked;
      }
      EXPECT_TRUE(catalog.table_names().size() == 3);
    }
  }
  EXPECT_GE(checked, 600);
}

TEST(Semantics, TempTablesAreDroppedAfterEachQuery) {
  Rng rng(7);
  Catalog catalog;
  for (auto& t : random_database(rng, 200, 100, 50)) catalog.register_table(std::move(t));
  auto config = OptimizerConfig{};
  config.min_table_size = 10;
  auto run = run_query("SELECT COUNT(*) FROM ta, tb WHERE a_fk = b_key AND a_int < 5 AND b_int > 2", config, catalog);
  EXPECT_FALSE(run.optimized.temp_tables.empty());
  for (const auto& t : run.optimized.temp_tables) EXPECT_FALSE(catalog.contains(t));
}

TEST(Semantics, LimitKeepsPrefixOfSortedResult) {
  Rng rng(11);
  Catalog catalog;
  for (auto& t : random_database(rng, 200, 100, 50)) catalog.register_table(std::move(t));
  auto full = run_query("SELECT a_key, a_int FROM ta WHERE a_int > 3 ORDER BY a_int DESC, a_key", {}, catalog);
  auto top = run_query("SELECT a_key, a_int FROM ta WHERE a_int > 3 ORDER BY a_int DESC, a_key LIMIT 7", {}, catalog);
  ASSERT_EQ(top.result.row_count, 7u);
  auto a = full.result.row_strings();
  auto b = top.result.row_strings();
  EXPECT_TRUE(std::equal(b.begin(), b.end(), a.begin()));
}

}  // namespace
}  // namespace exactsel
