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

using Outcome = PushDownDecision::Outcome;
using testing::random_database;
using testing::random_query;
using testing::ReferenceInterpreter;

TEST(MaxSelectivity, ParsesRatiosAndAbsolutes) {
  EXPECT_EQ(MaxSelectivity::parse("0.05"), MaxSelectivity::ratio(0.05));
  EXPECT_EQ(MaxSelectivity::parse("1"), MaxSelectivity::ratio(1));
  EXPECT_EQ(MaxSelectivity::parse("3300000"), MaxSelectivity::absolute(3300000));
  EXPECT_EQ(MaxSelectivity::parse("12abs"), MaxSelectivity::absolute(12));
  EXPECT_DOUBLE_EQ(MaxSelectivity::ratio(0.25).max_size(1000), 250.0);
  EXPECT_DOUBLE_EQ(MaxSelectivity::absolute(70).max_size(1000), 70.0);
  EXPECT_EQ(MaxSelectivity::parse(MaxSelectivity::absolute(70).to_string()), MaxSelectivity::absolute(70));
  EXPECT_THROW(MaxSelectivity::parse("-1"), Error);
  EXPECT_THROW(MaxSelectivity::parse("lots"), Error);
}

TEST(JoinSize, DividesByLargerDistinctCount) {
  EXPECT_DOUBLE_EQ(estimate_join_size(100, 50, 10, 25), 200.0);
  EXPECT_DOUBLE_EQ(estimate_join_size(0, 50, 0, 25), 0.0);
  EXPECT_THROW(estimate_join_size(10, 50, 0, 0), InvalidStatistics);
}

JoinGraph chain(double r, double s, double t) {
  JoinGraph g;
  g.cardinality = {{"r", r}, {"s", s}, {"t", t}};
  g.edges = {{{"r", "a"}, {"s", "a"}}, {{"s", "b"}, {"t", "b"}}};
  g.distinct = {{{"r", "a"}, 5}, {{"s", "a"}, s}, {{"s", "b"}, t}, {{"t", "b"}, t}};
  return g;
}

std::vector<std::string> names(const std::vector<JoinStep>& steps) {
  std::vector<std::string> out;
  for (const auto& s : steps) out.push_back(s.relation);
  return out;
}

TEST(OrderJoins, PicksSmallestAdjacentPairThenGreedy) {
  auto small = order_joins(chain(900, 5000, 1000));
  EXPECT_EQ(names(small), (std::vector<std::string>{"r", "s", "t"}));
  EXPECT_DOUBLE_EQ(small[1].estimated_rows, 900.0);
  auto big = order_joins(chain(100200, 5000, 1000));
  EXPECT_EQ(names(big), (std::vector<std::string>{"s", "t", "r"}));
  EXPECT_DOUBLE_EQ(big[1].estimated_rows, 5000.0);
}

TEST(OrderJoins, TiesAreLexicographicAndSingletonsWork) {
  JoinGraph g;
  g.cardinality = {{"b", 10}, {"a", 10}};
  g.edges = {{{"a", "k"}, {"b", "k"}}};
  g.distinct = {{{"a", "k"}, 10}, {{"b", "k"}, 10}};
  EXPECT_EQ(names(order_joins(g)), (std::vector<std::string>{"a", "b"}));
  JoinGraph one;
  one.cardinality = {{"x", 3}};
  EXPECT_EQ(names(order_joins(one)), (std::vector<std::string>{"x"}));
  JoinGraph apart;
  apart.cardinality = {{"x", 3}, {"y", 4}};
  EXPECT_THROW(order_joins(apart), UnsupportedQuery);
}

class Optimizer : public ::testing::Test {
 protected:
  void SetUp() override {
    Rng rng(99);
    for (auto& t : random_database(rng, 400, 200, 100)) catalog.register_table(std::move(t));
    config.min_table_size = 150;
  }
  OptimizedPlan optimize(const std::string& sql, const OptimizerConfig& c) {
    return evaluate_and_push_down(parse(sql, catalog), c, catalog, executor);
  }
  static Outcome outcome(const OptimizedPlan& p, const std::string& t) {
    for (const auto& d : p.report.decisions)
      if (d.table == t) return d.outcome;
    throw Error("no decision for " + t);
  }
  Catalog catalog;
  Executor executor{catalog};
  OptimizerConfig config;
};

const char* kThree =
    "SELECT COUNT(*) FROM ta, tb, tc WHERE a_fk = b_key AND b_fk = c_key AND a_int < 5 AND b_int < 5 AND c_int < 5";

TEST_F(Optimizer, ProbeTableAndSmallTablesAreNeverPushed) {
  auto p = optimize(kThree, config);
  EXPECT_EQ(outcome(p, "ta"), Outcome::Probe);
  EXPECT_EQ(outcome(p, "tb"), Outcome::Pushed);
  EXPECT_EQ(outcome(p, "tc"), Outcome::BelowMinSize);
  ASSERT_EQ(p.temp_tables.size(), 1u);
  EXPECT_TRUE(catalog.contains(p.temp_tables[0]));
  catalog.drop_temporaries();
}

TEST_F(Optimizer, ThresholdRevertsLargeSelections) {
  auto c = config;
  c.max_selectivity = MaxSelectivity::absolute(5);
  auto p = optimize(kThree, c);
  EXPECT_EQ(outcome(p, "tb"), Outcome::Reverted);
  EXPECT_TRUE(p.temp_tables.empty());
  for (const auto& d : p.report.decisions)
    if (d.table == "tb") {
      EXPECT_DOUBLE_EQ(*d.threshold, 5.0);
      EXPECT_GT(*d.selectivity, 5.0);
    }
}

TEST_F(Optimizer, DisabledMarksSelections) {
  auto c = config;
  c.pushdown_enabled = false;
  auto p = optimize("SELECT COUNT(*) FROM ta, tb WHERE a_fk = b_key AND b_int < 5", c);
  EXPECT_EQ(outcome(p, "tb"), Outcome::Disabled);
  EXPECT_EQ(outcome(p, "ta"), Outcome::NoSelection);
}

TEST_F(Optimizer, ZeroRatioMatchesDisabledPlan) {
  Rng rng(5);
  auto zero = config;
  zero.max_selectivity = MaxSelectivity::ratio(0);
  auto off = config;
  off.pushdown_enabled = false;
  for (int i = 0; i < 60; ++i) {
    auto sql = random_query(rng);
    auto a = optimize(sql, zero);
    auto b = optimize(sql, off);
    EXPECT_TRUE(same_structure(*a.plan, *b.plan)) << sql << "\n" << explain(*a.plan) << explain(*b.plan);
    EXPECT_TRUE(a.temp_tables.empty());
  }
}

TEST_F(Optimizer, PushedTablesAreNotReevaluated) {
  auto run = run_query(kThree, config, catalog);
  EXPECT_EQ(run.result.stats.predicate_evals_by_table.count("tb"), 0u);
  EXPECT_GT(run.result.stats.predicate_evals_by_table.at("ta"), 0u);
  EXPECT_GT(run.optimized.report.stats.intermediate_rows_materialized, 0u);
  EXPECT_FALSE(catalog.contains(run.optimized.temp_tables.at(0)));
}

TEST_F(Optimizer, LargerInputProbes) {
  auto c = config;
  c.pushdown_enabled = false;
  auto p = optimize("SELECT COUNT(*) FROM ta, tb WHERE a_fk = b_key", c);
  const PlanNode* n = p.plan.get();
  while (n->kind != PlanKind::HashJoin) n = &n->child();
  EXPECT_EQ(n->child(0).alias, "ta");
  EXPECT_EQ(n->child(1).alias, "tb");
}

TEST_F(Optimizer, CompositeKeysUseEveryEdge) {
  auto p = optimize("SELECT COUNT(*) FROM ta, tb WHERE a_fk = b_key AND a_int = b_int AND b_key = a_fk", config);
  const PlanNode* n = p.plan.get();
  while (n->kind != PlanKind::HashJoin) n = &n->child();
  EXPECT_EQ(n->join_keys.size(), 2u);
}

TEST_F(Optimizer, ReportsRenderDecisions) {
  auto p = optimize(kThree, config);
  auto text = p.report.to_string();
  EXPECT_NE(text.find("tb rows=200 decision=pushed"), std::string::npos) << text;
  EXPECT_NE(text.find("join order:"), std::string::npos);
  catalog.drop_temporaries();
}

TEST_F(Optimizer, ErrorsLeaveNoTempTables) {
  auto c = config;
  c.executor.max_rows = 10;
  c.max_selectivity = MaxSelectivity::ratio(1);
  EXPECT_THROW(run_query(kThree, c, catalog), ExecutionError);
  EXPECT_EQ(catalog.table_names().size(), 3u);
  for (const auto& n : {"tmp_1_tb", "tmp_2_tb", "tmp_3_tb"}) EXPECT_FALSE(catalog.contains(n));
  EXPECT_THROW(run_query("SELECT COUNT(*) FROM ta, tb WHERE a_int = 1", config, catalog), UnsupportedQuery);
}

TEST_F(Optimizer, ExactDecisionsMatchBruteForceAndThresholdIsMonotone) {
  Rng rng(8);
  ReferenceInterpreter oracle(catalog);
  for (int i = 0; i < 40; ++i) {
    auto pred = testing::random_predicate(rng, "b", 3);
    auto sql = "SELECT COUNT(*) FROM ta, tb WHERE a_fk = b_key AND " + pred;
    auto truth = std::stod(oracle.run(parse("SELECT COUNT(*) FROM tb WHERE " + pred, catalog)).at(0));
    bool pushed_before = false;
    for (double r : {0.05, 0.2, 0.5, 1.0}) {
      auto c = config;
      c.max_selectivity = MaxSelectivity::ratio(r);
      auto p = optimize(sql, c);
      bool pushed = outcome(p, "tb") == Outcome::Pushed;
      EXPECT_EQ(pushed, truth <= r * 200) << sql << " ratio " << r;
      EXPECT_TRUE(!pushed_before || pushed) << sql;
      pushed_before = pushed;
      catalog.drop_temporaries();
    }
  }
}

}  // namespace
}  // namespace exactsel
