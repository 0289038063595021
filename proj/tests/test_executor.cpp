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

#include "support.hpp"

namespace exactsel {
namespace {

using testing::float_column;
using testing::int_column;
using testing::text_column;

class Exec : public ::testing::Test {
 protected:
  void SetUp() override {
    std::vector<Column> r;
    r.push_back(int_column("k", {1, 2, 3, 1, 5}));
    r.push_back(int_column("v", {10, 20, 30, 40, 50}));
    r.push_back(text_column("g", {"b", "a", "b", "c", "a"}));
    catalog.register_table(Table("r", std::move(r)));
    std::vector<Column> s;
    s.push_back(int_column("k", {1, 1, 3, 9}));
    s.push_back(float_column("w", {0.5, 1.5, 2.5, 3.5}));
    catalog.register_table(Table("s", std::move(s)));
  }
  PlanPtr join() { return make_hash_join(make_scan("r"), make_scan("s"), {{{"r", "k"}, {"s", "k"}}}); }
  Catalog catalog;
  Executor executor{catalog};
};

TEST_F(Exec, HashJoinMatchesNestedLoops) {
  auto rs = executor.execute(join());
  // r.k=1 (twice) x s.k=1 (twice) + r.k=3 x s.k=3
  ASSERT_EQ(rs.row_count, 5u);
  EXPECT_EQ(rs.schema.size(), 5u);
  EXPECT_EQ(rs.stats.rows_built, 4u);
  EXPECT_EQ(rs.stats.rows_probed, 5u);
  auto rows = rs.row_strings();
  std::multiset<std::string> got(rows.begin(), rows.end());
  std::multiset<std::string> want;
  const auto& r = *catalog.table("r");
  const auto& s = *catalog.table("s");
  for (std::size_t i = 0; i < r.row_count(); ++i)
    for (std::size_t j = 0; j < s.row_count(); ++j)
      if (r.column("k").ints[i] == s.column("k").ints[j])
        want.insert(fmt::format("{}|{}|{}|{}|{}", r.column("k").format(i), r.column("v").format(i),
                                r.column("g").format(i), s.column("k").format(j), s.column("w").format(j)));
  EXPECT_EQ(got, want);
}

TEST_F(Exec, HashTableListsBuildRowsInOrder) {
  auto build = executor.execute(make_scan("s"));
  auto table = build_hash(build, {{"s", "k"}});
  std::uint64_t key = key_bits(build.columns[0], 0);
  std::vector<std::uint32_t> hits;
  table.for_each_match(&key, hash_key(&key, 1), [&](std::uint32_t j) { hits.push_back(j); });
  EXPECT_EQ(hits, (std::vector<std::uint32_t>{0, 1}));
}

TEST_F(Exec, NegativeZeroJoinsWithZero) {
  Column a = float_column("x", {-0.0});
  Column b = float_column("x", {0.0});
  EXPECT_EQ(key_bits(a, 0), key_bits(b, 0));
}

TEST_F(Exec, FilterCountsPredicateEvaluations) {
  auto p = PredicateExpr::compare({"r", "v"}, CompareOp::Gt, Literal::integer(15));
  auto rs = executor.execute(make_filter(p, make_scan("r")));
  EXPECT_EQ(rs.row_count, 4u);
  EXPECT_EQ(rs.stats.predicate_evals, 5u);
  EXPECT_EQ(rs.stats.predicate_evals_by_table.at("r"), 5u);
  auto rel = Relation::of_table(catalog.table("r"), "r");
  ExecStats stats;
  Mask in = {1, 0, 1, 0, 1};
  auto out = eval_predicate(p, rel, in, stats);
  EXPECT_EQ(out, (Mask{0, 0, 1, 0, 1}));
  EXPECT_EQ(stats.predicate_evals, 3u);
}

TEST_F(Exec, TextEqualityUsesDictionaryCodes) {
  auto code = catalog.table("r")->column("g").dictionary->find("b");
  auto p = PredicateExpr::compare({"r", "g"}, CompareOp::Eq, Literal::string("b", *code));
  EXPECT_EQ(executor.count(make_filter(p, make_scan("r"))), 2u);
  auto none = PredicateExpr::compare({"r", "g"}, CompareOp::Eq, Literal::string("zz", -1));
  EXPECT_EQ(executor.count(make_filter(none, make_scan("r"))), 0u);
}

TEST_F(Exec, AggregateGroupsSortedByKey) {
  auto agg = make_aggregate({SelectItem::of_column({"r", "g"}), SelectItem::of_aggregate(AggregateExpr::count_star()),
                             SelectItem::of_aggregate(AggregateExpr::sum({"r", "v"}))},
                            {{"r", "g"}}, make_scan("r"));
  auto rs = executor.execute(agg);
  EXPECT_EQ(rs.row_strings(), (std::vector<std::string>{"a|2|70", "b|2|40", "c|1|40"}));
}

TEST_F(Exec, EmptyInputAggregates) {
  auto p = PredicateExpr::compare({"r", "v"}, CompareOp::Gt, Literal::integer(1000));
  auto items = std::vector<SelectItem>{SelectItem::of_aggregate(AggregateExpr::count_star()),
                                       SelectItem::of_aggregate(AggregateExpr::sum({"r", "v"}))};
  auto rs = executor.execute(make_aggregate(items, {}, make_filter(p, make_scan("r"))));
  EXPECT_EQ(rs.row_strings(), (std::vector<std::string>{"0|0"}));
  items.insert(items.begin(), SelectItem::of_column({"r", "g"}));
  rs = executor.execute(make_aggregate(items, {{"r", "g"}}, make_filter(p, make_scan("r"))));
  EXPECT_EQ(rs.row_count, 0u);
}

TEST(ExecSums, FloatSumIsCorrectlyRounded) {
  Catalog catalog;
  std::vector<Column> cols;
  cols.push_back(float_column("x", {1e16, 1.0, -1e16, 0.1, 0.2, -0.3}));
  catalog.register_table(Table("f", std::move(cols)));
  Executor ex(catalog);
  auto rs = ex.execute(make_aggregate({SelectItem::of_aggregate(AggregateExpr::sum({"f", "x"}))}, {}, make_scan("f")));
  // left-to-right summation loses the 1.0 entirely
  EXPECT_EQ(rs.columns[0].floats[0], 1.0);
}

TEST_F(Exec, SortIsStableAndLimitCuts) {
  auto proj = make_project({SelectItem::of_column({"r", "g"}), SelectItem::of_column({"r", "v"})}, make_scan("r"));
  auto rs = executor.execute(make_limit(3, make_sort({{0, false}}, proj)));
  EXPECT_EQ(rs.row_strings(), (std::vector<std::string>{"a|20", "a|50", "b|10"}));
  rs = executor.execute(make_sort({{0, true}, {1, true}}, proj));
  EXPECT_EQ(rs.row_strings().front(), "c|40");
  EXPECT_EQ(rs.row_strings().back(), "a|20");
}

TEST_F(Exec, CompoundFiltersAndProjects) {
  auto p = PredicateExpr::compare({"r", "k"}, CompareOp::Eq, Literal::integer(1));
  auto rs = executor.execute(coalesce_nodes(p, {{"r", "v"}}, make_scan("r"), catalog));
  EXPECT_EQ(rs.row_strings(), (std::vector<std::string>{"10", "40"}));
}

TEST_F(Exec, SpdGateRejectsLargeSelections) {
  auto p = PredicateExpr::compare({"r", "v"}, CompareOp::Gt, Literal::integer(15));
  auto node = coalesce_nodes(p, {{"r", "k"}, {"r", "v"}}, make_scan("r"), catalog);
  auto rejected = executor.execute(node, true, 3);
  ASSERT_TRUE(std::holds_alternative<GateExceeded>(rejected));
  EXPECT_EQ(std::get<GateExceeded>(rejected).count, 4u);
  auto accepted = executor.execute(node, true, 4);
  ASSERT_TRUE(std::holds_alternative<ResultSet>(accepted));
  EXPECT_EQ(std::get<ResultSet>(accepted).row_count, 4u);
  EXPECT_EQ(executor.count(node), 4u);
}

TEST_F(Exec, TemporaryTablesAreUnqualifiedAndCounted) {
  auto p = PredicateExpr::compare({"r", "v"}, CompareOp::Gt, Literal::integer(25));
  auto rs = executor.execute(coalesce_nodes(p, {{"r", "k"}, {"r", "g"}}, make_scan("r"), catalog));
  ExecStats stats;
  auto name = executor.add_temporary_table(std::move(rs), "r", &stats);
  EXPECT_EQ(stats.intermediate_rows_materialized, 3u);
  auto t = catalog.table(name);
  EXPECT_EQ(t->row_count(), 3u);
  EXPECT_TRUE(t->find_column("g").has_value());
  EXPECT_EQ(catalog.meta(name).base_table, "r");
  auto again = executor.execute(make_filter(PredicateExpr::compare({"r", "k"}, CompareOp::Lt, Literal::integer(5)),
                                            make_temp_scan(name, "r")));
  EXPECT_EQ(again.row_count, 2u);
  EXPECT_EQ(again.schema.front(), (ColumnRef{"r", "k"}));
}

TEST_F(Exec, RowLimitRaises) {
  Executor small(catalog, ExecutorOptions{3});
  EXPECT_THROW(small.execute(join()), ExecutionError);
  EXPECT_THROW(executor.execute(make_scan("missing")), CatalogError);
}

TEST_F(Exec, ResultColumnLookup) {
  auto rs = executor.execute(join());
  EXPECT_EQ(rs.column({"s", "w"}).type, ColumnType::Float64);
  EXPECT_THROW(rs.column({"s", "nope"}), ExecutionError);
}

}  // namespace
}  // namespace exactsel
