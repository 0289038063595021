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


#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "exactsel/bench.hpp"
#include "exactsel/estimators.hpp"
#include "support.hpp"

namespace exactsel {
namespace {

TEST(Report, CsvTextAndColumns) {
  Report r;
  r.title = "t";
  r.header = {"a", "bb"};
  r.add({"1", "two"});
  r.notes.push_back("note");
  EXPECT_EQ(r.csv(), "a,bb\n1,two\n");
  EXPECT_NE(r.text().find("two"), std::string::npos);
  EXPECT_NE(r.text().find("note"), std::string::npos);
  EXPECT_EQ(r.column("bb"), 1u);
  EXPECT_THROW(r.column("c"), Error);
  EXPECT_THROW(r.add({"only"}), Error);
}

TEST(FlipReplica, OverlapKeepsTrueFactorWhileLeavesLookSelective) {
  FlipReplicaSpec spec;
  spec.r_rows = 60000;
  auto db = make_flip_replica(spec);
  Catalog catalog;
  for (auto& t : db) catalog.register_table(std::move(t));
  Executor executor(catalog);
  auto raw = parse("SELECT COUNT(*) FROM r WHERE " + flip_replica_selection(), catalog);
  auto truth = brute_force_count(*catalog.table("r"), *raw.where);
  EXPECT_EQ(truth, 10020u);
  auto uniform = estimate(*raw.where, "r", EstimatorKind::Uniform, catalog, executor);
  // leaf factors 1/5, 1/3, 1/3 and the OR of two 1/V(rc) terms
  double v_rc = static_cast<double>(catalog.distinct("r", "rc"));
  double expected = 0.2 / 9 * combine_or(1 / v_rc, 1 / v_rc);
  EXPECT_NEAR(uniform.factor, expected, 1e-12);
  EXPECT_LT(uniform.factor, 0.0025);
  EXPECT_EQ(catalog.distinct("s", "sa"), 5000u);
  EXPECT_EQ(catalog.distinct("t", "tb"), 1000u);
}

class Generated : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    tpch = new Catalog;
    ssb = new Catalog;
    GeneratorSpec spec;
    spec.scale = 0.002;
    for (auto& t : generate(spec)) tpch->register_table(std::move(t));
    spec.kind = SchemaKind::SsbLite;
    for (auto& t : generate(spec)) ssb->register_table(std::move(t));
  }
  static void TearDownTestSuite() {
    delete tpch;
    delete ssb;
  }
  static Catalog* tpch;
  static Catalog* ssb;
};
Catalog* Generated::tpch = nullptr;
Catalog* Generated::ssb = nullptr;

void expect_consistent(const std::vector<NamedQuery>& queries, Catalog& catalog) {
  OptimizerConfig off;
  off.pushdown_enabled = false;
  OptimizerConfig on;
  on.min_table_size = 10;
  for (const auto& q : queries) {
    auto a = run_query(q.sql, off, catalog);
    auto b = run_query(q.sql, on, catalog);
    if (parse(q.sql, catalog).limit)
      EXPECT_EQ(a.result.row_strings(), b.result.row_strings()) << q.name;
    else
      EXPECT_EQ(testing::canonical_rows(a.result), testing::canonical_rows(b.result)) << q.name;
  }
}

TEST_F(Generated, QuerySuitesRunAndAgree) {
  expect_consistent(tpch_appendix_queries(), *tpch);
  expect_consistent(overhead_queries(), *tpch);
  expect_consistent(attribute_queries("orders"), *tpch);
  expect_consistent(attribute_queries("partsupp"), *tpch);
  expect_consistent(consecutive_join_queries(*tpch, 0.1), *tpch);
  expect_consistent(independent_corpus(), *tpch);
  expect_consistent(ssb_appendix_queries(), *ssb);
  EXPECT_THROW(attribute_queries("nation"), Error);
}

TEST_F(Generated, CrossoverTargetsSubstituteKeyBound) {
  for (const char* name : {"orders", "partsupp", "partsupp2", "part"}) {
    auto target = crossover_target(name, *tpch);
    EXPECT_NE(target.sql.find("$1"), std::string::npos) << name;
    EXPECT_GT(target.key_max, 0);
  }
  EXPECT_THROW(crossover_target("region", *tpch), Error);
  BenchConfig config;
  config.repeat = 1;
  auto r = crossover_suite(*tpch, crossover_target("orders", *tpch), {0.01, 1.0}, config);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0][r.column("results_match")], "yes");
  EXPECT_EQ(r.rows[1][r.column("results_match")], "yes");
}

TEST_F(Generated, OverheadSuiteKeepsPlans) {
  BenchConfig config;
  config.repeat = 1;
  auto r = overhead_suite(*tpch, overhead_queries(), config);
  for (const auto& row : r.rows) EXPECT_EQ(row[r.column("same_plan")], "yes") << row[0];
}

TEST_F(Generated, EstimationSuiteExactHasNoError) {
  auto r = estimation_error_suite(*tpch, independent_corpus(), {EstimatorKind::Exact, EstimatorKind::Uniform}, {},
                                  "independent");
  for (const auto& row : r.rows)
    if (row[r.column("estimator")] == "exact") EXPECT_EQ(row[r.column("rel_error")], "0.0000") << row[0];
}

std::string normalize(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind("--", 0) == 0) continue;
    out += line + " ";
  }
  std::string squeezed;
  for (char c : out) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!squeezed.empty() && squeezed.back() != ' ') squeezed += ' ';
    } else {
      squeezed += c;
    }
  }
  while (!squeezed.empty() && (squeezed.back() == ' ' || squeezed.back() == ';')) squeezed.pop_back();
  return squeezed;
}

TEST(QueryFiles, MatchEmbeddedQueries) {
  std::filesystem::path dir = std::filesystem::path(EXACTSEL_SOURCE_DIR) / "queries";
  auto all = tpch_appendix_queries();
  for (auto& q : ssb_appendix_queries()) all.push_back(q);
  for (auto& q : correlated_corpus()) all.push_back(q);
  for (const auto& q : all) {
    std::ifstream in(dir / (q.name + ".sql"));
    ASSERT_TRUE(in) << q.name;
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(normalize(ss.str()), normalize(q.sql)) << q.name;
  }
}

}  // namespace
}  // namespace exactsel
