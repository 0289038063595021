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

using testing::random_database;
using testing::random_query;

class Sql : public ::testing::Test {
 protected:
  void SetUp() override {
    Rng rng(2);
    for (auto& t : random_database(rng, 50, 30, 20)) catalog.register_table(std::move(t));
  }
  RawPlan p(const std::string& sql) { return parse(sql, catalog); }
  Catalog catalog;
};

TEST_F(Sql, ResolvesColumnsAndLiterals) {
  auto plan = p("select a_int, tb.b_flt from ta, tb where a_fk = b_key and a_date >= date '1994-08-21' "
                "and b_flt < 3 and a_txt = 'red' and a_int > -2");
  EXPECT_EQ(plan.tables, (std::vector<std::string>{"ta", "tb"}));
  ASSERT_EQ(plan.items.size(), 2u);
  EXPECT_EQ(plan.items[1].column, (ColumnRef{"tb", "b_flt"}));
  auto cs = conjuncts(*plan.where);
  ASSERT_EQ(cs.size(), 5u);
  EXPECT_TRUE(cs[0].is_join());
  EXPECT_EQ(cs[1].literal, Literal::date(parse_date("1994-08-21")));
  EXPECT_EQ(cs[1].op, CompareOp::Ge);
  EXPECT_EQ(cs[2].literal, Literal::real(3));
  EXPECT_EQ(cs[3].literal.type, ColumnType::Text);
  EXPECT_GE(cs[3].literal.int_value, 0);
  EXPECT_EQ(cs[4].literal, Literal::integer(-2));
}

TEST_F(Sql, LiteralOnTheLeftFlipsTheOperator) {
  auto plan = p("SELECT COUNT(*) FROM ta WHERE 5 < a_int");
  EXPECT_EQ(plan.where->op, CompareOp::Gt);
  EXPECT_EQ(plan.where->literal, Literal::integer(5));
}

TEST_F(Sql, UnknownTextLiteralGetsNegativeCode) {
  auto plan = p("SELECT COUNT(*) FROM ta WHERE a_txt = 'nowhere'");
  EXPECT_EQ(plan.where->literal.int_value, -1);
}

TEST_F(Sql, AndBindsTighterThanOr) {
  auto plan = p("SELECT COUNT(*) FROM ta WHERE a_int = 1 OR a_int = 2 AND a_flt > 1");
  ASSERT_EQ(plan.where->kind, PredicateExpr::Kind::Or);
  EXPECT_EQ(plan.where->children[1].kind, PredicateExpr::Kind::And);
}

TEST_F(Sql, AggregatesAliasesOrderLimit) {
  auto plan = p("SELECT a_txt, COUNT(*) AS n, SUM(a_flt * (1 - b_flt)) AS rev, SUM(a_int - b_int) FROM ta, tb "
                "WHERE a_fk = b_key GROUP BY a_txt ORDER BY rev DESC, a_txt LIMIT 3");
  ASSERT_EQ(plan.items.size(), 4u);
  EXPECT_EQ(plan.items[1].aggregate.func, AggregateExpr::Func::CountStar);
  EXPECT_EQ(plan.items[2].aggregate.form, AggregateExpr::Form::Discounted);
  EXPECT_EQ(plan.items[3].aggregate.form, AggregateExpr::Form::Difference);
  EXPECT_EQ(plan.items[2].output_name(), "rev");
  EXPECT_EQ(plan.order_by, (std::vector<SortKey>{{2, true}, {0, false}}));
  EXPECT_EQ(plan.limit, std::optional<std::size_t>(3));
  EXPECT_TRUE(plan.has_aggregates());
}

TEST_F(Sql, ToSqlRoundTripsRandomQueries) {
  Rng rng(77);
  for (int i = 0; i < 300; ++i) {
    auto plan = p(random_query(rng));
    auto again = p(plan.to_sql());
    ASSERT_EQ(again, plan) << plan.to_sql();
  }
}

TEST_F(Sql, SyntaxErrorsReportPosition) {
  try {
    p("SELECT a_int\nFROM ta WHERE a_int = = 3");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 23u);
  }
}

TEST_F(Sql, RejectsInvalidQueries) {
  for (const char* sql : {
           "SELECT a_int FROM nowhere",
           "SELECT a_int FROM ta, ta",
           "SELECT zz FROM ta",
           "SELECT a_int FROM ta WHERE a_int = 'x'",
           "SELECT a_int FROM ta WHERE a_int = 1.5",
           "SELECT a_int FROM ta WHERE a_txt < 'x'",
           "SELECT a_int FROM ta WHERE a_date = '1995-01-01'",
           "SELECT a_int FROM ta WHERE a_date = DATE '1995-02-30'",
           "SELECT a_int FROM ta WHERE a_int <> 3",
           "SELECT a_int FROM ta WHERE 1 = 1",
           "SELECT a_int, COUNT(*) FROM ta",
           "SELECT SUM(a_txt) FROM ta",
           "SELECT a_int FROM ta ORDER BY a_flt",
           "SELECT a_int FROM ta LIMIT -1",
           "SELECT a_int FROM ta WHERE a_txt = 'open",
           "SELECT a_int FROM ta;;",
           "SELECT a_int, b_int FROM ta, tb WHERE a_flt = b_int",
       })
    EXPECT_THROW(p(sql), ParseError) << sql;
}

TEST_F(Sql, CrossTableInequalityIsUnsupported) {
  EXPECT_THROW(p("SELECT COUNT(*) FROM ta, tb WHERE a_int < b_int"), UnsupportedQuery);
  auto plan = p("SELECT COUNT(*) FROM ta, tb WHERE (a_int = 1 OR b_int = 2) AND a_fk = b_key");
  EXPECT_THROW(classify_predicates(plan), UnsupportedQuery);
}

TEST_F(Sql, ClassifiesJoinsAndSelections) {
  auto plan = p("SELECT COUNT(*) FROM ta, tb WHERE a_fk = b_key AND a_int = 1 AND (b_int = 2 OR b_int = 3) "
                "AND a_flt < 4 AND a_int = a_key");
  auto c = classify_predicates(plan);
  ASSERT_EQ(c.joins.size(), 1u);
  ASSERT_EQ(c.selections.size(), 2u);
  EXPECT_EQ(conjuncts(c.selections.at("ta")).size(), 3u);
  EXPECT_EQ(c.selections.at("tb").kind, PredicateExpr::Kind::Or);
}

}  // namespace
}  // namespace exactsel
