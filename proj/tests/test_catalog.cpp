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

using testing::int_column;

Table small(const std::string& name, std::vector<std::int64_t> k, std::vector<std::int64_t> v) {
  std::vector<Column> cols;
  cols.push_back(int_column("k", std::move(k)));
  cols.push_back(int_column("v", std::move(v)));
  return Table(name, std::move(cols));
}

TEST(Catalog, RegistersMetadata) {
  Catalog c;
  const auto& m = c.register_table(small("r", {1, 2, 3, 4}, {5, 5, 6, 5}));
  EXPECT_EQ(m.row_count, 4u);
  EXPECT_EQ(m.distinct_counts.at("k"), 4u);
  EXPECT_EQ(c.distinct("r", "v"), 2u);
  EXPECT_TRUE(c.contains("r"));
  EXPECT_EQ(c.table_names(), std::vector<std::string>{"r"});
}

TEST(Catalog, ErrorsOnDuplicatesAndUnknowns) {
  Catalog c;
  c.register_table(small("r", {1}, {1}));
  EXPECT_THROW(c.register_table(small("r", {1}, {1})), CatalogError);
  EXPECT_THROW(c.table("s"), CatalogError);
  EXPECT_THROW(c.distinct("r", "zz"), CatalogError);
  EXPECT_NO_THROW(c.drop("s"));
}

TEST(Catalog, TemporaryTablesDeriveDistinctFromBase) {
  Catalog c;
  c.register_table(small("r", {1, 2, 3, 4, 5, 6}, {1, 2, 3, 4, 5, 6}));
  std::vector<Column> cols;
  cols.push_back(int_column("k", {1, 2}));
  cols.push_back(int_column("v", {1, 2}));
  auto a = c.add_temporary(cols, "r");
  auto b = c.add_temporary(cols, "r");
  EXPECT_NE(a, b);
  EXPECT_EQ(a.rfind("tmp_", 0), 0u);
  EXPECT_NE(a.find("_r"), std::string::npos);
  EXPECT_TRUE(c.meta(a).temporary);
  EXPECT_EQ(c.meta(a).base_table, "r");
  EXPECT_EQ(c.distinct(a, "k"), 2u);
  EXPECT_EQ(c.table_names(), std::vector<std::string>{"r"});
  c.drop(a);
  EXPECT_FALSE(c.contains(a));
  c.drop_temporaries();
  EXPECT_FALSE(c.contains(b));
  EXPECT_TRUE(c.contains("r"));
}

TEST(Catalog, SynopsesAreCachedPerKind) {
  Catalog c;
  std::vector<std::int64_t> k(500);
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = static_cast<std::int64_t>(i % 50);
  c.register_table(small("r", k, k));
  EXPECT_EQ(c.find_synopsis("r", "k", SynopsisKind::EquiDepth), nullptr);
  SynopsisParams p;
  p.buckets = 10;
  const auto& h = c.ensure_synopsis("r", "k", SynopsisKind::EquiDepth, p);
  ASSERT_TRUE(std::holds_alternative<Histogram>(h));
  EXPECT_EQ(std::get<Histogram>(h).buckets().size(), 10u);
  p.buckets = 5;
  c.ensure_synopsis("r", "k", SynopsisKind::EquiDepth, p);
  EXPECT_EQ(std::get<Histogram>(*c.find_synopsis("r", "k", SynopsisKind::EquiDepth)).buckets().size(), 10u);
  c.build_synopsis("r", "k", SynopsisKind::EquiDepth, p);
  EXPECT_EQ(std::get<Histogram>(*c.find_synopsis("r", "k", SynopsisKind::EquiDepth)).buckets().size(), 5u);
  EXPECT_EQ(c.find_synopsis("r", "k", SynopsisKind::CountMin), nullptr);
}

}  // namespace
}  // namespace exactsel
