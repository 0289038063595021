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


#include "exactsel/estimators.hpp"

#include <algorithm>
#include <memory>

#include <fmt/format.h>

#include "exactsel/catalog.hpp"
#include "exactsel/executor.hpp"
#include "exactsel/plan.hpp"

namespace exactsel {

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Exact: return "exact";
    case EstimatorKind::Uniform: return "uniform";
    case EstimatorKind::EquiWidth: return "equiwidth";
    case EstimatorKind::EquiDepth: return "equidepth";
    case EstimatorKind::CountMin: return "cms";
    case EstimatorKind::Sample: return "sample";
  }
  return "?";
}

EstimatorKind parse_estimator_kind(std::string_view name) {
  for (auto k : {EstimatorKind::Exact, EstimatorKind::Uniform, EstimatorKind::EquiWidth, EstimatorKind::EquiDepth,
                 EstimatorKind::CountMin, EstimatorKind::Sample})
    if (to_string(k) == name) return k;
  throw Error(fmt::format("unknown estimator '{}'", name));
}

SelectivityEstimate SelectivityEstimate::of_factor(double factor, std::size_t row_count) {
  return {factor * static_cast<double>(row_count), row_count == 0 ? 0.0 : factor, false};
}

SelectivityEstimate SelectivityEstimate::of_cardinality(double cardinality, std::size_t row_count, bool exact) {
  double f = row_count == 0 ? 0.0 : cardinality / static_cast<double>(row_count);
  return {row_count == 0 ? 0.0 : cardinality, f, exact};
}

SelectivityEstimate uniform_equality(std::size_t row_count, std::size_t distinct) {
  if (distinct == 0) {
    if (row_count > 0) throw InvalidStatistics("distinct count 0 for a non-empty table");
    return {};
  }
  return SelectivityEstimate::of_cardinality(static_cast<double>(row_count) / static_cast<double>(distinct),
                                             row_count);
}

SelectivityEstimate uniform_inequality(std::size_t row_count) {
  return SelectivityEstimate::of_factor(1.0 / 3.0, row_count);
}

namespace {

void check_factor(double f) {
  if (!(f >= 0.0 && f <= 1.0)) throw InvalidStatistics(fmt::format("selectivity factor {} outside [0, 1]", f));
}

double as_double(const Literal& lit) {
  return lit.type == ColumnType::Float64 ? lit.float_value : static_cast<double>(lit.int_value);
}

double clamp_factor(double cardinality, std::size_t rows) {
  if (rows == 0) return 0.0;
  return std::clamp(cardinality / static_cast<double>(rows), 0.0, 1.0);
}

}  // namespace

double combine_and(std::span<const double> factors) {
  double p = 1.0;
  for (double f : factors) {
    check_factor(f);
    p *= f;
  }
  return p;
}

double combine_or(double f1, double f2) {
  check_factor(f1);
  check_factor(f2);
  return f1 + f2 - f1 * f2;
}

SelectivityEstimate hist_estimate_equality(const Histogram& h, double value) {
  return SelectivityEstimate::of_cardinality(h.estimate_equal(value), h.total());
}

SelectivityEstimate hist_estimate_range(const Histogram& h, CompareOp op, double value) {
  if (op == CompareOp::Eq) return hist_estimate_equality(h, value);
  double c = std::clamp(h.estimate_range(op, value), 0.0, static_cast<double>(h.total()));
  return SelectivityEstimate::of_cardinality(c, h.total());
}

void cms_update(CountMinSketch& sketch, std::uint64_t key) { sketch.update(key); }

SelectivityEstimate cms_point(const CountMinSketch& sketch, std::uint64_t key, std::size_t row_count) {
  return SelectivityEstimate::of_cardinality(static_cast<double>(sketch.point(key)), row_count);
}

SelectivityEstimate sample_estimate(const RowSample& sample, const PredicateExpr& pred, const Table& table,
                                    const std::string& alias) {
  const std::size_t n = table.row_count();
  if (n == 0 || sample.sample_size() == 0) return {};
  auto shared = std::shared_ptr<const Table>(std::shared_ptr<const Table>{}, &table);
  auto rel = Relation::of_table(shared, alias).gather(sample.rows());
  ExecStats scratch;
  Mask all(rel.row_count, 1);
  auto m = eval_predicate(pred, rel, all, scratch);
  std::size_t hits = 0;
  for (auto b : m) hits += b;
  double scaled = static_cast<double>(hits) * static_cast<double>(n) / static_cast<double>(sample.sample_size());
  return SelectivityEstimate::of_cardinality(scaled, n);
}

namespace {

struct LeafContext {
  const std::string& table;
  EstimatorKind kind;
  Catalog& catalog;
  const SynopsisParams& params;
  std::size_t rows;
};

double leaf_factor(const PredicateExpr& p, const LeafContext& ctx) {
  if (ctx.rows == 0) return 0.0;
  if (p.kind == PredicateExpr::Kind::ColumnEq) {
    // same-table column equality: 1 / max(V(a), V(b))
    auto v = std::max(ctx.catalog.distinct(ctx.table, p.column.column), ctx.catalog.distinct(ctx.table, p.other.column));
    return v == 0 ? 0.0 : 1.0 / static_cast<double>(v);
  }
  const auto& col = p.column.column;
  auto uniform = [&] {
    if (p.op == CompareOp::Eq) return uniform_equality(ctx.rows, ctx.catalog.distinct(ctx.table, col)).factor;
    return uniform_inequality(ctx.rows).factor;
  };
  const Column& column = ctx.catalog.table(ctx.table)->column(col);
  switch (ctx.kind) {
    case EstimatorKind::EquiWidth:
    case EstimatorKind::EquiDepth: {
      if (column.type == ColumnType::Text) return uniform();
      auto sk = ctx.kind == EstimatorKind::EquiWidth ? SynopsisKind::EquiWidth : SynopsisKind::EquiDepth;
      const auto& h = std::get<Histogram>(ctx.catalog.ensure_synopsis(ctx.table, col, sk, ctx.params));
      return clamp_factor(hist_estimate_range(h, p.op, as_double(p.literal)).cardinality, ctx.rows);
    }
    case EstimatorKind::CountMin: {
      if (p.op != CompareOp::Eq) return uniform_inequality(ctx.rows).factor;
      const auto& s = std::get<CountMinSketch>(ctx.catalog.ensure_synopsis(ctx.table, col, SynopsisKind::CountMin,
                                                                           ctx.params));
      Literal key = p.literal;
      if (column.type == ColumnType::Float64 && key.type != ColumnType::Float64) {
        key = Literal::real(static_cast<double>(key.int_value));
      } else if (column.type != ColumnType::Float64 && key.type == ColumnType::Float64) {
        return 0.0;
      }
      return clamp_factor(static_cast<double>(s.point(sketch_key(key))), ctx.rows);
    }
    default: return uniform();
  }
}

double tree_factor(const PredicateExpr& p, const LeafContext& ctx) {
  switch (p.kind) {
    case PredicateExpr::Kind::And: {
      std::vector<double> fs;
      for (const auto& c : p.children) fs.push_back(tree_factor(c, ctx));
      return combine_and(fs);
    }
    case PredicateExpr::Kind::Or: {
      double f = 0.0;
      for (const auto& c : p.children) f = combine_or(f, tree_factor(c, ctx));
      return f;
    }
    default: return leaf_factor(p, ctx);
  }
}

}  // namespace

SelectivityEstimate estimate(const PredicateExpr& pred, const std::string& table, EstimatorKind kind,
                             Catalog& catalog, Executor& executor, const SynopsisParams& params, ExecStats* stats) {
  for (const auto& t : pred.tables())
    if (t != table) throw UnsupportedQuery(fmt::format("predicate on {} cannot be estimated for {}", t, table));
  const std::size_t rows = catalog.meta(table).row_count;
  switch (kind) {
    case EstimatorKind::Exact: {
      std::set<ColumnRef> cols;
      pred.collect_columns(cols);
      auto compound = coalesce_nodes(pred, {cols.begin(), cols.end()}, make_scan(table), catalog);
      auto n = executor.count(compound, stats);
      return SelectivityEstimate::of_cardinality(static_cast<double>(n), rows, true);
    }
    case EstimatorKind::Sample: {
      std::set<ColumnRef> cols;
      pred.collect_columns(cols);
      const auto& s = std::get<RowSample>(
          catalog.ensure_synopsis(table, cols.begin()->column, SynopsisKind::Sample, params));
      return sample_estimate(s, pred, *catalog.table(table), table);
    }
    default: {
      LeafContext ctx{table, kind, catalog, params, rows};
      return SelectivityEstimate::of_factor(tree_factor(pred, ctx), rows);
    }
  }
}

}  // namespace exactsel
