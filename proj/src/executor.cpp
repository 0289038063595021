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


#include "exactsel/executor.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include <fmt/format.h>

#include "exactsel/catalog.hpp"

namespace exactsel {

void ExecStats::merge(const ExecStats& other) {
  rows_probed += other.rows_probed;
  rows_built += other.rows_built;
  predicate_evals += other.predicate_evals;
  intermediate_rows_materialized += other.intermediate_rows_materialized;
  join_intermediate_rows += other.join_intermediate_rows;
  for (const auto& [t, n] : other.predicate_evals_by_table) predicate_evals_by_table[t] += n;
  operators.insert(operators.end(), other.operators.begin(), other.operators.end());
}

const Column& ResultSet::column(const ColumnRef& ref) const {
  for (std::size_t i = 0; i < schema.size(); ++i)
    if (schema[i] == ref) return columns[i];
  throw ExecutionError(fmt::format("result has no column {}", ref.qualified()));
}

std::string ResultSet::row_string(std::size_t row) const {
  std::string s;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) s += '|';
    s += columns[c].format(row);
  }
  return s;
}

std::vector<std::string> ResultSet::row_strings() const {
  std::vector<std::string> out;
  out.reserve(row_count);
  for (std::size_t r = 0; r < row_count; ++r) out.push_back(row_string(r));
  return out;
}

Relation Relation::of_table(std::shared_ptr<const Table> table, const std::string& alias) {
  Relation rel;
  rel.row_count = table->row_count();
  for (const auto& c : table->columns()) {
    rel.schema.push_back({alias, c.name});
    rel.views.push_back({&c, nullptr});
  }
  rel.owned.push_back(std::move(table));
  return rel;
}

Relation Relation::of_result(std::shared_ptr<const ResultSet> result) {
  Relation rel;
  rel.row_count = result->row_count;
  rel.schema = result->schema;
  for (const auto& c : result->columns) rel.views.push_back({&c, nullptr});
  rel.owned.push_back(std::move(result));
  return rel;
}

const ColumnView& Relation::column(const ColumnRef& ref) const {
  for (std::size_t i = 0; i < schema.size(); ++i)
    if (schema[i] == ref) return views[i];
  throw ExecutionError(fmt::format("column {} is not available here", ref.qualified()));
}

Relation Relation::gather(const RowIds& ids) const {
  Relation out;
  out.schema = schema;
  out.owned = owned;
  out.row_count = ids.size();
  std::map<const RowIds*, std::shared_ptr<const RowIds>> remapped;
  for (const auto& v : views) {
    auto& slot = remapped[v.rows.get()];
    if (!slot) {
      if (!v.rows) {
        slot = std::make_shared<const RowIds>(ids);
      } else {
        RowIds r(ids.size());
        const auto& src = *v.rows;
        for (std::size_t i = 0; i < ids.size(); ++i) r[i] = src[ids[i]];
        slot = std::make_shared<const RowIds>(std::move(r));
      }
    }
    out.views.push_back({v.column, slot});
  }
  return out;
}

namespace {

Column materialize_view(const ColumnView& v, std::size_t rows, const std::string& name) {
  Column c = v.column->empty_like();
  c.name = name;
  if (v.rows) {
    c.gather_from(*v.column, *v.rows);
  } else {
    c.ints.assign(v.column->ints.begin(), v.column->ints.begin() + static_cast<std::ptrdiff_t>(
                                                                     std::min(rows, v.column->ints.size())));
    c.floats.assign(v.column->floats.begin(), v.column->floats.begin() + static_cast<std::ptrdiff_t>(
                                                                         std::min(rows, v.column->floats.size())));
  }
  return c;
}

Relation owned_relation(std::vector<ColumnRef> schema, std::vector<Column> columns, std::size_t rows) {
  auto holder = std::make_shared<const std::vector<Column>>(std::move(columns));
  Relation rel;
  rel.schema = std::move(schema);
  rel.row_count = rows;
  for (const auto& c : *holder) rel.views.push_back({&c, nullptr});
  rel.owned.push_back(std::move(holder));
  return rel;
}

}  // namespace

ResultSet Relation::materialize() const {
  ResultSet rs;
  rs.schema = schema;
  rs.row_count = row_count;
  for (std::size_t i = 0; i < views.size(); ++i) rs.columns.push_back(materialize_view(views[i], row_count, schema[i].column));
  return rs;
}

namespace {

template <typename T, typename Cmp>
void scan_compare(const T* data, const RowIds* rows, std::size_t n, const Mask& in, Mask& out, Cmp cmp) {
  if (rows) {
    const auto* r = rows->data();
    for (std::size_t i = 0; i < n; ++i) out[i] = in[i] && cmp(data[r[i]]);
  } else {
    for (std::size_t i = 0; i < n; ++i) out[i] = in[i] && cmp(data[i]);
  }
}

template <typename T>
void compare_op(const T* data, const RowIds* rows, std::size_t n, const Mask& in, Mask& out, CompareOp op, T lit) {
  switch (op) {
    case CompareOp::Eq: scan_compare(data, rows, n, in, out, [lit](T v) { return v == lit; }); break;
    case CompareOp::Lt: scan_compare(data, rows, n, in, out, [lit](T v) { return v < lit; }); break;
    case CompareOp::Gt: scan_compare(data, rows, n, in, out, [lit](T v) { return v > lit; }); break;
    case CompareOp::Le: scan_compare(data, rows, n, in, out, [lit](T v) { return v <= lit; }); break;
    case CompareOp::Ge: scan_compare(data, rows, n, in, out, [lit](T v) { return v >= lit; }); break;
  }
}

Mask eval_tree(const PredicateExpr& p, const Relation& rel, const Mask& in) {
  const std::size_t n = rel.row_count;
  Mask out(n, 0);
  switch (p.kind) {
    case PredicateExpr::Kind::Compare: {
      const auto& v = rel.column(p.column);
      const Column& c = *v.column;
      if (stores_integers(c.type)) {
        std::int64_t lit = p.literal.type == ColumnType::Float64 ? static_cast<std::int64_t>(p.literal.float_value)
                                                                 : p.literal.int_value;
        compare_op<std::int64_t>(c.ints.data(), v.rows.get(), n, in, out, p.op, lit);
      } else {
        double lit = p.literal.type == ColumnType::Float64 ? p.literal.float_value
                                                           : static_cast<double>(p.literal.int_value);
        compare_op<double>(c.floats.data(), v.rows.get(), n, in, out, p.op, lit);
      }
      return out;
    }
    case PredicateExpr::Kind::ColumnEq: {
      const auto& a = rel.column(p.column);
      const auto& b = rel.column(p.other);
      for (std::size_t i = 0; i < n; ++i) {
        if (!in[i]) continue;
        auto ra = a.physical(i), rb = b.physical(i);
        out[i] = stores_integers(a.column->type) ? a.column->ints[ra] == b.column->ints[rb]
                                                 : a.column->floats[ra] == b.column->floats[rb];
      }
      return out;
    }
    case PredicateExpr::Kind::And: {
      out = in;
      for (const auto& c : p.children) out = eval_tree(c, rel, out);
      return out;
    }
    case PredicateExpr::Kind::Or: {
      Mask remaining = in;
      for (const auto& c : p.children) {
        auto m = eval_tree(c, rel, remaining);
        for (std::size_t i = 0; i < n; ++i) {
          out[i] |= m[i];
          remaining[i] &= static_cast<std::uint8_t>(!m[i]);
        }
      }
      return out;
    }
  }
  return out;
}

std::uint64_t popcount(const Mask& m) {
  std::uint64_t k = 0;
  for (auto b : m) k += b;
  return k;
}

RowIds selected(const Mask& m) {
  RowIds ids;
  ids.reserve(static_cast<std::size_t>(popcount(m)));
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i]) ids.push_back(static_cast<std::uint32_t>(i));
  return ids;
}

}  // namespace

Mask eval_predicate(const PredicateExpr& pred, const Relation& rel, const Mask& input, ExecStats& stats) {
  if (input.size() != rel.row_count) throw ExecutionError("selection mask does not match the relation");
  auto n = popcount(input);
  stats.predicate_evals += n;
  for (const auto& t : pred.tables()) stats.predicate_evals_by_table[t] += n;
  return eval_tree(pred, rel, input);
}

std::uint64_t key_bits(const Column& column, std::size_t row) {
  if (stores_integers(column.type)) return static_cast<std::uint64_t>(column.ints[row]);
  double v = column.floats[row];
  return std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v);
}

std::uint64_t hash_key(const std::uint64_t* key, std::size_t width) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (std::size_t c = 0; c < width; ++c) {
    std::uint64_t z = h ^ key[c];
    z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
    z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
    h = z ^ (z >> 33);
  }
  return h;
}

HashTable::HashTable(const Relation& build, const std::vector<ColumnRef>& keys)
    : rows_(build.row_count), width_(keys.size()) {
  std::vector<const ColumnView*> views;
  for (const auto& k : keys) views.push_back(&build.column(k));
  std::size_t buckets = std::bit_ceil(std::max<std::size_t>(2 * rows_, 1));
  mask_ = buckets - 1;
  heads_.assign(buckets, kNone);
  next_.resize(rows_);
  hashes_.resize(rows_);
  keys_.resize(rows_ * width_);
  for (std::size_t j = 0; j < rows_; ++j) {
    for (std::size_t c = 0; c < width_; ++c) keys_[j * width_ + c] = key_bits(*views[c]->column, views[c]->physical(j));
    hashes_[j] = hash_key(&keys_[j * width_], width_);
  }
  // insert back to front so that chains list build rows in ascending order
  for (std::size_t j = rows_; j-- > 0;) {
    auto b = hashes_[j] & mask_;
    next_[j] = heads_[b];
    heads_[b] = static_cast<std::uint32_t>(j);
  }
}

namespace {

Relation concat(Relation a, const Relation& b) {
  a.schema.insert(a.schema.end(), b.schema.begin(), b.schema.end());
  a.views.insert(a.views.end(), b.views.begin(), b.views.end());
  a.owned.insert(a.owned.end(), b.owned.begin(), b.owned.end());
  return a;
}

/// Hash join of `probe` against `build`, optionally filtering the joined rows
/// with `residual` batch by batch instead of materializing the full join first.
Relation join_relations(const Relation& probe, const Relation& build, const std::vector<JoinKey>& keys,
                        const PredicateExpr* residual, ExecStats& stats, std::size_t max_rows) {
  std::vector<ColumnRef> build_keys, probe_keys;
  for (const auto& k : keys) {
    probe_keys.push_back(k.probe);
    build_keys.push_back(k.build);
  }
  HashTable table(build, build_keys);
  stats.rows_built += build.row_count;
  stats.rows_probed += probe.row_count;

  std::vector<const ColumnView*> views;
  for (const auto& k : probe_keys) views.push_back(&probe.column(k));
  const std::size_t width = views.size();

  RowIds out_p, out_b, batch_p, batch_b;
  constexpr std::size_t kBatch = 8192;
  auto flush = [&] {
    if (batch_p.empty()) return;
    if (residual) {
      auto rel = concat(probe.gather(batch_p), build.gather(batch_b));
      Mask all(batch_p.size(), 1);
      auto m = eval_predicate(*residual, rel, all, stats);
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (!m[i]) continue;
        out_p.push_back(batch_p[i]);
        out_b.push_back(batch_b[i]);
      }
    } else {
      out_p.insert(out_p.end(), batch_p.begin(), batch_p.end());
      out_b.insert(out_b.end(), batch_b.begin(), batch_b.end());
    }
    batch_p.clear();
    batch_b.clear();
    if (out_p.size() > max_rows)
      throw ExecutionError(fmt::format("hash join output exceeds the row cap of {}", max_rows));
  };

  std::uint64_t key[16];
  if (width > 16) throw UnsupportedQuery("join with more than 16 key columns");
  // single integer key without indirection is the common case
  const bool fast = width == 1 && !views[0]->rows && stores_integers(views[0]->column->type);
  for (std::size_t i = 0; i < probe.row_count; ++i) {
    if (fast) {
      key[0] = static_cast<std::uint64_t>(views[0]->column->ints[i]);
    } else {
      for (std::size_t c = 0; c < width; ++c) key[c] = key_bits(*views[c]->column, views[c]->physical(i));
    }
    table.for_each_match(key, hash_key(key, width), [&](std::uint32_t j) {
      batch_p.push_back(static_cast<std::uint32_t>(i));
      batch_b.push_back(j);
    });
    if (batch_p.size() >= kBatch) flush();
  }
  flush();
  return concat(probe.gather(out_p), build.gather(out_b));
}

/// Sums doubles exactly (Shewchuk partials) so the result does not depend on
/// the order rows arrive in.
class ExactSum {
 public:
  void add(double x) {
    std::size_t i = 0;
    for (double y : partials_) {
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      double hi = x + y;
      double lo = y - (hi - x);
      if (lo != 0.0) partials_[i++] = lo;
      x = hi;
    }
    partials_.resize(i);
    partials_.push_back(x);
  }

  double value() const {
    std::size_t n = partials_.size();
    if (n == 0) return 0.0;
    double hi = partials_[--n], lo = 0.0;
    while (n > 0) {
      double x = hi, y = partials_[--n];
      hi = x + y;
      double yr = hi - x;
      lo = y - yr;
      if (lo != 0.0) break;
    }
    if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) || (lo > 0.0 && partials_[n - 1] > 0.0))) {
      double y = lo * 2.0;
      double x = hi + y;
      double yr = x - hi;
      if (y == yr) hi = x;
    }
    return hi;
  }

 private:
  std::vector<double> partials_;
};

double value_as_double(const ColumnView& v, std::size_t i) {
  auto r = v.physical(i);
  return stores_integers(v.column->type) ? static_cast<double>(v.column->ints[r]) : v.column->floats[r];
}

/// Three-way comparison of two rows of a view: ints numerically, floats
/// numerically, text by string value.
int compare_rows(const ColumnView& v, std::size_t a, std::size_t b) {
  const Column& c = *v.column;
  auto ra = v.physical(a), rb = v.physical(b);
  switch (c.type) {
    case ColumnType::Float64: return c.floats[ra] < c.floats[rb] ? -1 : (c.floats[rb] < c.floats[ra] ? 1 : 0);
    case ColumnType::Text: {
      if (c.ints[ra] == c.ints[rb]) return 0;
      const auto& sa = c.dictionary->value(c.ints[ra]);
      const auto& sb = c.dictionary->value(c.ints[rb]);
      return sa < sb ? -1 : (sb < sa ? 1 : 0);
    }
    default: return c.ints[ra] < c.ints[rb] ? -1 : (c.ints[rb] < c.ints[ra] ? 1 : 0);
  }
}

Relation aggregate(const Relation& in, const PlanNode& node) {
  const std::size_t n = in.row_count;
  std::vector<const ColumnView*> gviews;
  for (const auto& g : node.group_by) gviews.push_back(&in.column(g));
  const std::size_t width = gviews.size();

  // group id per row; representative row per group
  std::vector<std::uint32_t> group_of(n, 0);
  std::vector<std::uint32_t> rep;
  if (width == 0) {
    rep.push_back(0);
  } else {
    std::vector<std::uint64_t> gkeys;
    std::size_t slots = 1024;
    std::vector<std::uint32_t> table(slots, HashTable::kNone);
    std::vector<std::uint64_t> key(width);
    auto insert_slot = [&](std::vector<std::uint32_t>& t, std::uint32_t g) {
      auto h = hash_key(&gkeys[g * width], width);
      auto m = t.size() - 1;
      auto s = h & m;
      while (t[s] != HashTable::kNone) s = (s + 1) & m;
      t[s] = g;
    };
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < width; ++c) key[c] = key_bits(*gviews[c]->column, gviews[c]->physical(i));
      auto h = hash_key(key.data(), width);
      auto m = table.size() - 1;
      auto s = h & m;
      std::uint32_t g = HashTable::kNone;
      while (table[s] != HashTable::kNone) {
        auto cand = table[s];
        if (std::equal(key.begin(), key.end(), gkeys.begin() + static_cast<std::ptrdiff_t>(cand * width))) {
          g = cand;
          break;
        }
        s = (s + 1) & m;
      }
      if (g == HashTable::kNone) {
        g = static_cast<std::uint32_t>(rep.size());
        rep.push_back(static_cast<std::uint32_t>(i));
        gkeys.insert(gkeys.end(), key.begin(), key.end());
        table[s] = g;
        if (rep.size() * 2 > table.size()) {
          std::vector<std::uint32_t> bigger(table.size() * 2, HashTable::kNone);
          for (std::uint32_t k = 0; k < rep.size(); ++k) insert_slot(bigger, k);
          table.swap(bigger);
        }
      }
      group_of[i] = g;
    }
  }
  const std::size_t groups = rep.size();

  // output groups ordered by key ascending
  std::vector<std::uint32_t> order(groups);
  std::iota(order.begin(), order.end(), 0);
  if (width > 0) {
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      for (const auto* v : gviews) {
        int c = compare_rows(*v, rep[a], rep[b]);
        if (c != 0) return c < 0;
      }
      return a < b;
    });
  }

  std::vector<Column> cols;
  std::vector<ColumnRef> schema = [&] {
    std::vector<ColumnRef> s;
    for (const auto& item : node.items)
      s.push_back(item.kind == SelectItem::Kind::Column && item.alias.empty() ? item.column
                                                                              : ColumnRef{"", item.output_name()});
    return s;
  }();
  for (const auto& item : node.items) {
    if (item.kind == SelectItem::Kind::Column) {
      const auto& v = in.column(item.column);
      Column c = v.column->empty_like();
      c.name = item.output_name();
      c.reserve(groups);
      for (auto g : order) c.append_from(*v.column, v.physical(rep[g]));
      cols.push_back(std::move(c));
      continue;
    }
    const auto& agg = item.aggregate;
    if (agg.func == AggregateExpr::Func::CountStar) {
      std::vector<std::int64_t> counts(groups, 0);
      for (std::size_t i = 0; i < n; ++i) counts[group_of[i]]++;
      Column c(item.output_name(), ColumnType::Int64);
      for (auto g : order) c.ints.push_back(counts[g]);
      cols.push_back(std::move(c));
      continue;
    }
    const auto& va = in.column(agg.a);
    const ColumnView* vb = agg.form == AggregateExpr::Form::Column ? nullptr : &in.column(agg.b);
    bool integral = va.column->type == ColumnType::Int64 && (!vb || vb->column->type == ColumnType::Int64);
    if (integral) {
      std::vector<std::int64_t> sums(groups, 0);
      for (std::size_t i = 0; i < n; ++i) {
        auto a = va.column->ints[va.physical(i)];
        std::int64_t x = a;
        if (vb) {
          auto b = vb->column->ints[vb->physical(i)];
          x = agg.form == AggregateExpr::Form::Difference ? a - b : a * (1 - b);
        }
        sums[group_of[i]] += x;
      }
      Column c(item.output_name(), ColumnType::Int64);
      for (auto g : order) c.ints.push_back(sums[g]);
      cols.push_back(std::move(c));
    } else {
      std::vector<ExactSum> sums(groups);
      for (std::size_t i = 0; i < n; ++i) {
        double a = value_as_double(va, i);
        double x = a;
        if (vb) {
          double b = value_as_double(*vb, i);
          x = agg.form == AggregateExpr::Form::Difference ? a - b : a * (1 - b);
        }
        sums[group_of[i]].add(x);
      }
      Column c(item.output_name(), ColumnType::Float64);
      for (auto g : order) c.floats.push_back(sums[g].value());
      cols.push_back(std::move(c));
    }
  }
  return owned_relation(std::move(schema), std::move(cols), groups);
}

Relation sort_relation(const Relation& in, const std::vector<SortKey>& keys) {
  RowIds perm(in.row_count);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](std::uint32_t a, std::uint32_t b) {
    for (const auto& k : keys) {
      int c = compare_rows(in.views.at(k.index), a, b);
      if (c != 0) return k.descending ? c > 0 : c < 0;
    }
    return false;
  });
  return in.gather(perm);
}

/// Alias of the scan every row of a left-deep pipeline is probed from.
const PlanNode* probe_leaf(const PlanNode& node) {
  const PlanNode* n = &node;
  while (n->kind == PlanKind::HashJoin) n = &n->child(0);
  return n->kind == PlanKind::Scan || n->kind == PlanKind::TempScan ? n : nullptr;
}

class Run {
 public:
  Run(Catalog& catalog, const ExecutorOptions& options, ExecStats& stats)
      : catalog_(catalog), options_(options), stats_(stats) {}

  Relation exec(const PlanNode& node) {
    auto start = std::chrono::steady_clock::now();
    Relation out = dispatch(node);
    auto us = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count();
    if (out.row_count > options_.max_rows)
      throw ExecutionError(fmt::format("{} produced {} rows, above the cap of {}", to_string(node.kind), out.row_count,
                                       options_.max_rows));
    stats_.operators.push_back({std::string(to_string(node.kind)), out.row_count, us});
    return out;
  }

 private:
  Relation filter(const Relation& in, const PredicateExpr& pred) {
    Mask all(in.row_count, 1);
    return in.gather(selected(eval_predicate(pred, in, all, stats_)));
  }

  Relation dispatch(const PlanNode& node) {
    switch (node.kind) {
      case PlanKind::Scan:
      case PlanKind::TempScan: return Relation::of_table(catalog_.table(node.table), node.alias);
      case PlanKind::Filter: {
        if (node.child().kind == PlanKind::HashJoin) {
          // conjuncts over the pipeline's probe scan run before probing; the
          // rest run on the join output
          const auto* leaf = probe_leaf(node.child());
          std::vector<PredicateExpr> pre, rest;
          for (auto& c : conjuncts(*node.predicate)) {
            auto t = c.tables();
            if (leaf && t.size() == 1 && *t.begin() == leaf->alias)
              pre.push_back(std::move(c));
            else
              rest.push_back(std::move(c));
          }
          std::optional<PredicateExpr> pre_pred, rest_pred;
          if (!pre.empty()) pre_pred = PredicateExpr::conjunction(std::move(pre));
          if (!rest.empty()) rest_pred = PredicateExpr::conjunction(std::move(rest));
          return timed_join(node.child(), pre_pred ? &*pre_pred : nullptr, rest_pred ? &*rest_pred : nullptr);
        }
        return filter(exec(node.child()), *node.predicate);
      }
      case PlanKind::Project: {
        auto in = exec(node.child());
        Relation out;
        out.row_count = in.row_count;
        out.owned = in.owned;
        for (const auto& item : node.items) {
          out.schema.push_back(item.alias.empty() ? item.column : ColumnRef{"", item.alias});
          out.views.push_back(in.column(item.column));
        }
        return out;
      }
      case PlanKind::HashJoin: return join(node, nullptr, nullptr);
      case PlanKind::Aggregate: return aggregate(exec(node.child()), node);
      case PlanKind::Compound: {
        auto in = exec(node.child());
        if (node.predicate) in = filter(in, *node.predicate);
        std::vector<Column> cols;
        for (const auto& c : node.columns) cols.push_back(materialize_view(in.column(c), in.row_count, c.column));
        return owned_relation(node.columns, std::move(cols), in.row_count);
      }
      case PlanKind::Sort: return sort_relation(exec(node.child()), node.sort_keys);
      case PlanKind::Limit: {
        auto in = exec(node.child());
        RowIds ids(std::min(in.row_count, node.limit));
        std::iota(ids.begin(), ids.end(), 0);
        return in.gather(ids);
      }
    }
    throw ExecutionError("unknown operator");
  }

  /// join() for a HashJoin reached without going through exec().
  Relation timed_join(const PlanNode& node, const PredicateExpr* pre, const PredicateExpr* residual) {
    auto start = std::chrono::steady_clock::now();
    auto out = join(node, pre, residual);
    auto us = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count();
    stats_.operators.push_back({"HashJoin", out.row_count, us});
    return out;
  }

  Relation join(const PlanNode& node, const PredicateExpr* pre, const PredicateExpr* residual) {
    const auto& probe_node = node.child(0);
    const auto& build_node = node.child(1);
    Relation probe;
    if (probe_node.kind == PlanKind::HashJoin) {
      probe = timed_join(probe_node, pre, nullptr);
      stats_.join_intermediate_rows += probe.row_count;
    } else {
      probe = exec(probe_node);
      if (pre) probe = filter(probe, *pre);
    }
    Relation build = exec(build_node);
    if (build_node.kind == PlanKind::HashJoin) stats_.join_intermediate_rows += build.row_count;
    return join_relations(probe, build, node.join_keys, residual, stats_, options_.max_rows);
  }

  Catalog& catalog_;
  const ExecutorOptions& options_;
  ExecStats& stats_;
};

}  // namespace

HashTable build_hash(const ResultSet& build, const std::vector<ColumnRef>& keys) {
  auto rel = Relation::of_result(std::make_shared<const ResultSet>(build));
  return HashTable(rel, keys);
}

ResultSet probe_hash(const ResultSet& probe, const std::vector<ColumnRef>& probe_keys, const HashTable& table,
                     const ResultSet& build, ExecStats& stats) {
  auto p = Relation::of_result(std::make_shared<const ResultSet>(probe));
  auto b = Relation::of_result(std::make_shared<const ResultSet>(build));
  if (table.width() != probe_keys.size()) throw ExecutionError("probe key count differs from the hash table's");
  std::vector<const ColumnView*> views;
  for (const auto& k : probe_keys) views.push_back(&p.column(k));
  stats.rows_built += table.build_row_count();
  stats.rows_probed += p.row_count;
  RowIds out_p, out_b;
  std::vector<std::uint64_t> key(views.size());
  for (std::size_t i = 0; i < p.row_count; ++i) {
    for (std::size_t c = 0; c < views.size(); ++c) key[c] = key_bits(*views[c]->column, views[c]->physical(i));
    table.for_each_match(key.data(), hash_key(key.data(), key.size()), [&](std::uint32_t j) {
      out_p.push_back(static_cast<std::uint32_t>(i));
      out_b.push_back(j);
    });
  }
  auto out = concat(p.gather(out_p), b.gather(out_b)).materialize();
  out.stats = stats;
  return out;
}

Executor::Executor(Catalog& catalog, ExecutorOptions options) : catalog_(catalog), options_(options) {}

ResultSet Executor::execute(const PlanPtr& node) {
  ExecStats stats;
  Run run(catalog_, options_, stats);
  auto rel = run.exec(*node);
  auto rs = rel.materialize();
  rs.stats = std::move(stats);
  return rs;
}

ExecOutcome Executor::execute(const PlanPtr& node, bool is_spd, std::uint64_t max_size) {
  if (!is_spd) return execute(node);
  ExecStats count_stats;
  auto n = count(node, &count_stats);
  if (n > max_size) return GateExceeded{n, max_size};
  auto rs = execute(node);
  count_stats.merge(rs.stats);
  rs.stats = std::move(count_stats);
  return rs;
}

std::uint64_t Executor::count(const PlanPtr& node, ExecStats* stats) {
  auto rs = execute(attach_count(node));
  if (stats) stats->merge(rs.stats);
  return static_cast<std::uint64_t>(rs.columns.at(0).ints.at(0));
}

std::string Executor::add_temporary_table(ResultSet result, const std::string& base_table, ExecStats* stats) {
  for (std::size_t i = 0; i < result.columns.size(); ++i) result.columns[i].name = result.schema[i].column;
  if (result.row_count > options_.max_rows)
    throw ExecutionError(fmt::format("temporary table of {} rows exceeds the row cap", result.row_count));
  if (stats) stats->intermediate_rows_materialized += result.row_count;
  return catalog_.add_temporary(std::move(result.columns), base_table);
}

}  // namespace exactsel
