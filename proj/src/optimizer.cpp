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


#include "exactsel/optimizer.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <limits>
#include <set>

#include <fmt/format.h>

#include "exactsel/catalog.hpp"

namespace exactsel {

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

/// Distinct count usable in a join estimate for a relation of `rows` rows.
double effective_distinct(double v, double rows) {
  if (rows <= 0) return 0;
  return std::max(1.0, std::min(v, rows));
}

}  // namespace

MaxSelectivity MaxSelectivity::ratio(double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw Error(fmt::format("max selectivity ratio {} outside [0, 1]", r));
  return {Kind::Ratio, r};
}

MaxSelectivity MaxSelectivity::absolute(double rows) {
  if (!(rows >= 0.0)) throw Error(fmt::format("max selectivity row count {} is negative", rows));
  return {Kind::Absolute, rows};
}

MaxSelectivity MaxSelectivity::parse(std::string_view text) {
  bool abs = false;
  if (text.size() > 3 && text.substr(text.size() - 3) == "abs") {
    abs = true;
    text.remove_suffix(3);
  }
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw Error(fmt::format("cannot parse max selectivity '{}'", text));
  if (abs || v > 1.0) return absolute(v);
  return ratio(v);
}

double MaxSelectivity::max_size(std::size_t base_rows) const {
  return kind == Kind::Ratio ? value * static_cast<double>(base_rows) : value;
}

std::string MaxSelectivity::to_string() const {
  return kind == Kind::Ratio ? fmt::format("{}", value) : fmt::format("{}abs", value);
}

double JoinGraph::distinct_of(const ColumnRef& c) const {
  auto it = distinct.find(c);
  if (it == distinct.end()) throw CatalogError(fmt::format("no distinct count for {}", c.qualified()));
  return it->second;
}

bool JoinGraph::adjacent(const std::string& a, const std::string& b) const {
  for (const auto& e : edges)
    if ((e.left.table == a && e.right.table == b) || (e.left.table == b && e.right.table == a)) return true;
  return false;
}

double estimate_join_size(double left_rows, double right_rows, double left_distinct, double right_distinct) {
  if (left_rows <= 0 || right_rows <= 0) return 0;
  double v = std::max(left_distinct, right_distinct);
  if (v <= 0) throw InvalidStatistics("join column without distinct values in a non-empty relation");
  return left_rows * right_rows / v;
}

std::vector<JoinStep> order_joins(const JoinGraph& graph) {
  std::vector<JoinStep> order;
  if (graph.cardinality.empty()) return order;
  if (graph.cardinality.size() == 1) {
    const auto& [name, rows] = *graph.cardinality.begin();
    order.push_back({name, rows});
    return order;
  }
  auto card = [&](const std::string& t) { return graph.cardinality.at(t); };

  // seed: adjacent pair with the smallest estimated join
  std::string best_a, best_b;
  double best = std::numeric_limits<double>::infinity();
  for (auto ia = graph.cardinality.begin(); ia != graph.cardinality.end(); ++ia) {
    for (auto ib = std::next(ia); ib != graph.cardinality.end(); ++ib) {
      const auto &a = ia->first, &b = ib->first;
      double est = std::numeric_limits<double>::infinity();
      for (const auto& e : graph.edges) {
        const ColumnRef* ca = nullptr;
        const ColumnRef* cb = nullptr;
        if (e.left.table == a && e.right.table == b) {
          ca = &e.left;
          cb = &e.right;
        } else if (e.left.table == b && e.right.table == a) {
          ca = &e.right;
          cb = &e.left;
        } else {
          continue;
        }
        est = std::min(est, estimate_join_size(card(a), card(b), effective_distinct(graph.distinct_of(*ca), card(a)),
                                               effective_distinct(graph.distinct_of(*cb), card(b))));
      }
      if (est < best) {
        best = est;
        best_a = a;
        best_b = b;
      }
    }
  }
  if (best_a.empty()) throw UnsupportedQuery("join graph is disconnected");
  order.push_back({best_a, card(best_a)});
  order.push_back({best_b, best});
  std::set<std::string> placed{best_a, best_b};
  double running = best;

  while (placed.size() < graph.cardinality.size()) {
    std::string pick;
    double pick_est = std::numeric_limits<double>::infinity();
    for (const auto& [x, rows] : graph.cardinality) {
      if (placed.count(x)) continue;
      double est = std::numeric_limits<double>::infinity();
      for (const auto& e : graph.edges) {
        const ColumnRef* in = nullptr;
        const ColumnRef* cx = nullptr;
        if (e.right.table == x && placed.count(e.left.table)) {
          in = &e.left;
          cx = &e.right;
        } else if (e.left.table == x && placed.count(e.right.table)) {
          in = &e.right;
          cx = &e.left;
        } else {
          continue;
        }
        est = std::min(est, estimate_join_size(running, rows, effective_distinct(graph.distinct_of(*in), running),
                                               effective_distinct(graph.distinct_of(*cx), rows)));
      }
      if (est < pick_est) {
        pick_est = est;
        pick = x;
      }
    }
    if (pick.empty()) throw UnsupportedQuery("join graph is disconnected");
    order.push_back({pick, pick_est});
    placed.insert(pick);
    running = pick_est;
  }
  return order;
}

std::string_view to_string(PushDownDecision::Outcome outcome) {
  switch (outcome) {
    case PushDownDecision::Outcome::Pushed: return "pushed";
    case PushDownDecision::Outcome::Reverted: return "reverted";
    case PushDownDecision::Outcome::Probe: return "probe";
    case PushDownDecision::Outcome::BelowMinSize: return "below-min-size";
    case PushDownDecision::Outcome::NoSelection: return "no-selection";
    case PushDownDecision::Outcome::Disabled: return "disabled";
  }
  return "?";
}

std::string OptimizeReport::to_string() const {
  std::string s;
  for (const auto& d : decisions) {
    s += fmt::format("{} rows={} decision={}", d.table, d.base_rows, exactsel::to_string(d.outcome));
    if (d.selectivity) s += fmt::format(" selectivity={:.1f}", *d.selectivity);
    if (d.threshold) s += fmt::format(" max={:.1f}", *d.threshold);
    if (d.selectivity) s += fmt::format(" count_ms={:.3f}", d.count_elapsed_ms);
    if (!d.temp_table.empty()) s += " temp=" + d.temp_table;
    s += '\n';
  }
  s += "join order:";
  for (const auto& j : join_order) s += fmt::format(" {}(est={:.1f})", j.relation, j.estimated_rows);
  s += fmt::format("\noptimize_ms={:.3f}\n", elapsed_ms);
  return s;
}

namespace {

void add_columns_of(const std::string& table, const std::set<ColumnRef>& cols, std::set<ColumnRef>& out) {
  for (const auto& c : cols)
    if (c.table == table) out.insert(c);
}

}  // namespace

namespace {

void push_down_and_assemble(const RawPlan& raw, const OptimizerConfig& config, Catalog& catalog, Executor& executor,
                            OptimizedPlan& out) {
  auto start = std::chrono::steady_clock::now();
  auto& report = out.report;
  auto cls = classify_predicates(raw);

  // every column the rest of the query needs, per table
  std::set<ColumnRef> used;
  for (const auto& j : cls.joins) j.collect_columns(used);
  for (const auto& item : raw.items) {
    if (item.kind == SelectItem::Kind::Column)
      used.insert(item.column);
    else
      item.aggregate.collect_columns(used);
  }
  used.insert(raw.group_by.begin(), raw.group_by.end());

  std::map<std::string, PlanPtr> leaf;
  std::map<std::string, double> card;
  std::map<std::string, std::string> temp_of;
  std::map<std::string, PushDownDecision> decision;
  std::map<std::string, PredicateExpr> remaining = cls.selections;

  for (const auto& t : raw.tables) {
    leaf[t] = make_scan(t);
    auto& d = decision[t];
    d.table = t;
    d.base_rows = catalog.meta(t).row_count;
    d.outcome = cls.selections.count(t) ? PushDownDecision::Outcome::Disabled : PushDownDecision::Outcome::NoSelection;
  }

  if (config.pushdown_enabled) {
    std::vector<std::string> queue;
    for (const auto& t : raw.tables) {
      if (decision[t].base_rows > config.min_table_size)
        queue.push_back(t);
      else if (cls.selections.count(t))
        decision[t].outcome = PushDownDecision::Outcome::BelowMinSize;
    }
    std::sort(queue.begin(), queue.end(), [&](const std::string& a, const std::string& b) {
      auto ra = decision[a].base_rows, rb = decision[b].base_rows;
      return ra != rb ? ra > rb : a < b;
    });
    if (!queue.empty()) {
      decision[queue.front()].outcome = PushDownDecision::Outcome::Probe;
      queue.erase(queue.begin());
    }
    for (const auto& t : queue) {
      auto& d = decision[t];
      auto sel = cls.selections.find(t);
      if (sel == cls.selections.end()) {
        d.outcome = PushDownDecision::Outcome::NoSelection;
        continue;
      }
      std::set<ColumnRef> cols;
      sel->second.collect_columns(cols);
      add_columns_of(t, used, cols);
      auto compound = coalesce_nodes(sel->second, {cols.begin(), cols.end()}, make_scan(t), catalog);
      double max_size = config.max_selectivity.max_size(d.base_rows);
      d.threshold = max_size;

      auto count_start = std::chrono::steady_clock::now();
      auto est = estimate(sel->second, t, config.estimator, catalog, executor, config.synopsis, &report.stats);
      d.count_elapsed_ms = ms_since(count_start);
      d.selectivity = est.cardinality;
      bool zero_ratio = config.max_selectivity.kind == MaxSelectivity::Kind::Ratio && config.max_selectivity.value == 0;
      if (est.cardinality > max_size || zero_ratio) {
        d.outcome = PushDownDecision::Outcome::Reverted;
        continue;
      }
      auto rs = executor.execute(compound);
      report.stats.merge(rs.stats);
      auto rows = rs.row_count;
      d.temp_table = executor.add_temporary_table(std::move(rs), t, &report.stats);
      out.temp_tables.push_back(d.temp_table);
      d.outcome = PushDownDecision::Outcome::Pushed;
      leaf[t] = annotate(make_temp_scan(d.temp_table, t), static_cast<double>(rows), rows);
      card[t] = static_cast<double>(rows);
      temp_of[t] = d.temp_table;
      remaining.erase(t);
    }
  }

  // cardinalities of everything not replaced by a temp table
  for (const auto& t : raw.tables) {
    if (card.count(t)) continue;
    auto rows = static_cast<double>(decision[t].base_rows);
    auto sel = cls.selections.find(t);
    if (config.estimator != EstimatorKind::Exact && sel != cls.selections.end())
      rows = estimate(sel->second, t, config.estimator, catalog, executor, config.synopsis).cardinality;
    card[t] = rows;
    leaf[t] = annotate(leaf[t], rows, std::nullopt);
  }

  report.cardinalities = card;
  JoinGraph graph;
  graph.cardinality = card;
  for (const auto& j : cls.joins) {
    JoinEdge e{j.column, j.other};
    for (const auto* c : {&e.left, &e.right}) {
      auto it = temp_of.find(c->table);
      graph.distinct[*c] = static_cast<double>(
          catalog.distinct(it == temp_of.end() ? c->table : it->second, c->column));
    }
    bool dup = false;
    for (const auto& x : graph.edges)
      dup |= (x.left == e.left && x.right == e.right) || (x.left == e.right && x.right == e.left);
    if (!dup) graph.edges.push_back(e);
  }
  report.join_order = order_joins(graph);

  PlanPtr tree = leaf.at(report.join_order.front().relation);
  double tree_rows = card.at(report.join_order.front().relation);
  std::set<std::string> placed{report.join_order.front().relation};
  for (std::size_t k = 1; k < report.join_order.size(); ++k) {
    const auto& step = report.join_order[k];
    const auto& x = step.relation;
    std::vector<JoinKey> keys;  // probe = placed side, build = x
    for (const auto& e : graph.edges) {
      if (e.right.table == x && placed.count(e.left.table))
        keys.push_back({e.left, e.right});
      else if (e.left.table == x && placed.count(e.right.table))
        keys.push_back({e.right, e.left});
    }
    if (tree_rows >= card.at(x)) {
      tree = make_hash_join(tree, leaf.at(x), std::move(keys));
    } else {
      for (auto& key : keys) std::swap(key.probe, key.build);
      tree = make_hash_join(leaf.at(x), tree, std::move(keys));
    }
    tree = annotate(tree, step.estimated_rows, std::nullopt);
    tree_rows = step.estimated_rows;
    placed.insert(x);
  }

  if (!remaining.empty()) {
    std::vector<PredicateExpr> preds;
    for (auto& [t, p] : remaining) preds.push_back(p);
    tree = make_filter(PredicateExpr::conjunction(std::move(preds)), tree);
  }
  if (raw.has_aggregates() || !raw.group_by.empty())
    tree = make_aggregate(raw.items, raw.group_by, tree);
  else
    tree = make_project(raw.items, tree);
  if (!raw.order_by.empty()) tree = make_sort(raw.order_by, tree);
  if (raw.limit) tree = make_limit(*raw.limit, tree);

  for (const auto& t : raw.tables) report.decisions.push_back(decision[t]);
  report.elapsed_ms = ms_since(start);
  out.plan = std::move(tree);
}

}  // namespace

OptimizedPlan evaluate_and_push_down(const RawPlan& raw, const OptimizerConfig& config, Catalog& catalog,
                                     Executor& executor) {
  OptimizedPlan out;
  try {
    push_down_and_assemble(raw, config, catalog, executor, out);
  } catch (...) {
    for (const auto& t : out.temp_tables) catalog.drop(t);
    throw;
  }
  return out;
}

QueryRun run_query(std::string_view sql, const OptimizerConfig& config, Catalog& catalog) {
  auto start = std::chrono::steady_clock::now();
  auto raw = parse(sql, catalog);
  Executor executor(catalog, config.executor);
  QueryRun run;
  try {
    run.optimized = evaluate_and_push_down(raw, config, catalog, executor);
    run.optimize_ms = ms_since(start);
    auto exec_start = std::chrono::steady_clock::now();
    run.result = executor.execute(run.optimized.plan);
    run.execute_ms = ms_since(exec_start);
  } catch (...) {
    for (const auto& t : run.optimized.temp_tables) catalog.drop(t);
    throw;
  }
  for (const auto& t : run.optimized.temp_tables) catalog.drop(t);
  run.total_ms = ms_since(start);
  return run;
}

}  // namespace exactsel
