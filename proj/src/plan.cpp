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


#include "exactsel/plan.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "exactsel/catalog.hpp"

namespace exactsel {

void AggregateExpr::collect_columns(std::set<ColumnRef>& out) const {
  if (func == Func::CountStar) return;
  out.insert(a);
  if (form != Form::Column) out.insert(b);
}

std::string AggregateExpr::to_sql() const {
  if (func == Func::CountStar) return "COUNT(*)";
  switch (form) {
    case Form::Column: return fmt::format("SUM({})", a.qualified());
    case Form::Difference: return fmt::format("SUM({} - {})", a.qualified(), b.qualified());
    case Form::Discounted: return fmt::format("SUM({} * (1 - {}))", a.qualified(), b.qualified());
  }
  return {};
}

std::string SelectItem::output_name() const {
  if (!alias.empty()) return alias;
  if (kind == Kind::Column) return column.column;
  return aggregate.func == AggregateExpr::Func::CountStar ? "count" : "sum";
}

std::string SelectItem::to_sql() const {
  std::string s = kind == Kind::Column ? column.qualified() : aggregate.to_sql();
  if (!alias.empty()) s += " AS " + alias;
  return s;
}

std::string_view to_string(PlanKind kind) {
  switch (kind) {
    case PlanKind::Scan: return "Scan";
    case PlanKind::TempScan: return "TempScan";
    case PlanKind::Filter: return "Filter";
    case PlanKind::Project: return "Project";
    case PlanKind::HashJoin: return "HashJoin";
    case PlanKind::Aggregate: return "Aggregate";
    case PlanKind::Compound: return "Compound";
    case PlanKind::Sort: return "Sort";
    case PlanKind::Limit: return "Limit";
  }
  return "?";
}

namespace {

PlanPtr node_with(PlanNode n) { return std::make_shared<const PlanNode>(std::move(n)); }

PlanNode unary(PlanKind kind, PlanPtr input) {
  PlanNode n;
  n.kind = kind;
  n.children.push_back(std::move(input));
  return n;
}

}  // namespace

PlanPtr make_scan(std::string table) {
  PlanNode n;
  n.kind = PlanKind::Scan;
  n.alias = table;
  n.table = std::move(table);
  return node_with(std::move(n));
}

PlanPtr make_temp_scan(std::string temp_table, std::string alias) {
  PlanNode n;
  n.kind = PlanKind::TempScan;
  n.table = std::move(temp_table);
  n.alias = std::move(alias);
  return node_with(std::move(n));
}

PlanPtr make_filter(PredicateExpr predicate, PlanPtr input) {
  auto n = unary(PlanKind::Filter, std::move(input));
  n.predicate = std::move(predicate);
  return node_with(std::move(n));
}

PlanPtr make_project(std::vector<SelectItem> items, PlanPtr input) {
  auto n = unary(PlanKind::Project, std::move(input));
  n.items = std::move(items);
  return node_with(std::move(n));
}

PlanPtr make_hash_join(PlanPtr probe, PlanPtr build, std::vector<JoinKey> keys) {
  if (keys.empty()) throw UnsupportedQuery("hash join without an equality predicate");
  PlanNode n;
  n.kind = PlanKind::HashJoin;
  n.children = {std::move(probe), std::move(build)};
  n.join_keys = std::move(keys);
  return node_with(std::move(n));
}

PlanPtr make_aggregate(std::vector<SelectItem> items, std::vector<ColumnRef> group_by, PlanPtr input) {
  auto n = unary(PlanKind::Aggregate, std::move(input));
  n.items = std::move(items);
  n.group_by = std::move(group_by);
  return node_with(std::move(n));
}

PlanPtr make_sort(std::vector<SortKey> keys, PlanPtr input) {
  auto n = unary(PlanKind::Sort, std::move(input));
  n.sort_keys = std::move(keys);
  return node_with(std::move(n));
}

PlanPtr make_limit(std::size_t limit, PlanPtr input) {
  auto n = unary(PlanKind::Limit, std::move(input));
  n.limit = limit;
  return node_with(std::move(n));
}

PlanPtr annotate(const PlanPtr& node, std::optional<double> estimated, std::optional<std::uint64_t> exact) {
  PlanNode n = *node;
  n.estimated_rows = estimated;
  n.exact_rows = exact;
  return node_with(std::move(n));
}

std::vector<ColumnRef> output_columns(const PlanNode& node, const Catalog& catalog) {
  switch (node.kind) {
    case PlanKind::Scan:
    case PlanKind::TempScan: {
      std::vector<ColumnRef> out;
      for (const auto& c : catalog.table(node.table)->columns()) out.push_back({node.alias, c.name});
      return out;
    }
    case PlanKind::Filter:
    case PlanKind::Sort:
    case PlanKind::Limit: return output_columns(node.child(), catalog);
    case PlanKind::Compound: return node.columns;
    case PlanKind::Project:
    case PlanKind::Aggregate: {
      std::vector<ColumnRef> out;
      for (const auto& item : node.items) {
        if (item.kind == SelectItem::Kind::Column && item.alias.empty())
          out.push_back(item.column);
        else
          out.push_back({"", item.output_name()});
      }
      return out;
    }
    case PlanKind::HashJoin: {
      auto out = output_columns(node.child(0), catalog);
      auto right = output_columns(node.child(1), catalog);
      out.insert(out.end(), right.begin(), right.end());
      return out;
    }
  }
  return {};
}

std::set<std::string> leaf_aliases(const PlanNode& node) {
  if (node.kind == PlanKind::Scan || node.kind == PlanKind::TempScan) return {node.alias};
  std::set<std::string> out;
  for (const auto& c : node.children) out.merge(leaf_aliases(*c));
  return out;
}

PlanPtr coalesce_nodes(std::optional<PredicateExpr> predicate, std::vector<ColumnRef> columns, PlanPtr input,
                       const Catalog& catalog, std::optional<std::uint64_t> count_cap) {
  if (columns.empty()) throw CatalogError("compound needs at least one output column");
  auto available = output_columns(*input, catalog);
  std::set<ColumnRef> have(available.begin(), available.end());
  std::set<ColumnRef> needed(columns.begin(), columns.end());
  if (predicate) predicate->collect_columns(needed);
  for (const auto& c : needed)
    if (!have.contains(c)) throw CatalogError(fmt::format("column {} is not available below the compound", c.qualified()));
  auto n = unary(PlanKind::Compound, std::move(input));
  n.predicate = std::move(predicate);
  n.columns = std::move(columns);
  n.count_cap = count_cap;
  return node_with(std::move(n));
}

PlanPtr attach_count(PlanPtr node) {
  return make_aggregate({SelectItem::of_aggregate(AggregateExpr::count_star())}, {}, std::move(node));
}

PlanPtr update_tree(const PlanPtr& tree, const std::string& alias, const std::string& temp_table,
                    const std::vector<PredicateExpr>& removed) {
  if (tree->kind == PlanKind::Scan && tree->alias == alias) return make_temp_scan(temp_table, alias);
  if (tree->children.empty()) return tree;
  PlanNode n = *tree;
  for (auto& c : n.children) c = update_tree(c, alias, temp_table, removed);
  if (n.kind == PlanKind::Filter) {
    std::vector<PredicateExpr> kept;
    for (auto& c : conjuncts(*n.predicate))
      if (std::find(removed.begin(), removed.end(), c) == removed.end()) kept.push_back(std::move(c));
    if (kept.empty()) return n.children.front();
    n.predicate = PredicateExpr::conjunction(std::move(kept));
  }
  return node_with(std::move(n));
}

bool same_structure(const PlanNode& a, const PlanNode& b) {
  if (a.kind != b.kind || a.table != b.table || a.alias != b.alias || a.predicate != b.predicate ||
      a.columns != b.columns || a.items != b.items || a.group_by != b.group_by || a.join_keys != b.join_keys ||
      a.sort_keys != b.sort_keys || a.limit != b.limit || a.count_cap != b.count_cap ||
      a.children.size() != b.children.size())
    return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!same_structure(*a.children[i], *b.children[i])) return false;
  return true;
}

namespace {

std::string join_names(const std::vector<ColumnRef>& cols) {
  std::string s;
  for (std::size_t i = 0; i < cols.size(); ++i) s += (i ? ", " : "") + cols[i].qualified();
  return s;
}

std::string label(const PlanNode& n) {
  switch (n.kind) {
    case PlanKind::Scan: return fmt::format("Scan({})", n.table);
    case PlanKind::TempScan: return fmt::format("TempScan({} AS {})", n.table, n.alias);
    case PlanKind::Filter: return fmt::format("Filter({})", n.predicate->to_sql());
    case PlanKind::Project:
    case PlanKind::Aggregate: {
      std::string items;
      for (std::size_t i = 0; i < n.items.size(); ++i) items += (i ? ", " : "") + n.items[i].to_sql();
      if (n.kind == PlanKind::Project) return fmt::format("Project({})", items);
      if (n.group_by.empty()) return fmt::format("Aggregate({})", items);
      return fmt::format("Aggregate({}; group by {})", items, join_names(n.group_by));
    }
    case PlanKind::HashJoin: {
      std::string keys;
      for (std::size_t i = 0; i < n.join_keys.size(); ++i)
        keys += fmt::format("{}{} = {}", i ? ", " : "", n.join_keys[i].probe.qualified(),
                            n.join_keys[i].build.qualified());
      return fmt::format("HashJoin({})", keys);
    }
    case PlanKind::Compound: {
      std::string s = fmt::format("Compound({}; {}", n.predicate ? n.predicate->to_sql() : "TRUE", join_names(n.columns));
      if (n.count_cap) s += fmt::format("; cap {}", *n.count_cap);
      return s + ")";
    }
    case PlanKind::Sort: {
      std::string keys;
      for (std::size_t i = 0; i < n.sort_keys.size(); ++i)
        keys += fmt::format("{}#{}{}", i ? ", " : "", n.sort_keys[i].index, n.sort_keys[i].descending ? " DESC" : "");
      return fmt::format("Sort({})", keys);
    }
    case PlanKind::Limit: return fmt::format("Limit({})", n.limit);
  }
  return "?";
}

void render(const PlanNode& n, std::size_t depth, std::string& out) {
  out.append(depth * 2, ' ');
  out += label(n);
  if (n.estimated_rows) out += fmt::format(" est={:.1f}", *n.estimated_rows);
  if (n.exact_rows) out += fmt::format(" rows={}", *n.exact_rows);
  out += '\n';
  for (const auto& c : n.children) render(*c, depth + 1, out);
}

}  // namespace

std::string explain(const PlanNode& node) {
  std::string out;
  render(node, 0, out);
  return out;
}

}  // namespace exactsel
