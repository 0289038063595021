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


#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "exactsel/catalog.hpp"
#include "exactsel/executor.hpp"
#include "exactsel/generator.hpp"
#include "exactsel/sql.hpp"

namespace exactsel::testing {

inline Column int_column(std::string name, std::vector<std::int64_t> v, ColumnType type = ColumnType::Int64) {
  Column c(std::move(name), type);
  c.ints = std::move(v);
  return c;
}

inline Column float_column(std::string name, std::vector<double> v) {
  Column c(std::move(name), ColumnType::Float64);
  c.floats = std::move(v);
  return c;
}

inline Column text_column(std::string name, const std::vector<std::string>& v) {
  Column c(std::move(name), ColumnType::Text);
  auto dict = std::make_shared<Dictionary>();
  for (const auto& s : v) c.ints.push_back(dict->intern(s));
  c.dictionary = dict;
  return c;
}

// Three tables chained by foreign keys: ta.a_fk -> tb.b_key, tb.b_fk -> tc.c_key.
// Every table has an int, a float (cents), a text and a date attribute with
// small domains so random predicates hit.
inline Database random_database(Rng& rng, std::size_t na, std::size_t nb, std::size_t nc) {
  static const std::vector<std::string> words = {"red", "green", "blue", "gray"};
  auto make = [&](const std::string& p, std::size_t n, std::size_t fk_range) {
    std::vector<std::int64_t> key(n), fk(n), iv(n), dv(n);
    std::vector<double> fv(n);
    std::vector<std::string> tv(n);
    for (std::size_t i = 0; i < n; ++i) {
      key[i] = static_cast<std::int64_t>(i);
      fk[i] = fk_range ? static_cast<std::int64_t>(rng.below(fk_range + 2)) : 0;  // some dangle
      iv[i] = rng.between(0, 9);
      fv[i] = static_cast<double>(rng.between(0, 19) * 125) / 100.0;
      tv[i] = words[rng.below(words.size())];
      dv[i] = 9000 + rng.between(0, 30);
    }
    std::vector<Column> cols;
    cols.push_back(int_column(p + "_key", std::move(key)));
    if (fk_range) cols.push_back(int_column(p + "_fk", std::move(fk)));
    cols.push_back(int_column(p + "_int", std::move(iv)));
    cols.push_back(float_column(p + "_flt", std::move(fv)));
    cols.push_back(text_column(p + "_txt", tv));
    cols.push_back(int_column(p + "_date", std::move(dv), ColumnType::Date));
    return Table("t" + p, std::move(cols));
  };
  Database db;
  db.push_back(make("a", na, nb));
  db.push_back(make("b", nb, nc));
  db.push_back(make("c", nc, 0));
  return db;
}

inline std::string random_leaf(Rng& rng, const std::string& p) {
  static const char* ops[] = {"=", "<", ">", "<=", ">="};
  switch (rng.below(4)) {
    case 0: return fmt::format("{}_int {} {}", p, ops[rng.below(5)], rng.between(-1, 10));
    case 1: return fmt::format("{}_flt {} {:.2f}", p, ops[rng.below(5)], static_cast<double>(rng.between(0, 20) * 125) / 100.0);
    case 2: {
      static const char* words[] = {"red", "green", "blue", "gray", "pink"};
      return fmt::format("{}_txt = '{}'", p, words[rng.below(5)]);
    }
    default: {
      auto day = 9000 + rng.between(-1, 31);
      return fmt::format("{}_date {} DATE '{}'", p, ops[rng.below(5)], format_date(day));
    }
  }
}

inline std::string random_predicate(Rng& rng, const std::string& p, int depth) {
  if (depth <= 1 || rng.below(3) == 0) return random_leaf(rng, p);
  auto n = 2 + rng.below(2);
  const char* glue = rng.below(2) ? " AND " : " OR ";
  std::string s = "(";
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s += glue;
    s += random_predicate(rng, p, depth - 1);
  }
  return s + ")";
}

/// A random supported query over a prefix or suffix of the ta-tb-tc chain.
inline std::string random_query(Rng& rng) {
  std::vector<std::string> chain = {"a", "b", "c"};
  auto k = 1 + rng.below(3);
  auto first = k == 3 ? 0 : rng.below(3 - k + 1);
  std::vector<std::string> ps(chain.begin() + static_cast<std::ptrdiff_t>(first),
                              chain.begin() + static_cast<std::ptrdiff_t>(first + k));
  std::vector<std::string> conds;
  for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
    conds.push_back(fmt::format("{}_fk = {}_key", ps[i], ps[i + 1]));
    if (rng.below(6) == 0) conds.push_back(fmt::format("{}_int = {}_int", ps[i], ps[i + 1]));
  }
  for (const auto& p : ps)
    if (rng.below(10) < 7) conds.push_back(random_predicate(rng, p, 1 + static_cast<int>(rng.below(3))));

  std::string from;
  for (const auto& p : ps) from += (from.empty() ? "t" : ", t") + p;
  std::string where;
  for (const auto& c : conds) where += (where.empty() ? " WHERE " : " AND ") + c;

  const auto& g = ps[rng.below(ps.size())];
  const auto& s = ps[rng.below(ps.size())];
  switch (rng.below(4)) {
    case 0: return "SELECT COUNT(*) FROM " + from + where;
    case 1: {
      std::string cols = fmt::format("{}_int, {}_txt, {}_flt", g, s, ps.back());
      if (rng.below(2)) return "SELECT " + cols + " FROM " + from + where + fmt::format(" ORDER BY {}_int DESC", g);
      return "SELECT " + cols + " FROM " + from + where;
    }
    case 2: {
      const char* attr = rng.below(2) ? "txt" : "date";
      const char* sum = rng.below(2) ? "int" : "flt";
      return fmt::format("SELECT {0}_{1}, COUNT(*) AS n, SUM({2}_{3}) AS total FROM {4}{5} GROUP BY {0}_{1} "
                         "ORDER BY total DESC",
                         g, attr, s, sum, from, where);
    }
    default: return fmt::format("SELECT SUM({}_flt - {}_flt), COUNT(*) FROM {}{}", s, g, from, where);
  }
}

/// Typed cell used to compare result sets independently of the engine.
struct Cell {
  enum Kind { Int, Real, Text } kind = Int;
  std::int64_t i = 0;
  long double d = 0;
  std::string s;

  std::string canonical() const {
    switch (kind) {
      case Int: return std::to_string(i);
      case Real: return fmt::format("{:.9g}", static_cast<double>(d));
      default: return s;
    }
  }
};

inline Cell cell_of(const Column& c, std::size_t row) {
  Cell x;
  if (c.type == ColumnType::Float64) {
    x.kind = Cell::Real;
    x.d = c.floats[row];
  } else if (c.type == ColumnType::Text) {
    x.kind = Cell::Text;
    x.s = c.dictionary->value(c.ints[row]);
  } else {
    x.i = c.ints[row];
  }
  return x;
}

inline std::vector<std::string> canonical_rows(const ResultSet& rs) {
  std::vector<std::string> out;
  for (std::size_t r = 0; r < rs.row_count; ++r) {
    std::string line;
    for (const auto& c : rs.columns) line += cell_of(c, r).canonical() + "|";
    out.push_back(std::move(line));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Nested loops over the FROM list, row-at-a-time predicate checks, map-based
/// grouping. Returns canonical rows, sorted.
class ReferenceInterpreter {
 public:
  explicit ReferenceInterpreter(const Catalog& catalog) : catalog_(catalog) {}

  std::vector<std::string> run(const RawPlan& plan) {
    tables_.clear();
    for (const auto& t : plan.tables) tables_.push_back(catalog_.table(t));
    std::vector<std::vector<PredicateExpr>> at_level(tables_.size());
    if (plan.where)
      for (auto& c : conjuncts(*plan.where)) {
        std::size_t level = 0;
        for (const auto& t : c.tables()) level = std::max(level, index_of(plan, t));
        at_level[level].push_back(std::move(c));
      }
    rows_.assign(tables_.size(), 0);
    groups_.clear();
    plain_.clear();
    plan_ = &plan;
    aggregate_ = plan.has_aggregates() || !plan.group_by.empty();
    walk(0, at_level);

    std::vector<std::string> out;
    if (aggregate_) {
      if (groups_.empty() && plan.group_by.empty()) groups_[""] = empty_group();
      for (const auto& [key, g] : groups_) {
        std::string line;
        for (std::size_t i = 0; i < plan.items.size(); ++i) line += g.cells[i].canonical() + "|";
        out.push_back(std::move(line));
      }
    } else {
      out = plain_;
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  struct Group {
    std::vector<Cell> cells;
  };

  std::size_t index_of(const RawPlan& plan, const std::string& t) const {
    for (std::size_t i = 0; i < plan.tables.size(); ++i)
      if (plan.tables[i] == t) return i;
    throw Error("oracle: unknown table " + t);
  }

  const Column& col(const ColumnRef& ref, std::size_t& row) const {
    auto i = index_of(*plan_, ref.table);
    row = rows_[i];
    return tables_[i]->column(ref.column);
  }

  Cell value(const ColumnRef& ref) const {
    std::size_t row = 0;
    const auto& c = col(ref, row);
    return cell_of(c, row);
  }

  long double number(const ColumnRef& ref) const {
    std::size_t row = 0;
    const auto& c = col(ref, row);
    return c.type == ColumnType::Float64 ? static_cast<long double>(c.floats[row])
                                         : static_cast<long double>(c.ints[row]);
  }

  bool eval(const PredicateExpr& p) const {
    switch (p.kind) {
      case PredicateExpr::Kind::And:
        return std::all_of(p.children.begin(), p.children.end(), [&](const auto& c) { return eval(c); });
      case PredicateExpr::Kind::Or:
        return std::any_of(p.children.begin(), p.children.end(), [&](const auto& c) { return eval(c); });
      case PredicateExpr::Kind::ColumnEq: return number(p.column) == number(p.other);
      case PredicateExpr::Kind::Compare: {
        std::size_t row = 0;
        const auto& c = col(p.column, row);
        if (c.type == ColumnType::Text) {
          // compare strings, not codes
          if (p.literal.int_value < 0) return false;
          return c.dictionary->value(c.ints[row]) == p.literal.text;
        }
        long double v = number(p.column);
        long double lit = p.literal.type == ColumnType::Float64 ? static_cast<long double>(p.literal.float_value)
                                                                : static_cast<long double>(p.literal.int_value);
        switch (p.op) {
          case CompareOp::Eq: return v == lit;
          case CompareOp::Lt: return v < lit;
          case CompareOp::Gt: return v > lit;
          case CompareOp::Le: return v <= lit;
          case CompareOp::Ge: return v >= lit;
        }
      }
    }
    return false;
  }

  bool integral(const AggregateExpr& a) const {
    std::size_t row = 0;
    bool ok = col(a.a, row).type == ColumnType::Int64;
    if (a.form != AggregateExpr::Form::Column) ok = ok && col(a.b, row).type == ColumnType::Int64;
    return ok;
  }

  Group empty_group() const {
    Group g;
    for (const auto& item : plan_->items) {
      Cell c;
      if (item.aggregate.func == AggregateExpr::Func::Sum) {
        const auto& t = catalog_.table(item.aggregate.a.table)->column(item.aggregate.a.column);
        bool ints = t.type == ColumnType::Int64;
        if (item.aggregate.form != AggregateExpr::Form::Column)
          ints = ints && catalog_.table(item.aggregate.b.table)->column(item.aggregate.b.column).type ==
                             ColumnType::Int64;
        if (!ints) c.kind = Cell::Real;
      }
      g.cells.push_back(c);
    }
    return g;
  }

  void emit() {
    if (!aggregate_) {
      std::string line;
      for (const auto& item : plan_->items) line += value(item.column).canonical() + "|";
      plain_.push_back(std::move(line));
      return;
    }
    std::string key;
    for (const auto& g : plan_->group_by) key += value(g).canonical() + "\x1f";
    auto [it, fresh] = groups_.try_emplace(key);
    auto& cells = it->second.cells;
    if (fresh) cells.resize(plan_->items.size());
    for (std::size_t i = 0; i < plan_->items.size(); ++i) {
      const auto& item = plan_->items[i];
      auto& c = cells[i];
      if (item.kind == SelectItem::Kind::Column) {
        c = value(item.column);
        continue;
      }
      const auto& a = item.aggregate;
      if (a.func == AggregateExpr::Func::CountStar) {
        c.kind = Cell::Int;
        ++c.i;
        continue;
      }
      long double x = number(a.a);
      if (a.form == AggregateExpr::Form::Difference) x -= number(a.b);
      if (a.form == AggregateExpr::Form::Discounted) x *= 1 - number(a.b);
      if (integral(a)) {
        c.kind = Cell::Int;
        c.i += static_cast<std::int64_t>(x);
      } else {
        c.kind = Cell::Real;
        c.d += x;
      }
    }
  }

  void walk(std::size_t level, const std::vector<std::vector<PredicateExpr>>& at_level) {
    if (level == tables_.size()) {
      emit();
      return;
    }
    for (std::size_t r = 0; r < tables_[level]->row_count(); ++r) {
      rows_[level] = r;
      bool ok = true;
      for (const auto& p : at_level[level])
        if (!eval(p)) {
          ok = false;
          break;
        }
      if (ok) walk(level + 1, at_level);
    }
  }

  const Catalog& catalog_;
  const RawPlan* plan_ = nullptr;
  bool aggregate_ = false;
  std::vector<std::shared_ptr<const Table>> tables_;
  std::vector<std::size_t> rows_;
  std::map<std::string, Group> groups_;
  std::vector<std::string> plain_;
};

}  // namespace exactsel::testing
