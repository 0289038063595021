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

#include "exactsel/predicate.hpp"

#include <algorithm>
#include <charconv>

namespace exactsel {

std::string_view to_string(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Lt: return "<";
    case CompareOp::Gt: return ">";
    case CompareOp::Le: return "<=";
    case CompareOp::Ge: return ">=";
  }
  return "?";
}

CompareOp flip(CompareOp op) {
  switch (op) {
    case CompareOp::Lt: return CompareOp::Gt;
    case CompareOp::Gt: return CompareOp::Lt;
    case CompareOp::Le: return CompareOp::Ge;
    case CompareOp::Ge: return CompareOp::Le;
    case CompareOp::Eq: return CompareOp::Eq;
  }
  return op;
}

std::string Literal::to_sql() const {
  switch (type) {
    case ColumnType::Int64: return std::to_string(int_value);
    case ColumnType::Date: return "DATE '" + format_date(int_value) + "'";
    case ColumnType::Text: return "'" + text + "'";
    case ColumnType::Float64: {
      char buf[64];
      auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), float_value);
      std::string s(buf, p);
      // keep it lexically a decimal so it reparses as a float literal
      if (s.find_first_of(".eE") == std::string::npos) s += ".0";
      return s;
    }
  }
  return {};
}

PredicateExpr PredicateExpr::compare(ColumnRef column, CompareOp op, Literal literal) {
  PredicateExpr e;
  e.kind = Kind::Compare;
  e.column = std::move(column);
  e.op = op;
  e.literal = std::move(literal);
  return e;
}

PredicateExpr PredicateExpr::column_eq(ColumnRef left, ColumnRef right) {
  PredicateExpr e;
  e.kind = Kind::ColumnEq;
  e.column = std::move(left);
  e.other = std::move(right);
  return e;
}

PredicateExpr PredicateExpr::conjunction(std::vector<PredicateExpr> children) {
  std::vector<PredicateExpr> flat;
  for (auto& c : children) {
    if (c.kind == Kind::And)
      for (auto& g : c.children) flat.push_back(std::move(g));
    else
      flat.push_back(std::move(c));
  }
  if (flat.size() == 1) return std::move(flat.front());
  PredicateExpr e;
  e.kind = Kind::And;
  e.children = std::move(flat);
  return e;
}

PredicateExpr PredicateExpr::disjunction(std::vector<PredicateExpr> children) {
  std::vector<PredicateExpr> flat;
  for (auto& c : children) {
    if (c.kind == Kind::Or)
      for (auto& g : c.children) flat.push_back(std::move(g));
    else
      flat.push_back(std::move(c));
  }
  if (flat.size() == 1) return std::move(flat.front());
  PredicateExpr e;
  e.kind = Kind::Or;
  e.children = std::move(flat);
  return e;
}

std::set<std::string> PredicateExpr::tables() const {
  std::set<ColumnRef> cols;
  collect_columns(cols);
  std::set<std::string> out;
  for (const auto& c : cols) out.insert(c.table);
  return out;
}

void PredicateExpr::collect_columns(std::set<ColumnRef>& out) const {
  switch (kind) {
    case Kind::Compare: out.insert(column); break;
    case Kind::ColumnEq:
      out.insert(column);
      out.insert(other);
      break;
    default:
      for (const auto& c : children) c.collect_columns(out);
  }
}

std::size_t PredicateExpr::depth() const {
  if (is_leaf()) return 1;
  std::size_t d = 0;
  for (const auto& c : children) d = std::max(d, c.depth());
  return d + 1;
}

std::string PredicateExpr::to_sql() const {
  switch (kind) {
    case Kind::Compare:
      return column.qualified() + " " + std::string(exactsel::to_string(op)) + " " + literal.to_sql();
    case Kind::ColumnEq: return column.qualified() + " = " + other.qualified();
    case Kind::And:
    case Kind::Or: {
      std::string sep = kind == Kind::And ? " AND " : " OR ";
      std::string out = "(";
      for (std::size_t i = 0; i < children.size(); ++i) {
        if (i) out += sep;
        out += children[i].to_sql();
      }
      return out + ")";
    }
  }
  return {};
}

std::vector<PredicateExpr> conjuncts(const PredicateExpr& expr) {
  if (expr.kind == PredicateExpr::Kind::And) return expr.children;
  return {expr};
}

}  // namespace exactsel
