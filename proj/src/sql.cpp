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


#include "exactsel/sql.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include <fmt/format.h>

#include "exactsel/catalog.hpp"

namespace exactsel {

bool RawPlan::has_aggregates() const {
  return std::any_of(items.begin(), items.end(),
                     [](const SelectItem& i) { return i.kind == SelectItem::Kind::Aggregate; });
}

std::string RawPlan::to_sql() const {
  std::string s = "SELECT ";
  for (std::size_t i = 0; i < items.size(); ++i) s += (i ? ", " : "") + items[i].to_sql();
  s += " FROM ";
  for (std::size_t i = 0; i < tables.size(); ++i) s += (i ? ", " : "") + tables[i];
  if (where) s += " WHERE " + where->to_sql();
  if (!group_by.empty()) {
    s += " GROUP BY ";
    for (std::size_t i = 0; i < group_by.size(); ++i) s += (i ? ", " : "") + group_by[i].qualified();
  }
  if (!order_by.empty()) {
    s += " ORDER BY ";
    for (std::size_t i = 0; i < order_by.size(); ++i) {
      const auto& item = items.at(order_by[i].index);
      s += i ? ", " : "";
      s += item.alias.empty() ? item.column.qualified() : item.alias;
      s += order_by[i].descending ? " DESC" : " ASC";
    }
  }
  if (limit) s += fmt::format(" LIMIT {}", *limit);
  return s;
}

namespace {

enum class Tok { Ident, Number, String, Symbol, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t col = 1;
};

std::vector<Token> lex(std::string_view sql) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (sql[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < sql.size()) {
    char c = sql[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < sql.size() && sql[i + 1] == '-') {  // comment to end of line
      while (i < sql.size() && sql[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < sql.size() && (std::isalnum(static_cast<unsigned char>(sql[j])) || sql[j] == '_')) ++j;
      t.kind = Tok::Ident;
      t.text = sql.substr(i, j - i);
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && i + 1 < sql.size() && std::isdigit(static_cast<unsigned char>(sql[i + 1])))) {
      std::size_t j = i;
      while (j < sql.size() && std::isdigit(static_cast<unsigned char>(sql[j]))) ++j;
      if (j < sql.size() && sql[j] == '.') {
        ++j;
        while (j < sql.size() && std::isdigit(static_cast<unsigned char>(sql[j]))) ++j;
      }
      if (j < sql.size() && (sql[j] == 'e' || sql[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < sql.size() && (sql[k] == '+' || sql[k] == '-')) ++k;
        if (k < sql.size() && std::isdigit(static_cast<unsigned char>(sql[k]))) {
          j = k;
          while (j < sql.size() && std::isdigit(static_cast<unsigned char>(sql[j]))) ++j;
        }
      }
      t.kind = Tok::Number;
      t.text = sql.substr(i, j - i);
      advance(j - i);
    } else if (c == '\'') {
      std::string s;
      std::size_t j = i + 1;
      for (;;) {
        if (j >= sql.size()) throw ParseError("unterminated string literal", t.line, t.col);
        if (sql[j] == '\'') {
          if (j + 1 < sql.size() && sql[j + 1] == '\'') {
            s += '\'';
            j += 2;
            continue;
          }
          break;
        }
        s += sql[j++];
      }
      t.kind = Tok::String;
      t.text = std::move(s);
      advance(j + 1 - i);
    } else {
      static constexpr std::string_view two[] = {"<=", ">=", "<>", "!="};
      t.kind = Tok::Symbol;
      for (auto s : two)
        if (sql.substr(i, 2) == s) t.text = s;
      if (t.text.empty()) {
        if (std::string_view("(),.*=<>;-+").find(c) == std::string_view::npos)
          throw ParseError(fmt::format("unexpected character '{}'", c), t.line, t.col);
        t.text = std::string(1, c);
      }
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

std::string upper(std::string_view s) {
  std::string u(s);
  for (auto& ch : u) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return u;
}

bool is_reserved(std::string_view word) {
  static const std::set<std::string, std::less<>> kw{"SELECT", "FROM",  "WHERE", "AND", "OR",  "GROUP", "BY",
                                                     "ORDER",  "ASC",   "DESC",  "LIMIT", "AS", "COUNT", "SUM",
                                                     "DATE",   "INTERVAL"};
  return kw.contains(upper(word));
}

struct Resolved {
  ColumnRef ref;
  ColumnType type;
  const Column* column;
};

struct Operand {
  bool is_column = false;
  Resolved column;
  Token token;       // literal token (first token of the literal)
  Tok literal_kind;  // Number, String, or Ident for DATE '...'
  std::string text;  // number text with sign, string contents, or date text
};

class Parser {
 public:
  Parser(std::string_view sql, const Catalog& catalog) : toks_(lex(sql)), catalog_(catalog) {}

  RawPlan run() {
    RawPlan plan;
    expect_keyword("SELECT");
    // Columns in the SELECT list are resolved after FROM is known, so remember
    // where each item starts and re-parse it then.
    std::vector<std::size_t> item_starts;
    item_starts.push_back(pos_);
    skip_select_item();
    while (accept_symbol(",")) {
      item_starts.push_back(pos_);
      skip_select_item();
    }
    expect_keyword("FROM");
    do {
      const auto& t = peek();
      if (t.kind != Tok::Ident || is_reserved(t.text)) fail("expected table name", t);
      if (!catalog_.contains(t.text)) fail(fmt::format("unknown table {}", t.text), t);
      if (std::find(plan.tables.begin(), plan.tables.end(), t.text) != plan.tables.end())
        fail(fmt::format("table {} listed twice", t.text), t);
      plan.tables.push_back(t.text);
      ++pos_;
    } while (accept_symbol(","));
    tables_ = plan.tables;
    std::size_t after_from = pos_;
    for (auto start : item_starts) {
      pos_ = start;
      plan.items.push_back(select_item());
    }
    pos_ = after_from;
    if (accept_keyword("WHERE")) plan.where = or_expr();
    if (accept_keyword("GROUP")) {
      expect_keyword("BY");
      do plan.group_by.push_back(column().ref);
      while (accept_symbol(","));
    }
    if (accept_keyword("ORDER")) {
      expect_keyword("BY");
      do plan.order_by.push_back(order_key(plan.items));
      while (accept_symbol(","));
    }
    if (accept_keyword("LIMIT")) {
      const auto& t = peek();
      std::size_t n = 0;
      auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), n);
      if (t.kind != Tok::Number || ec != std::errc() || p != t.text.data() + t.text.size())
        fail("LIMIT needs a non-negative integer", t);
      plan.limit = n;
      ++pos_;
    }
    accept_symbol(";");
    if (peek().kind != Tok::End) fail(fmt::format("unexpected '{}'", peek().text), peek());
    validate(plan);
    return plan;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, const Token& t) const { throw ParseError(msg, t.line, t.col); }

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }

  bool is_keyword(const Token& t, std::string_view kw) const { return t.kind == Tok::Ident && upper(t.text) == kw; }

  bool accept_keyword(std::string_view kw) {
    if (!is_keyword(peek(), kw)) return false;
    ++pos_;
    return true;
  }
  void expect_keyword(std::string_view kw) {
    if (!accept_keyword(kw)) fail(fmt::format("expected {}", kw), peek());
  }
  bool accept_symbol(std::string_view s) {
    if (peek().kind != Tok::Symbol || peek().text != s) return false;
    ++pos_;
    return true;
  }
  void expect_symbol(std::string_view s) {
    if (!accept_symbol(s)) fail(fmt::format("expected '{}'", s), peek());
  }

  // Skips one SELECT item up to the next top-level ',' or FROM.
  void skip_select_item() {
    int depth = 0;
    std::size_t start = pos_;
    while (peek().kind != Tok::End) {
      const auto& t = peek();
      if (depth == 0 && (is_keyword(t, "FROM") || (t.kind == Tok::Symbol && t.text == ","))) break;
      if (t.kind == Tok::Symbol && t.text == "(") ++depth;
      if (t.kind == Tok::Symbol && t.text == ")") --depth;
      ++pos_;
    }
    if (pos_ == start) fail("expected a select item", peek());
    if (peek().kind == Tok::End) fail("expected FROM", peek());
  }

  Resolved column() {
    const auto& t = peek();
    if (t.kind != Tok::Ident || is_reserved(t.text)) fail("expected column name", t);
    ++pos_;
    std::string table, name = t.text;
    if (accept_symbol(".")) {
      const auto& c = peek();
      if (c.kind != Tok::Ident) fail("expected column name after '.'", c);
      table = name;
      name = c.text;
      ++pos_;
      if (std::find(tables_.begin(), tables_.end(), table) == tables_.end())
        fail(fmt::format("table {} is not in the FROM list", table), t);
    }
    std::vector<std::string> hits;
    for (const auto& tn : tables_) {
      if (!table.empty() && tn != table) continue;
      if (catalog_.table(tn)->find_column(name)) hits.push_back(tn);
    }
    if (hits.empty()) fail(fmt::format("unknown column {}", table.empty() ? name : table + "." + name), t);
    if (hits.size() > 1) fail(fmt::format("column {} is ambiguous", name), t);
    const auto& col = catalog_.table(hits.front())->column(name);
    return {{hits.front(), name}, col.type, &col};
  }

  SelectItem select_item() {
    SelectItem item;
    const auto& t = peek();
    if (is_keyword(t, "COUNT")) {
      ++pos_;
      expect_symbol("(");
      expect_symbol("*");
      expect_symbol(")");
      item = SelectItem::of_aggregate(AggregateExpr::count_star());
    } else if (is_keyword(t, "SUM")) {
      ++pos_;
      expect_symbol("(");
      auto a = summand();
      if (accept_symbol("-")) {
        auto b = summand();
        item = SelectItem::of_aggregate(AggregateExpr::sum_difference(a.ref, b.ref));
      } else if (accept_symbol("*")) {
        expect_symbol("(");
        const auto& one = peek();
        if (one.kind != Tok::Number || (one.text != "1" && one.text != "1.0")) fail("expected 1 in (1 - column)", one);
        ++pos_;
        expect_symbol("-");
        auto b = summand();
        expect_symbol(")");
        item = SelectItem::of_aggregate(AggregateExpr::sum_discounted(a.ref, b.ref));
      } else {
        item = SelectItem::of_aggregate(AggregateExpr::sum(a.ref));
      }
      expect_symbol(")");
    } else {
      item = SelectItem::of_column(column().ref);
    }
    if (accept_keyword("AS")) {
      const auto& a = peek();
      if (a.kind != Tok::Ident || is_reserved(a.text)) fail("expected alias", a);
      item.alias = a.text;
      ++pos_;
    }
    if (!(peek().kind == Tok::Symbol && peek().text == ",") && !is_keyword(peek(), "FROM"))
      fail(fmt::format("unexpected '{}' in select list", peek().text), peek());
    return item;
  }

  Resolved summand() {
    const auto& t = peek();
    auto r = column();
    if (r.type != ColumnType::Int64 && r.type != ColumnType::Float64)
      fail(fmt::format("SUM needs a numeric column, {} is {}", r.ref.qualified(), to_string(r.type)), t);
    return r;
  }

  SortKey order_key(const std::vector<SelectItem>& items) {
    const auto& t = peek();
    if (t.kind != Tok::Ident || is_reserved(t.text)) fail("expected output column name", t);
    ++pos_;
    std::string table, name = t.text;
    if (accept_symbol(".")) {
      table = name;
      name = peek().text;
      ++pos_;
    }
    std::optional<std::size_t> index;
    if (table.empty())
      for (std::size_t i = 0; i < items.size() && !index; ++i)
        if (items[i].alias == name) index = i;
    for (std::size_t i = 0; i < items.size() && !index; ++i) {
      const auto& it = items[i];
      if (it.kind == SelectItem::Kind::Column && it.column.column == name &&
          (table.empty() || it.column.table == table))
        index = i;
    }
    if (!index) fail(fmt::format("ORDER BY {} does not name an output column", name), t);
    SortKey key{*index, false};
    if (accept_keyword("DESC"))
      key.descending = true;
    else
      accept_keyword("ASC");
    return key;
  }

  PredicateExpr or_expr() {
    std::vector<PredicateExpr> parts{and_expr()};
    while (accept_keyword("OR")) parts.push_back(and_expr());
    return PredicateExpr::disjunction(std::move(parts));
  }

  PredicateExpr and_expr() {
    std::vector<PredicateExpr> parts{primary()};
    while (accept_keyword("AND")) parts.push_back(primary());
    return PredicateExpr::conjunction(std::move(parts));
  }

  PredicateExpr primary() {
    if (accept_symbol("(")) {
      auto e = or_expr();
      expect_symbol(")");
      return e;
    }
    auto lhs = operand();
    const auto& op_tok = peek();
    if (op_tok.kind != Tok::Symbol) fail("expected comparison operator", op_tok);
    CompareOp op;
    if (op_tok.text == "=")
      op = CompareOp::Eq;
    else if (op_tok.text == "<")
      op = CompareOp::Lt;
    else if (op_tok.text == ">")
      op = CompareOp::Gt;
    else if (op_tok.text == "<=")
      op = CompareOp::Le;
    else if (op_tok.text == ">=")
      op = CompareOp::Ge;
    else
      fail(fmt::format("unsupported operator '{}'", op_tok.text), op_tok);
    ++pos_;
    auto rhs = operand();
    if (lhs.is_column && rhs.is_column) {
      if (op != CompareOp::Eq)
        throw UnsupportedQuery(fmt::format("{}:{}: only equality is supported between columns ({} {} {})",
                                           op_tok.line, op_tok.col, lhs.column.ref.qualified(), op_tok.text,
                                           rhs.column.ref.qualified()));
      if (lhs.column.type != rhs.column.type)
        fail(fmt::format("type mismatch: {} is {}, {} is {}", lhs.column.ref.qualified(), to_string(lhs.column.type),
                         rhs.column.ref.qualified(), to_string(rhs.column.type)),
             op_tok);
      if (lhs.column.type == ColumnType::Text)
        fail("text columns cannot be compared with each other", op_tok);
      return PredicateExpr::column_eq(lhs.column.ref, rhs.column.ref);
    }
    if (!lhs.is_column && !rhs.is_column) fail("comparison needs a column", op_tok);
    if (!lhs.is_column) {
      std::swap(lhs, rhs);
      op = flip(op);
    }
    return PredicateExpr::compare(lhs.column.ref, op, bind(lhs.column, op, rhs));
  }

  Operand operand() {
    Operand o;
    const auto& t = peek();
    o.token = t;
    if (is_keyword(t, "DATE") && peek(1).kind == Tok::String) {
      o.literal_kind = Tok::Ident;
      o.text = peek(1).text;
      pos_ += 2;
      return o;
    }
    if (t.kind == Tok::Symbol && t.text == "-" && peek(1).kind == Tok::Number) {
      o.literal_kind = Tok::Number;
      o.text = "-" + peek(1).text;
      pos_ += 2;
      return o;
    }
    if (t.kind == Tok::Number || t.kind == Tok::String) {
      o.literal_kind = t.kind;
      o.text = t.text;
      ++pos_;
      return o;
    }
    o.is_column = true;
    o.column = column();
    return o;
  }

  Literal bind(const Resolved& col, CompareOp op, const Operand& lit) {
    const auto& at = lit.token;
    auto mismatch = [&](std::string_view what) {
      fail(fmt::format("type mismatch: {} is {} but the literal is {}", col.ref.qualified(), to_string(col.type), what),
           at);
    };
    std::string_view kind_name = lit.literal_kind == Tok::Number ? "a number"
                                 : lit.literal_kind == Tok::String ? "a string"
                                                                   : "a date";
    switch (col.type) {
      case ColumnType::Int64: {
        if (lit.literal_kind != Tok::Number) mismatch(kind_name);
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(lit.text.data(), lit.text.data() + lit.text.size(), v);
        if (ec != std::errc() || p != lit.text.data() + lit.text.size()) mismatch("not an integer");
        return Literal::integer(v);
      }
      case ColumnType::Float64: {
        if (lit.literal_kind != Tok::Number) mismatch(kind_name);
        double v = 0;
        auto [p, ec] = std::from_chars(lit.text.data(), lit.text.data() + lit.text.size(), v);
        if (ec != std::errc() || p != lit.text.data() + lit.text.size()) fail("malformed number", at);
        return Literal::real(v);
      }
      case ColumnType::Date: {
        if (lit.literal_kind != Tok::Ident) mismatch(kind_name);
        try {
          return Literal::date(parse_date(lit.text));
        } catch (const Error& e) {
          fail(e.what(), at);
        }
      }
      case ColumnType::Text: {
        if (lit.literal_kind != Tok::String) mismatch(kind_name);
        if (op != CompareOp::Eq) fail("text columns only support '='", at);
        auto code = col.column->dictionary ? col.column->dictionary->find(lit.text) : std::nullopt;
        return Literal::string(lit.text, code.value_or(-1));
      }
    }
    fail("unsupported column type", at);
  }

  void validate(const RawPlan& plan) const {
    if (!plan.has_aggregates() && plan.group_by.empty()) return;
    for (const auto& item : plan.items) {
      if (item.kind != SelectItem::Kind::Column) continue;
      if (std::find(plan.group_by.begin(), plan.group_by.end(), item.column) == plan.group_by.end())
        throw ParseError(fmt::format("{} must appear in GROUP BY", item.column.qualified()), 1, 1);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Catalog& catalog_;
  std::vector<std::string> tables_;
};

}  // namespace

RawPlan parse(std::string_view sql, const Catalog& catalog) { return Parser(sql, catalog).run(); }

ClassifiedPredicates classify_predicates(const RawPlan& plan) {
  ClassifiedPredicates out;
  if (!plan.where) return out;
  std::map<std::string, std::vector<PredicateExpr>> per_table;
  for (auto& c : conjuncts(*plan.where)) {
    if (c.is_join()) {
      out.joins.push_back(std::move(c));
      continue;
    }
    auto tables = c.tables();
    if (tables.size() != 1)
      throw UnsupportedQuery(fmt::format("predicate {} spans several tables and is not an equi-join", c.to_sql()));
    per_table[*tables.begin()].push_back(std::move(c));
  }
  for (auto& [t, preds] : per_table) out.selections.emplace(t, PredicateExpr::conjunction(std::move(preds)));
  return out;
}

}  // namespace exactsel
