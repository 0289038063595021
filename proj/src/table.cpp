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

#include "exactsel/table.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <unordered_set>

#include <fmt/format.h>

namespace exactsel {

std::string_view to_string(ColumnType type) {
  switch (type) {
    case ColumnType::Int64: return "INT";
    case ColumnType::Float64: return "FLOAT";
    case ColumnType::Date: return "DATE";
    case ColumnType::Text: return "TEXT";
  }
  return "?";
}

std::int64_t parse_date(std::string_view text) {
  int y = 0;
  unsigned m = 0, d = 0;
  auto bad = [&] { return Error(fmt::format("malformed date '{}'", text)); };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw bad();
  auto field = [&](std::size_t pos, std::size_t len, auto& out) {
    auto [p, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
    if (ec != std::errc() || p != text.data() + pos + len) throw bad();
  };
  field(0, 4, y);
  field(5, 2, m);
  field(8, 2, d);
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) throw bad();
  return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

std::string format_date(std::int64_t days) {
  std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days}}};
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
}

std::int64_t Dictionary::intern(std::string_view value) {
  auto it = codes_.find(std::string(value));
  if (it != codes_.end()) return it->second;
  auto code = static_cast<std::int64_t>(values_.size());
  values_.emplace_back(value);
  codes_.emplace(values_.back(), code);
  return code;
}

std::optional<std::int64_t> Dictionary::find(std::string_view value) const {
  auto it = codes_.find(std::string(value));
  if (it == codes_.end()) return std::nullopt;
  return it->second;
}

Column::Column(std::string name, ColumnType type) : name(std::move(name)), type(type) {
  if (type == ColumnType::Text) dictionary = std::make_shared<Dictionary>();
}

void Column::reserve(std::size_t n) {
  if (stores_integers(type))
    ints.reserve(n);
  else
    floats.reserve(n);
}

Column Column::empty_like() const {
  Column out;
  out.name = name;
  out.type = type;
  out.dictionary = dictionary;
  return out;
}

void Column::append_from(const Column& other, std::size_t row) {
  if (stores_integers(type))
    ints.push_back(other.ints[row]);
  else
    floats.push_back(other.floats[row]);
}

void Column::gather_from(const Column& other, std::span<const std::uint32_t> rows) {
  if (stores_integers(type)) {
    std::size_t base = ints.size();
    ints.resize(base + rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) ints[base + i] = other.ints[rows[i]];
  } else {
    std::size_t base = floats.size();
    floats.resize(base + rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) floats[base + i] = other.floats[rows[i]];
  }
}

std::string Column::format(std::size_t row) const {
  switch (type) {
    case ColumnType::Int64: return std::to_string(ints[row]);
    case ColumnType::Date: return format_date(ints[row]);
    case ColumnType::Text: return dictionary->value(ints[row]);
    case ColumnType::Float64: {
      char buf[64];
      auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), floats[row]);
      return std::string(buf, p);
    }
  }
  return {};
}

Table::Table(std::string name, std::vector<Column> columns)
    : name_(std::move(name)), columns_(std::move(columns)) {
  row_count_ = columns_.empty() ? 0 : columns_.front().size();
  std::unordered_set<std::string> seen;
  for (const auto& c : columns_) {
    if (c.size() != row_count_)
      throw CatalogError(fmt::format("table {}: column {} has {} rows, expected {}", name_, c.name,
                                     c.size(), row_count_));
    if (!seen.insert(c.name).second)
      throw CatalogError(fmt::format("table {}: duplicate column {}", name_, c.name));
  }
}

std::optional<std::size_t> Table::find_column(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i].name == name) return i;
  return std::nullopt;
}

const Column& Table::column(std::string_view name) const {
  auto idx = find_column(name);
  if (!idx) throw CatalogError(fmt::format("table {} has no column {}", name_, name));
  return columns_[*idx];
}

std::uint64_t Table::checksum() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ULL;
    }
  };
  mix(row_count_);
  for (const auto& c : columns_) {
    for (char ch : c.name) mix(static_cast<unsigned char>(ch));
    if (stores_integers(c.type))
      for (auto v : c.ints) mix(static_cast<std::uint64_t>(v));
    else
      for (auto v : c.floats) mix(std::bit_cast<std::uint64_t>(v));
    if (c.dictionary)
      for (std::size_t i = 0; i < c.dictionary->size(); ++i)
        for (char ch : c.dictionary->value(static_cast<std::int64_t>(i))) mix(static_cast<unsigned char>(ch));
  }
  return h;
}

std::size_t distinct_count(const Column& column) {
  std::vector<std::uint64_t> keys;
  keys.reserve(column.size());
  if (stores_integers(column.type)) {
    for (auto v : column.ints) keys.push_back(static_cast<std::uint64_t>(v));
  } else {
    // -0.0 and 0.0 compare equal
    for (double v : column.floats) keys.push_back(std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v));
  }
  std::sort(keys.begin(), keys.end());
  return static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

std::size_t distinct_count(const Table& table, std::string_view column) {
  return distinct_count(table.column(column));
}

}  // namespace exactsel
