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

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "exactsel/types.hpp"

namespace exactsel {

/// Per-column string dictionary. Codes are dense and assigned in
/// first-appearance order.
class Dictionary {
 public:
  /// Returns the code for `value`, inserting it if unseen.
  std::int64_t intern(std::string_view value);
  std::optional<std::int64_t> find(std::string_view value) const;
  const std::string& value(std::int64_t code) const { return values_.at(static_cast<std::size_t>(code)); }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<std::string> values_;
  std::unordered_map<std::string, std::int64_t> codes_;
};

/// A typed value array. Integer-backed types (Int64, Date, Text) use `ints`,
/// Float64 uses `floats`; the other vector stays empty. Text columns share
/// their dictionary with every copy made from them, so codes stay comparable
/// across temporary tables.
struct Column {
  std::string name;
  ColumnType type = ColumnType::Int64;
  std::vector<std::int64_t> ints;
  std::vector<double> floats;
  std::shared_ptr<const Dictionary> dictionary;

  Column() = default;
  Column(std::string name, ColumnType type);

  std::size_t size() const { return stores_integers(type) ? ints.size() : floats.size(); }
  void reserve(std::size_t n);

  /// New empty column with the same name, type and dictionary.
  Column empty_like() const;
  /// Appends row `row` of `other` (same type).
  void append_from(const Column& other, std::size_t row);
  /// Appends rows of `other` selected by `rows`.
  void gather_from(const Column& other, std::span<const std::uint32_t> rows);

  /// Renders one value for CSV / result printing.
  std::string format(std::size_t row) const;
};

/// Immutable columnar relation.
class Table {
 public:
  Table() = default;
  /// Throws CatalogError if column lengths differ or names repeat.
  Table(std::string name, std::vector<Column> columns);

  const std::string& name() const { return name_; }
  std::size_t row_count() const { return row_count_; }
  std::size_t column_count() const { return columns_.size(); }
  const std::vector<Column>& columns() const { return columns_; }
  const Column& column(std::size_t i) const { return columns_.at(i); }
  /// Throws CatalogError for unknown names.
  const Column& column(std::string_view name) const;
  std::optional<std::size_t> find_column(std::string_view name) const;

  /// FNV-1a over every value, in column order. Used for reproducibility checks.
  std::uint64_t checksum() const;

 private:
  std::string name_;
  std::vector<Column> columns_;
  std::size_t row_count_ = 0;
};

/// Exact number of distinct values in a column.
std::size_t distinct_count(const Column& column);
/// Throws CatalogError for unknown columns.
std::size_t distinct_count(const Table& table, std::string_view column);

}  // namespace exactsel
