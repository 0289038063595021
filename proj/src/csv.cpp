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

#include "exactsel/csv.hpp"

#include <charconv>
#include <fstream>

#include <fmt/format.h>

namespace exactsel {
namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

void append_cell(Column& col, std::string_view cell, std::size_t line_no) {
  if (cell.empty()) throw IngestError(fmt::format("empty value in column {}", col.name), line_no);
  auto parse_fail = [&] {
    return IngestError(fmt::format("cannot parse '{}' as {} in column {}", cell, to_string(col.type), col.name),
                       line_no);
  };
  switch (col.type) {
    case ColumnType::Int64: {
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || p != cell.data() + cell.size()) throw parse_fail();
      col.ints.push_back(v);
      break;
    }
    case ColumnType::Float64: {
      double v = 0;
      auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || p != cell.data() + cell.size()) throw parse_fail();
      col.floats.push_back(v);
      break;
    }
    case ColumnType::Date: {
      try {
        col.ints.push_back(parse_date(cell));
      } catch (const Error&) {
        throw parse_fail();
      }
      break;
    }
    case ColumnType::Text: {
      if (cell.find('"') != std::string_view::npos) throw IngestError("quoted text is not supported", line_no);
      // The dictionary is shared only after the table is built.
      auto dict = std::const_pointer_cast<Dictionary>(col.dictionary);
      col.ints.push_back(dict->intern(cell));
      break;
    }
  }
}

}  // namespace

Table read_csv(std::istream& in, const Schema& schema, std::string table_name) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw IngestError("missing header", 1);
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split(line);
  if (header.size() != schema.size()) throw IngestError("header does not match schema", line_no);
  for (std::size_t i = 0; i < schema.size(); ++i)
    if (header[i] != schema[i].first)
      throw IngestError(fmt::format("header column '{}' does not match schema column '{}'", header[i],
                                    schema[i].first),
                        line_no);

  std::vector<Column> columns;
  columns.reserve(schema.size());
  for (const auto& [name, type] : schema) columns.emplace_back(name, type);

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != schema.size())
      throw IngestError(fmt::format("expected {} values, found {}", schema.size(), cells.size()), line_no);
    for (std::size_t i = 0; i < cells.size(); ++i) append_cell(columns[i], cells[i], line_no);
  }
  return Table(std::move(table_name), std::move(columns));
}

Table load_csv(const std::filesystem::path& path, const Schema& schema, std::string table_name) {
  std::ifstream in(path);
  if (!in) throw IngestError(fmt::format("cannot open {}", path.string()), 0);
  return read_csv(in, schema, std::move(table_name));
}

void write_csv(const Table& table, std::ostream& out) {
  const auto& cols = table.columns();
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c].name;
  out << '\n';
  std::string cell;
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      cell = cols[c].format(r);
      if (cols[c].type == ColumnType::Text &&
          (cell.empty() || cell.find_first_of(",\"\n\r") != std::string::npos))
        throw Error(fmt::format("text value in {}.{} cannot be written as unquoted CSV", table.name(),
                                cols[c].name));
      if (c) out << ',';
      out << cell;
    }
    out << '\n';
  }
}

void write_csv(const Table& table, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(fmt::format("cannot write {}", path.string()));
  write_csv(table, out);
}

Schema schema_of(const Table& table) {
  Schema s;
  for (const auto& c : table.columns()) s.emplace_back(c.name, c.type);
  return s;
}

Schema parse_schema(std::string_view text) {
  Schema out;
  for (auto item : split(text)) {
    auto colon = item.find(':');
    if (colon == std::string_view::npos) throw Error(fmt::format("bad schema entry '{}'", item));
    auto name = item.substr(0, colon);
    auto type = item.substr(colon + 1);
    ColumnType t;
    if (type == "INT")
      t = ColumnType::Int64;
    else if (type == "FLOAT")
      t = ColumnType::Float64;
    else if (type == "DATE")
      t = ColumnType::Date;
    else if (type == "TEXT")
      t = ColumnType::Text;
    else
      throw Error(fmt::format("unknown column type '{}'", type));
    out.emplace_back(std::string(name), t);
  }
  return out;
}

std::string format_schema(const Schema& schema) {
  std::string out;
  for (const auto& [name, type] : schema) {
    if (!out.empty()) out += ',';
    out += name;
    out += ':';
    out += to_string(type);
  }
  return out;
}

}  // namespace exactsel
