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
#include <stdexcept>
#include <string>
#include <string_view>

namespace exactsel {

/// Base class of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IngestError : public Error {
 public:
  IngestError(const std::string& msg, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class CatalogError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Query is syntactically valid but outside what the planner supports
/// (cross-table non-equality predicates, disconnected join graphs, ...).
class UnsupportedQuery : public Error {
 public:
  using Error::Error;
};

class InvalidStatistics : public Error {
 public:
  using Error::Error;
};

class ExecutionError : public Error {
 public:
  using Error::Error;
};

enum class ColumnType : std::uint8_t {
  Int64,
  Float64,
  Date,  ///< days since 1970-01-01
  Text,  ///< per-column dictionary code
};

std::string_view to_string(ColumnType type);

/// Int64, Date and Text columns store int64 values; Float64 stores doubles.
inline bool stores_integers(ColumnType type) { return type != ColumnType::Float64; }

inline bool is_numeric(ColumnType type) { return type != ColumnType::Text; }

/// Parses "YYYY-MM-DD" into days since the epoch. Throws Error on malformed input.
std::int64_t parse_date(std::string_view text);
std::string format_date(std::int64_t days);

}  // namespace exactsel
