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

#include <filesystem>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "exactsel/table.hpp"

namespace exactsel {

using Schema = std::vector<std::pair<std::string, ColumnType>>;

/// Reads a headed, comma-separated file. The header must list exactly the
/// schema names in order. Quotes and empty cells are rejected; errors carry the
/// 1-based line number.
Table load_csv(const std::filesystem::path& path, const Schema& schema, std::string table_name);
Table read_csv(std::istream& in, const Schema& schema, std::string table_name);

void write_csv(const Table& table, const std::filesystem::path& path);
void write_csv(const Table& table, std::ostream& out);

/// Schema of a table, for writing sidecar schema files.
Schema schema_of(const Table& table);
/// Parses "name:TYPE,name:TYPE" (TYPE in INT, FLOAT, DATE, TEXT).
Schema parse_schema(std::string_view text);
std::string format_schema(const Schema& schema);

}  // namespace exactsel
