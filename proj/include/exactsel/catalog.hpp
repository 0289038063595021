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

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "exactsel/synopsis.hpp"
#include "exactsel/table.hpp"

namespace exactsel {

/// Metadata the optimizer consults: |R|, V(R, A) and any synopses built.
struct TableMeta {
  std::string name;
  std::size_t row_count = 0;
  /// Exact V(R, A) per column. Left empty for temporary tables; see
  /// Catalog::distinct.
  std::map<std::string, std::size_t> distinct_counts;
  std::map<std::pair<std::string, SynopsisKind>, Synopsis> synopses;
  bool temporary = false;
  /// For temporary tables, the table the rows were selected from.
  std::string base_table;
};

/// Registry of base and temporary tables. Registration and synopsis builds
/// take a lock; lookups hand out references into node-stable maps, so they stay
/// valid until the table is dropped.
class Catalog {
 public:
  /// Computes row count and every distinct count. Throws CatalogError on a
  /// duplicate name.
  const TableMeta& register_table(Table table);
  const TableMeta& register_table(std::shared_ptr<const Table> table);

  /// Registers rows selected from `base_table` under a fresh name
  /// "tmp_<id>_<base_table>" and returns that name. Distinct counts are not
  /// computed.
  std::string add_temporary(std::vector<Column> columns, const std::string& base_table);
  /// Unknown names are ignored.
  void drop(const std::string& name);
  /// Drops every temporary table.
  void drop_temporaries();

  bool contains(const std::string& name) const;
  std::shared_ptr<const Table> table(const std::string& name) const;
  const TableMeta& meta(const std::string& name) const;
  /// Names of base tables, sorted.
  std::vector<std::string> table_names() const;

  /// V(R, A). For a temporary table: min(V(base, A), |R|).
  std::size_t distinct(const std::string& table, const std::string& column) const;

  /// Builds (or rebuilds) a synopsis and stores it in the table's metadata.
  const Synopsis& build_synopsis(const std::string& table, const std::string& column, SynopsisKind kind,
                                 const SynopsisParams& params = {});
  /// Returns the stored synopsis, building it with `params` if absent.
  const Synopsis& ensure_synopsis(const std::string& table, const std::string& column, SynopsisKind kind,
                                  const SynopsisParams& params = {});
  const Synopsis* find_synopsis(const std::string& table, const std::string& column, SynopsisKind kind) const;

 private:
  struct Entry {
    std::shared_ptr<const Table> table;
    TableMeta meta;
  };
  const Entry& entry(const std::string& name) const;
  Entry& entry(const std::string& name);

  mutable std::recursive_mutex mutex_;
  std::map<std::string, Entry> entries_;
  std::atomic<std::uint64_t> next_temp_id_{1};
};

}  // namespace exactsel
