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


#include "exactsel/catalog.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace exactsel {

const TableMeta& Catalog::register_table(Table table) {
  return register_table(std::make_shared<const Table>(std::move(table)));
}

const TableMeta& Catalog::register_table(std::shared_ptr<const Table> table) {
  TableMeta meta;
  meta.name = table->name();
  meta.row_count = table->row_count();
  for (const auto& c : table->columns()) meta.distinct_counts[c.name] = distinct_count(c);
  std::lock_guard lock(mutex_);
  if (entries_.contains(meta.name)) throw CatalogError(fmt::format("table {} already registered", meta.name));
  auto name = meta.name;
  auto& e = entries_[name];
  e.table = std::move(table);
  e.meta = std::move(meta);
  return e.meta;
}

std::string Catalog::add_temporary(std::vector<Column> columns, const std::string& base_table) {
  auto id = next_temp_id_.fetch_add(1);
  auto name = fmt::format("tmp_{}_{}", id, base_table);
  auto table = std::make_shared<const Table>(name, std::move(columns));
  TableMeta meta;
  meta.name = name;
  meta.row_count = table->row_count();
  meta.temporary = true;
  meta.base_table = base_table;
  std::lock_guard lock(mutex_);
  auto& e = entries_[name];
  e.table = std::move(table);
  e.meta = std::move(meta);
  return name;
}

void Catalog::drop(const std::string& name) {
  std::lock_guard lock(mutex_);
  entries_.erase(name);
}

void Catalog::drop_temporaries() {
  std::lock_guard lock(mutex_);
  std::erase_if(entries_, [](const auto& kv) { return kv.second.meta.temporary; });
}

bool Catalog::contains(const std::string& name) const {
  std::lock_guard lock(mutex_);
  return entries_.contains(name);
}

const Catalog::Entry& Catalog::entry(const std::string& name) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(name);
  if (it == entries_.end()) throw CatalogError(fmt::format("unknown table {}", name));
  return it->second;
}

Catalog::Entry& Catalog::entry(const std::string& name) {
  return const_cast<Entry&>(std::as_const(*this).entry(name));
}

std::shared_ptr<const Table> Catalog::table(const std::string& name) const { return entry(name).table; }

const TableMeta& Catalog::meta(const std::string& name) const { return entry(name).meta; }

std::vector<std::string> Catalog::table_names() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [name, e] : entries_)
    if (!e.meta.temporary) out.push_back(name);
  return out;
}

std::size_t Catalog::distinct(const std::string& table, const std::string& column) const {
  const auto& m = meta(table);
  if (m.temporary) return std::min(distinct(m.base_table, column), m.row_count);
  auto it = m.distinct_counts.find(column);
  if (it == m.distinct_counts.end()) throw CatalogError(fmt::format("unknown column {}.{}", table, column));
  return it->second;
}

const Synopsis& Catalog::build_synopsis(const std::string& table, const std::string& column, SynopsisKind kind,
                                        const SynopsisParams& params) {
  auto& e = entry(table);
  auto synopsis = exactsel::build_synopsis(*e.table, e.table->column(column), kind, params);
  std::lock_guard lock(mutex_);
  auto [it, inserted] = e.meta.synopses.insert_or_assign({column, kind}, std::move(synopsis));
  return it->second;
}

const Synopsis& Catalog::ensure_synopsis(const std::string& table, const std::string& column, SynopsisKind kind,
                                         const SynopsisParams& params) {
  if (const auto* s = find_synopsis(table, column, kind)) return *s;
  return build_synopsis(table, column, kind, params);
}

const Synopsis* Catalog::find_synopsis(const std::string& table, const std::string& column,
                                       SynopsisKind kind) const {
  const auto& m = meta(table);
  std::lock_guard lock(mutex_);
  auto it = m.synopses.find({column, kind});
  return it == m.synopses.end() ? nullptr : &it->second;
}

}  // namespace exactsel
