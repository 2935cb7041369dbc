// Copyright 2026 The wbfuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WBFUZZ_DB_H_
#define WBFUZZ_DB_H_

// In-memory relational store behind the fixtures. Rows are JSON objects
// keyed by column name. Only table-level rules are enforced here; entity
// rules are the business of whoever reads the rows.

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wbfuzz/json.h"
#include "wbfuzz/sqlgen.h"

namespace wbfuzz {

class Database {
 public:
  Database() = default;
  explicit Database(std::vector<TableSchema> tables);
  Database(const Database& other);
  Database& operator=(const Database& other);

  // Throws ConfigError for unknown tables.
  const TableSchema& Schema(std::string_view table) const;
  const std::vector<TableSchema>& schemas() const { return schemas_; }

  struct InsertResult {
    bool ok = false;
    std::string error;
    Json row;  // as stored, with the key filled in
  };
  // Missing or null primary keys are assigned from a per-table counter.
  // Unknown columns, type errors, NOT NULL, length, check and uniqueness
  // violations are rejected.
  InsertResult Insert(std::string_view table, Json values);

  using Filter = std::function<bool(const Json&)>;
  std::vector<Json> Select(std::string_view table, const Filter& where = {}) const;
  size_t Count(std::string_view table) const;
  size_t Delete(std::string_view table, const Filter& where);
  // Sets the given columns on every matching row. Returns the number of
  // rows changed, or nullopt (changing nothing) if a value breaks a table
  // rule or names an unknown or key column.
  std::optional<size_t> Update(std::string_view table, const Filter& where, const Json& values);

  // Canonical text form: tables by name, rows in insertion order.
  std::string Dump() const;

 private:
  const TableSchema& SchemaLocked(std::string_view table) const;

  mutable std::mutex mu_;
  std::vector<TableSchema> schemas_;
  std::map<std::string, std::vector<Json>> rows_;
  std::map<std::string, int64_t> next_key_;
};

}  // namespace wbfuzz

#endif  // WBFUZZ_DB_H_
