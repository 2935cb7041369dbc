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

#include "wbfuzz/db.h"

#include <algorithm>
#include <cctype>

#include "wbfuzz/errors.h"

namespace wbfuzz {

namespace {

std::string Key(std::string_view name) {
  std::string out(name);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

Database::Database(std::vector<TableSchema> tables) : schemas_(std::move(tables)) {
  std::sort(schemas_.begin(), schemas_.end(),
            [](const TableSchema& a, const TableSchema& b) { return Key(a.name) < Key(b.name); });
  for (const auto& t : schemas_) {
    rows_[Key(t.name)];
    next_key_[Key(t.name)] = 1;
  }
}

Database::Database(const Database& other) {
  std::lock_guard<std::mutex> lock(other.mu_);
  schemas_ = other.schemas_;
  rows_ = other.rows_;
  next_key_ = other.next_key_;
}

Database& Database::operator=(const Database& other) {
  if (this == &other) return *this;
  std::scoped_lock lock(mu_, other.mu_);
  schemas_ = other.schemas_;
  rows_ = other.rows_;
  next_key_ = other.next_key_;
  return *this;
}

const TableSchema& Database::SchemaLocked(std::string_view table) const {
  for (const auto& t : schemas_) {
    if (Key(t.name) == Key(table)) return t;
  }
  throw ConfigError("unknown table '" + std::string(table) + "'");
}

const TableSchema& Database::Schema(std::string_view table) const {
  std::lock_guard<std::mutex> lock(mu_);
  return SchemaLocked(table);
}

Database::InsertResult Database::Insert(std::string_view table, Json values) {
  std::lock_guard<std::mutex> lock(mu_);
  const TableSchema& schema = SchemaLocked(table);
  auto& rows = rows_[Key(schema.name)];
  InsertResult result;
  if (!values.is_object()) {
    result.error = "row must be an object";
    return result;
  }
  for (const auto& [name, v] : values.items()) {
    if (schema.Find(name) == nullptr) {
      result.error = "unknown column " + name;
      return result;
    }
  }
  Json row = Json::object();
  for (const auto& c : schema.columns) {
    Json v = nullptr;
    for (const auto& [name, given] : values.items()) {
      if (Key(name) == Key(c.name)) v = given;
    }
    if (c.primary_key && v.is_null()) {
      int64_t& next = next_key_[Key(schema.name)];
      if (c.type == SqlType::kVarchar) {
        v = "k" + std::to_string(next++);
      } else {
        v = next++;
      }
    }
    if (!SatisfiesTable(c, v)) {
      result.error = "column " + c.name + " rejects " + v.dump();
      return result;
    }
    if (c.unique && !v.is_null()) {
      for (const auto& r : rows) {
        if (r[c.name] == v) {
          result.error = "duplicate value " + v.dump() + " for unique column " + c.name;
          return result;
        }
      }
    }
    if (c.primary_key && v.is_number_integer()) {
      int64_t& next = next_key_[Key(schema.name)];
      next = std::max(next, v.get<int64_t>() + 1);
    }
    row[c.name] = std::move(v);
  }
  rows.push_back(row);
  result.ok = true;
  result.row = std::move(row);
  return result;
}

std::vector<Json> Database::Select(std::string_view table, const Filter& where) const {
  std::lock_guard<std::mutex> lock(mu_);
  const TableSchema& schema = SchemaLocked(table);
  std::vector<Json> out;
  for (const auto& r : rows_.at(Key(schema.name))) {
    if (!where || where(r)) out.push_back(r);
  }
  return out;
}

size_t Database::Count(std::string_view table) const {
  std::lock_guard<std::mutex> lock(mu_);
  return rows_.at(Key(SchemaLocked(table).name)).size();
}

size_t Database::Delete(std::string_view table, const Filter& where) {
  std::lock_guard<std::mutex> lock(mu_);
  auto& rows = rows_.at(Key(SchemaLocked(table).name));
  const size_t before = rows.size();
  std::erase_if(rows, [&](const Json& r) { return where(r); });
  return before - rows.size();
}

std::optional<size_t> Database::Update(std::string_view table, const Filter& where,
                                       const Json& values) {
  std::lock_guard<std::mutex> lock(mu_);
  const TableSchema& schema = SchemaLocked(table);
  if (!values.is_object()) return std::nullopt;
  std::vector<std::pair<const Column*, Json>> sets;
  for (const auto& [name, v] : values.items()) {
    const Column* c = schema.Find(name);
    if (c == nullptr || c->primary_key || c->unique || !SatisfiesTable(*c, v)) return std::nullopt;
    sets.emplace_back(c, v);
  }
  size_t changed = 0;
  for (auto& r : rows_.at(Key(schema.name))) {
    if (where && !where(r)) continue;
    for (const auto& [c, v] : sets) r[c->name] = v;
    ++changed;
  }
  return changed;
}

std::string Database::Dump() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::string out;
  for (const auto& t : schemas_) {
    const std::string key = Key(t.name);
    out += "table " + t.name + " next=" + std::to_string(next_key_.at(key)) + "\n";
    for (const auto& r : rows_.at(key)) out += "  " + r.dump() + "\n";
  }
  return out;
}

}  // namespace wbfuzz
