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

#ifndef WBFUZZ_SQLGEN_H_
#define WBFUZZ_SQLGEN_H_

// SQL table schemas, entity-level constraints, their reconciliation, and
// generation of insert actions whose genes respect the merged rules.
//
// Schema file grammar (line oriented, '#' starts a comment):
//
//   table NAME
//     column NAME TYPE [nullable] [unique] [pk] [maxlen N] [check MIN..MAX]
//   end
//
// TYPE is one of integer, bigint, double, varchar, boolean. Columns are
// NOT NULL unless marked nullable; primary keys are never nullable.
//
// Entity file grammar:
//
//   entity NAME [table TABLE]
//     field NAME [column COLUMN] [primitive] [enum A,B,...] [validate C]...
//   end
//
// `primitive` marks a field whose type cannot hold null. Validation
// constraints are written as Min(5), Max(10), Size(1,64), Pattern(re),
// NotBlank, NotNull and so on, without spaces.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wbfuzz/genes.h"
#include "wbfuzz/json.h"
#include "wbfuzz/rng.h"
#include "wbfuzz/validation.h"

namespace wbfuzz {

enum class SqlType { kInteger, kBigint, kDouble, kVarchar, kBoolean };

std::string SqlTypeName(SqlType t);

struct Column {
  std::string name;
  SqlType type = SqlType::kInteger;
  bool nullable = false;
  bool unique = false;
  bool primary_key = false;
  size_t max_length = 255;  // varchar only
  std::optional<double> check_min;
  std::optional<double> check_max;

  bool operator==(const Column&) const = default;
};

struct TableSchema {
  std::string name;
  std::vector<Column> columns;

  // Case-insensitive.
  const Column* Find(std::string_view column) const;
  const Column* PrimaryKey() const;

  bool operator==(const TableSchema&) const = default;
};

struct EntityField {
  std::string name;
  std::string column;  // explicit mapping, empty if derived
  bool primitive = false;
  std::vector<std::string> enum_values;
  std::vector<ValidationConstraint> constraints;

  bool operator==(const EntityField&) const = default;
};

struct EntityConstraintSet {
  std::string name;
  std::string table;  // explicit mapping, empty if derived
  std::vector<EntityField> fields;

  bool operator==(const EntityConstraintSet&) const = default;
};

// Throws ParseError with "line N" locations. Column names must be unique.
std::vector<TableSchema> ParseTableSchemas(std::string_view text);
std::vector<EntityConstraintSet> ParseEntities(std::string_view text);

// "VerificationAppSession" -> "verification_app_session".
std::string SnakeCase(std::string_view name);

class ReconcileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FieldBinding {
  std::string field;
  std::string column;
};

struct EntityBinding {
  std::string entity;
  std::string table;
  std::vector<FieldBinding> fields;
};

// Explicit names first, snake_case otherwise. Throws ReconcileError naming
// the candidates when a table or column cannot be found.
EntityBinding Resolve(const EntityConstraintSet& entity,
                      const std::vector<TableSchema>& tables);

// One entity-level rule a row could be made to break on purpose.
struct ExtraConstraint {
  enum class Kind { kNotNull, kEnum, kRange, kLength, kNotBlank, kPattern };
  Kind kind = Kind::kNotNull;
  std::string column;
  std::string description;
  // Breaking it makes the entity parse fail (rather than only validation).
  bool crashes_parse = false;
};

struct ColumnRule {
  Column column;
  bool not_null = false;
  std::vector<std::string> enum_values;  // empty: no enum restriction
  std::optional<double> min;
  std::optional<double> max;
  size_t min_length = 0;
  size_t max_length = 255;
  bool not_blank = false;
  std::string pattern;
  // The entity rules clash with the table; only table rules are used.
  bool contradictory = false;
};

struct EffectiveConstraints {
  std::string table;
  std::vector<ColumnRule> columns;
  std::vector<ExtraConstraint> extras;
  std::vector<std::string> warnings;

  const ColumnRule* Find(std::string_view column) const;
};

// Merges table and entity rules, keeping the stricter of each. `entity`
// may be null, in which case the table rules are returned unchanged.
EffectiveConstraints Reconcile(const TableSchema& table,
                               const EntityConstraintSet* entity,
                               const std::vector<TableSchema>& all_tables = {});

// True if the value is allowed by the table's hard rules.
bool SatisfiesTable(const Column& c, const Json& value);
// True if the value is allowed by the merged rules.
bool SatisfiesRule(const ColumnRule& r, const Json& value);
// True if the value breaks the given extra constraint.
bool Violates(const ExtraConstraint& e, const ColumnRule& r, const Json& value);

struct Violation {
  ExtraConstraint constraint;
  Json value;
};

// Insert with one gene per non-key column. Key values come from a
// per-table counter when the insert is executed.
struct SqlInsertAction {
  std::string table;
  std::vector<std::pair<std::string, GeneBox>> columns;
  std::optional<Violation> violation;

  // Column values (nulls included); the violation overrides its column.
  Json Values() const;
};

GeneBox GeneForRule(const ColumnRule& r);

// With probability `violate_probability` exactly one extra constraint is
// broken (uniformly chosen); otherwise every merged rule holds.
SqlInsertAction GenerateInsert(const EffectiveConstraints& eff, Rng& rng,
                               double violate_probability,
                               const GeneContext& ctx = {});

// Tables that deserve one more insert: each empty-selected table at most
// once per call, and never beyond `max_per_table` inserts in the test.
std::vector<std::string> TablesToFill(const std::vector<std::string>& empty_selects,
                                      const std::vector<SqlInsertAction>& existing,
                                      size_t max_per_table = 3);

}  // namespace wbfuzz

#endif  // WBFUZZ_SQLGEN_H_
