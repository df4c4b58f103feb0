//  Copyright 2026 The iconf Authors
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

#pragma once

// Invariant catalog: declarative specs, their evaluators, view maintenance
// and cascading delete.

#include <optional>
#include <string>
#include <vector>

#include "iconf/transaction.hpp"

namespace iconf {

enum class InvariantClass {
  AttributeEquality,
  AttributeInequality,
  Uniqueness,
  Sequentiality,
  ForeignKey,
  SecondaryIndex,
  MaterializedView,
  CounterGreaterThan,
  CounterLessThan,
  Contains,
  NotContains,
  SizeEquals,
  Recency,  // classifier-only pseudo class; evaluates as always valid
};

std::string_view to_string(InvariantClass c);
std::optional<InvariantClass> invariant_class_from_string(std::string_view s);

// The pseudo-field "@key" names a record's key wherever a field is expected.
inline constexpr const char* kKeyField = "@key";

Value field_of(const RecordView& r, const std::string& field);

struct Filter {
  enum class Op { Eq, Ne, IsNull, NotNull };
  std::string field;
  Op op = Op::Eq;
  Value value;

  bool matches(const RecordView& r) const;
  bool operator==(const Filter&) const = default;
};

bool matches_all(const std::vector<Filter>& filters, const RecordView& r);

// coefficient * (count | sum field) over filtered records of table, per group.
struct Aggregate {
  enum class Fn { Count, Sum };
  std::string table;
  Fn fn = Fn::Count;
  std::string field;
  std::vector<std::string> group_by;
  std::vector<Filter> filter;
  std::int64_t coefficient = 1;

  bool operator==(const Aggregate&) const = default;
};

// Group key of a record: group_by values joined with '.'; "*" when ungrouped.
std::string group_key(const RecordView& r, const std::vector<std::string>& group_by);

// Per-group sums of a linear combination of aggregates.
std::map<std::string, std::int64_t> aggregate(const std::vector<Aggregate>& terms,
                                              const LogicalView& view);

struct InvariantSpec {
  InvariantClass cls = InvariantClass::AttributeEquality;
  std::string name;

  // Record-level target (equality, uniqueness, sequentiality, FK source, index).
  std::string table;
  std::string field;
  std::vector<Filter> filter;
  std::vector<std::string> group_by;

  Value constant;         // equality / inequality / contains element
  std::int64_t bound = 0;  // counter and size bounds
  std::string item;        // counter or collection item

  // Sequentiality: map each value v through "<resolve_table>/<v>".<resolve_field>
  // (unmapped values are violations) and, when next_table is set, require
  // "<next_table>/<group>".<next_field> = max + 1.
  std::string resolve_table;
  std::string resolve_field;
  std::string next_table;
  std::string next_field;

  // Foreign key: table.field references to_table.to_field.
  std::string to_table;
  std::string to_field;
  std::vector<Filter> to_filter;
  bool cascade = false;

  // Secondary index: "<index_table>/<key>".value mirrors table.field.
  std::string index_table;

  // Materialized view: per group, sum(lhs) = sum(rhs).
  std::vector<Aggregate> lhs;
  std::vector<Aggregate> rhs;

  std::string label() const;
  bool operator==(const InvariantSpec&) const = default;
};

// Tables and standalone items a spec reads.
std::set<std::string> spec_tables(const InvariantSpec& s);

ValidityVerdict evaluate(const InvariantSpec& spec, const LogicalView& view);
ValidityVerdict evaluate(const InvariantSpec& spec, const DatabaseState& s);
// Conjunction; the first failing spec supplies the witness.
ValidityVerdict evaluate(const std::vector<InvariantSpec>& specs, const LogicalView& view);

// Throws SchemaMismatch when the spec names a table or field the schema lacks.
void check_spec(const InvariantSpec& spec, const Schema& schema);

Invariant make_invariant(std::vector<InvariantSpec> specs, std::string name = {});

// A derived table: "<view_table>/<group>".<view_field> = source aggregate.
// With counter set the view field is a counter ADT field maintained by assign.
struct ViewFunction {
  std::string name;
  Aggregate source;
  std::string view_table;
  std::string view_field;
  bool counter = false;

  // The materialized-view invariant the function maintains.
  InvariantSpec spec() const;
  bool operator==(const ViewFunction&) const = default;
};

// Writes corrections for every group whose stored view value differs from
// the recomputed one (groups that lost all rows are reset to 0).
void maintain_view(const ViewFunction& vf, const LogicalView& view, WriteBatch& out);
std::vector<Version> maintain_view(const ViewFunction& vf, const DatabaseState& s,
                                   TxnId writer = TxnId{0xFFFFFFFFu, 0});

Maintenance make_maintenance(std::vector<ViewFunction> views);

// Tombstones every live record of table whose field equals value, plus a
// cascade marker for "table.field" that survives merge.
void cascade_delete(const LogicalView& view, const std::string& table, const std::string& field,
                    const Value& value, WriteBatch& out);
std::vector<Version> cascade_delete(const DatabaseState& s, const std::string& table,
                                    const std::string& field, const Value& value,
                                    TxnId writer = TxnId{0xFFFFFFFFu, 0});

}  // namespace iconf
