#pragma once

#include "ccview/error.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ccv {

/// A value is an index into its domain's value list. Domains are finite and
/// totally ordered by declaration order, so values compare as integers.
using Value = int32_t;

/// A finite, ordered set of atomic values, optionally with one member
/// designated as the null value.
struct Domain {
    std::string name;
    std::vector<std::string> values;
    std::optional<Value> null_index;

    bool has_null() const { return null_index.has_value(); }
    bool is_null(Value v) const { return null_index && *null_index == v; }
    Value size() const { return static_cast<Value>(values.size()); }
    std::optional<Value> find(const std::string& text) const;
    void validate() const;
};

/// Positional columns only; each column references a domain of the schema.
struct TableSchema {
    std::string name;
    std::vector<int> columns; // indices into DatabaseSchema::domains

    int width() const { return static_cast<int>(columns.size()); }
};

struct ForeignKeySpec {
    int column;         // local column
    int foreign_table;  // table index
    int foreign_column; // column in the foreign table
};

/// Optional key metadata per table. Declared keys do double duty: they drive
/// join classification and they constrain the enumerated state space (a
/// declared unique key admits at most one row per key value; a declared
/// foreign key requires a matching row in the foreign table).
struct TableKeys {
    std::optional<std::vector<int>> unique_key; // sorted column indices
    std::vector<ForeignKeySpec> foreign_keys;

    bool empty() const { return !unique_key && foreign_keys.empty(); }
};

struct DatabaseSchema {
    std::vector<Domain> domains;
    std::vector<TableSchema> tables;
    std::vector<TableKeys> keys; // one entry per table

    int table_count() const { return static_cast<int>(tables.size()); }
    const Domain& column_domain(int table, int column) const;
    int domain_index(const std::string& name) const;   // -1 if absent
    int table_index(const std::string& name) const;    // -1 if absent
    void validate() const;
};

using Tuple = std::vector<Value>;

/// A set of rows, kept sorted and duplicate-free so that serialization and
/// comparison are canonical.
struct TableState {
    std::vector<Tuple> rows;

    static TableState from(std::vector<Tuple> rows);
    bool contains(const Tuple& t) const;
    bool empty() const { return rows.empty(); }
    size_t size() const { return rows.size(); }
    void insert(const Tuple& t);

    TableState set_union(const TableState& o) const;
    TableState set_minus(const TableState& o) const;
    TableState set_intersect(const TableState& o) const;
    bool subset_of(const TableState& o) const;
    bool disjoint_with(const TableState& o) const;

    auto operator<=>(const TableState&) const = default;
};

struct DatabaseState {
    std::vector<TableState> tables;

    auto operator<=>(const DatabaseState&) const = default;
};

/// Per-table add/del row sets: the arrow between two database states. A
/// normalized update at state s has add disjoint from s and del contained
/// in s, per table.
struct Update {
    std::vector<TableState> add;
    std::vector<TableState> del;

    bool empty() const;
    int table_count() const { return static_cast<int>(add.size()); }

    auto operator<=>(const Update&) const = default;
};

/// Validates a state against its schema (arity, domain membership).
void validate_state(const DatabaseSchema& schema, const DatabaseState& s);

/// True iff u can be applied to s: per table, u.add is disjoint from the
/// table and u.del is contained in it.
bool applicable(const DatabaseState& s, const Update& u);

/// The unique normalized update carrying a to b: add = b \ a, del = a \ b.
Update diff(const DatabaseState& a, const DatabaseState& b);

/// Applies u to s. Throws NotApplicable if the applicability predicate
/// fails, which signals the update was computed for a different source.
DatabaseState apply(const DatabaseState& s, const Update& u);

/// Normalizes an update against a source state: add := add \ tables,
/// del := del n tables. Idempotent on already-applicable updates.
Update normalized(const Update& u, const DatabaseState& source);

/// Closed-form composition of u-then-v, normalized against the source so the
/// invariants hold. Equals diff(source, apply(apply(source, u), v)).
Update compose(const Update& v, const Update& u, const DatabaseState& source);

/// Swaps add and del; the local inverse of u at any state it applies to.
Update invert(const Update& u);

/// The empty update of a schema; applicable to every state.
Update identity(const DatabaseSchema& schema);

} // namespace ccv
