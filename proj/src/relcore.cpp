#include "ccview/relcore.hpp"

#include <set>
#include <sstream>

namespace ccv {

std::optional<Value> Domain::find(const std::string& text) const {
    for (size_t i = 0; i < values.size(); ++i)
        if (values[i] == text) return static_cast<Value>(i);
    return std::nullopt;
}

void Domain::validate() const {
    if (values.empty())
        throw InvalidView("domain '" + name + "' has no values");
    std::set<std::string> seen(values.begin(), values.end());
    if (seen.size() != values.size())
        throw InvalidView("domain '" + name + "' has duplicate values");
    if (null_index && (*null_index < 0 || *null_index >= size()))
        throw InvalidView("domain '" + name + "' null value out of range");
}

const Domain& DatabaseSchema::column_domain(int table, int column) const {
    return domains[tables[table].columns[column]];
}

int DatabaseSchema::domain_index(const std::string& name) const {
    for (size_t i = 0; i < domains.size(); ++i)
        if (domains[i].name == name) return static_cast<int>(i);
    return -1;
}

int DatabaseSchema::table_index(const std::string& name) const {
    for (size_t i = 0; i < tables.size(); ++i)
        if (tables[i].name == name) return static_cast<int>(i);
    return -1;
}

void DatabaseSchema::validate() const {
    for (const auto& d : domains) d.validate();
    if (keys.size() != tables.size())
        throw InvalidView("key metadata array does not match table count");
    for (const auto& t : tables) {
        if (t.columns.empty())
            throw InvalidView("table '" + t.name + "' has no columns");
        for (int d : t.columns)
            if (d < 0 || d >= static_cast<int>(domains.size()))
                throw InvalidView("table '" + t.name + "' references unknown domain");
    }
    for (size_t ti = 0; ti < keys.size(); ++ti) {
        const int width = tables[ti].width();
        if (keys[ti].unique_key)
            for (int c : *keys[ti].unique_key)
                if (c < 0 || c >= width)
                    throw InvalidView("unique key column out of range for table '" +
                                      tables[ti].name + "'");
        for (const auto& fk : keys[ti].foreign_keys) {
            if (fk.column < 0 || fk.column >= width)
                throw InvalidView("foreign key column out of range for table '" +
                                  tables[ti].name + "'");
            if (fk.foreign_table < 0 || fk.foreign_table >= table_count())
                throw InvalidView("foreign key target table out of range");
            if (fk.foreign_column < 0 ||
                fk.foreign_column >= tables[fk.foreign_table].width())
                throw InvalidView("foreign key target column out of range");
        }
    }
}

TableState TableState::from(std::vector<Tuple> rows) {
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    return TableState{std::move(rows)};
}

bool TableState::contains(const Tuple& t) const {
    return std::binary_search(rows.begin(), rows.end(), t);
}

void TableState::insert(const Tuple& t) {
    auto it = std::lower_bound(rows.begin(), rows.end(), t);
    if (it == rows.end() || *it != t) rows.insert(it, t);
}

TableState TableState::set_union(const TableState& o) const {
    TableState out;
    std::set_union(rows.begin(), rows.end(), o.rows.begin(), o.rows.end(),
                   std::back_inserter(out.rows));
    return out;
}

TableState TableState::set_minus(const TableState& o) const {
    TableState out;
    std::set_difference(rows.begin(), rows.end(), o.rows.begin(), o.rows.end(),
                        std::back_inserter(out.rows));
    return out;
}

TableState TableState::set_intersect(const TableState& o) const {
    TableState out;
    std::set_intersection(rows.begin(), rows.end(), o.rows.begin(), o.rows.end(),
                          std::back_inserter(out.rows));
    return out;
}

bool TableState::subset_of(const TableState& o) const {
    return std::includes(o.rows.begin(), o.rows.end(), rows.begin(), rows.end());
}

bool TableState::disjoint_with(const TableState& o) const {
    return set_intersect(o).empty();
}

bool Update::empty() const {
    for (const auto& t : add)
        if (!t.empty()) return false;
    for (const auto& t : del)
        if (!t.empty()) return false;
    return true;
}

void validate_state(const DatabaseSchema& schema, const DatabaseState& s) {
    if (static_cast<int>(s.tables.size()) != schema.table_count())
        throw SchemaMismatch("state has " + std::to_string(s.tables.size()) +
                             " tables, schema has " + std::to_string(schema.table_count()));
    for (int ti = 0; ti < schema.table_count(); ++ti) {
        const auto& ts = schema.tables[ti];
        for (const auto& row : s.tables[ti].rows) {
            if (static_cast<int>(row.size()) != ts.width())
                throw SchemaMismatch("row arity mismatch in table '" + ts.name + "'");
            for (int c = 0; c < ts.width(); ++c) {
                const Domain& d = schema.column_domain(ti, c);
                if (row[c] < 0 || row[c] >= d.size())
                    throw SchemaMismatch("value out of domain '" + d.name + "' in table '" +
                                         ts.name + "'");
            }
        }
    }
}

namespace {

void require_same_shape(const DatabaseState& a, const DatabaseState& b) {
    if (a.tables.size() != b.tables.size())
        throw SchemaMismatch("states have different table counts");
    for (size_t i = 0; i < a.tables.size(); ++i) {
        if (a.tables[i].rows.empty() || b.tables[i].rows.empty()) continue;
        if (a.tables[i].rows.front().size() != b.tables[i].rows.front().size())
            throw SchemaMismatch("states disagree on the arity of table " + std::to_string(i));
    }
}

void require_update_shape(const DatabaseState& s, const Update& u) {
    if (u.add.size() != s.tables.size() || u.del.size() != s.tables.size())
        throw SchemaMismatch("update has " + std::to_string(u.add.size()) +
                             " tables, state has " + std::to_string(s.tables.size()));
}

} // namespace

bool applicable(const DatabaseState& s, const Update& u) {
    if (u.add.size() != s.tables.size() || u.del.size() != s.tables.size()) return false;
    for (size_t i = 0; i < s.tables.size(); ++i) {
        if (!u.add[i].disjoint_with(s.tables[i])) return false;
        if (!u.del[i].subset_of(s.tables[i])) return false;
    }
    return true;
}

Update diff(const DatabaseState& a, const DatabaseState& b) {
    require_same_shape(a, b);
    Update u;
    u.add.reserve(a.tables.size());
    u.del.reserve(a.tables.size());
    for (size_t i = 0; i < a.tables.size(); ++i) {
        u.add.push_back(b.tables[i].set_minus(a.tables[i]));
        u.del.push_back(a.tables[i].set_minus(b.tables[i]));
    }
    return u;
}

DatabaseState apply(const DatabaseState& s, const Update& u) {
    require_update_shape(s, u);
    if (!applicable(s, u))
        throw NotApplicable("update was computed for a different source state");
    DatabaseState out;
    out.tables.reserve(s.tables.size());
    for (size_t i = 0; i < s.tables.size(); ++i)
        out.tables.push_back(s.tables[i].set_union(u.add[i]).set_minus(u.del[i]));
    return out;
}

Update normalized(const Update& u, const DatabaseState& source) {
    require_update_shape(source, u);
    Update out;
    out.add.reserve(u.add.size());
    out.del.reserve(u.del.size());
    for (size_t i = 0; i < u.add.size(); ++i) {
        out.add.push_back(u.add[i].set_minus(source.tables[i]));
        out.del.push_back(u.del[i].set_intersect(source.tables[i]));
    }
    return out;
}

Update compose(const Update& v, const Update& u, const DatabaseState& source) {
    if (u.add.size() != v.add.size())
        throw SchemaMismatch("composed updates have different table counts");
    // Closed form first: vu.Add = (v.Add u u.Add) \ v.Del, and dually.
    Update w;
    w.add.reserve(u.add.size());
    w.del.reserve(u.del.size());
    for (size_t i = 0; i < u.add.size(); ++i) {
        w.add.push_back(v.add[i].set_union(u.add[i]).set_minus(v.del[i]));
        w.del.push_back(v.del[i].set_union(u.del[i]).set_minus(v.add[i]));
    }
    // The closed form can re-add rows of the source (v undoing u); normalize
    // so the result is the unique arrow from the source.
    return normalized(w, source);
}

Update invert(const Update& u) {
    return Update{u.del, u.add};
}

Update identity(const DatabaseSchema& schema) {
    Update u;
    u.add.resize(schema.tables.size());
    u.del.resize(schema.tables.size());
    return u;
}

} // namespace ccv
