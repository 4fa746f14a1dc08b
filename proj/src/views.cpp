#include "ccview/views.hpp"

#include <map>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ccv {

const char* cmp_op_text(CmpOp op) {
    switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
    }
    return "?";
}

Predicate Predicate::cmp_const(int col, CmpOp op, Value c) {
    Predicate p;
    p.kind = Kind::CmpConst;
    p.column = col;
    p.op = op;
    p.constant = c;
    return p;
}

Predicate Predicate::cmp_col(int col, CmpOp op, int rhs) {
    Predicate p;
    p.kind = Kind::CmpCol;
    p.column = col;
    p.op = op;
    p.rhs_column = rhs;
    return p;
}

Predicate Predicate::is_null(int col, bool positive) {
    Predicate p;
    p.kind = positive ? Kind::IsNull : Kind::NotNull;
    p.column = col;
    return p;
}

Predicate Predicate::negation(Predicate inner) {
    Predicate p;
    p.kind = Kind::Not;
    p.children.push_back(std::move(inner));
    return p;
}

Predicate Predicate::conjunction(std::vector<Predicate> ps) {
    if (ps.size() == 1) return std::move(ps.front());
    Predicate p;
    p.kind = Kind::And;
    p.children = std::move(ps);
    return p;
}

Predicate Predicate::disjunction(std::vector<Predicate> ps) {
    if (ps.size() == 1) return std::move(ps.front());
    Predicate p;
    p.kind = Kind::Or;
    p.children = std::move(ps);
    return p;
}

namespace {

bool compare_values(CmpOp op, Value lhs, Value rhs, bool lhs_null, bool rhs_null) {
    switch (op) {
    case CmpOp::Eq: return lhs == rhs;
    case CmpOp::Ne: return lhs != rhs;
    default: break;
    }
    // Ordered comparisons involving a null value evaluate to false.
    if (lhs_null || rhs_null) return false;
    switch (op) {
    case CmpOp::Lt: return lhs < rhs;
    case CmpOp::Le: return lhs <= rhs;
    case CmpOp::Gt: return lhs > rhs;
    case CmpOp::Ge: return lhs >= rhs;
    default: return false;
    }
}

} // namespace

bool eval_predicate(const Predicate& p, const DatabaseSchema& schema, int table,
                    const Tuple& row) {
    switch (p.kind) {
    case Predicate::Kind::True: return true;
    case Predicate::Kind::False: return false;
    case Predicate::Kind::CmpConst: {
        const Domain& d = schema.column_domain(table, p.column);
        return compare_values(p.op, row[p.column], p.constant, d.is_null(row[p.column]),
                              d.is_null(p.constant));
    }
    case Predicate::Kind::CmpCol: {
        const Domain& d = schema.column_domain(table, p.column);
        return compare_values(p.op, row[p.column], row[p.rhs_column],
                              d.is_null(row[p.column]), d.is_null(row[p.rhs_column]));
    }
    case Predicate::Kind::IsNull:
        return schema.column_domain(table, p.column).is_null(row[p.column]);
    case Predicate::Kind::NotNull:
        return !schema.column_domain(table, p.column).is_null(row[p.column]);
    case Predicate::Kind::And:
        for (const auto& c : p.children)
            if (!eval_predicate(c, schema, table, row)) return false;
        return true;
    case Predicate::Kind::Or:
        for (const auto& c : p.children)
            if (eval_predicate(c, schema, table, row)) return true;
        return false;
    case Predicate::Kind::Not:
        return !eval_predicate(p.children.front(), schema, table, row);
    }
    return false;
}

const char* ViewDef::kind_name() const {
    switch (node.index()) {
    case 0: return "selection";
    case 1: return "projection";
    case 2: return "union";
    case 3: return "hierjoin";
    case 4: return "fkjoin";
    case 5: return "antijoin";
    case 6: return "join";
    case 7: return "product";
    case 8: return "tabulated";
    case 9: return "zero";
    case 10: return "one";
    }
    return "?";
}

bool operator==(const ViewDef& a, const ViewDef& b) {
    if (a.node.index() != b.node.index()) return false;
    if (const auto* p = a.as<ProductDef>()) {
        const auto* q = b.as<ProductDef>();
        return *p->left == *q->left && *p->right == *q->right;
    }
    return std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, ProductDef>) {
                return false; // handled above
            } else {
                return x == std::get<T>(b.node);
            }
        },
        a.node);
}

ViewDef make_product(ViewDef left, ViewDef right) {
    ProductDef p;
    p.left = std::make_shared<const ViewDef>(std::move(left));
    p.right = std::make_shared<const ViewDef>(std::move(right));
    return ViewDef{std::move(p)};
}

ViewState ViewState::tables(std::vector<TableState> ts) {
    ViewState v;
    v.value = std::move(ts);
    return v;
}

ViewState ViewState::label(std::string s) {
    ViewState v;
    v.value = std::move(s);
    return v;
}

ViewState ViewState::pair(ViewState l, ViewState r) {
    ViewState v;
    v.value = std::make_shared<const Pair>(Pair{std::move(l), std::move(r)});
    return v;
}

const ViewState::Pair& ViewState::as_pair() const {
    return *std::get<2>(value);
}

bool operator==(const ViewState& a, const ViewState& b) {
    if (a.value.index() != b.value.index()) return false;
    switch (a.value.index()) {
    case 0: return a.as_tables() == b.as_tables();
    case 1: return a.as_label() == b.as_label();
    default:
        return a.as_pair().left == b.as_pair().left && a.as_pair().right == b.as_pair().right;
    }
}

bool operator<(const ViewState& a, const ViewState& b) {
    if (a.value.index() != b.value.index()) return a.value.index() < b.value.index();
    switch (a.value.index()) {
    case 0: return a.as_tables() < b.as_tables();
    case 1: return a.as_label() < b.as_label();
    default:
        if (a.as_pair().left == b.as_pair().left) return a.as_pair().right < b.as_pair().right;
        return a.as_pair().left < b.as_pair().left;
    }
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

void check_table_index(const DatabaseSchema& schema, int t, const char* what) {
    if (t < 0 || t >= schema.table_count())
        throw InvalidView(std::string(what) + " table index out of range");
}

void validate_predicate(const Predicate& p, const DatabaseSchema& schema, int table) {
    const int width = schema.tables[table].width();
    switch (p.kind) {
    case Predicate::Kind::CmpConst: {
        if (p.column < 0 || p.column >= width)
            throw InvalidView("predicate column out of range");
        const Domain& d = schema.column_domain(table, p.column);
        if (p.constant < 0 || p.constant >= d.size())
            throw InvalidView("predicate constant outside domain '" + d.name + "'");
        break;
    }
    case Predicate::Kind::CmpCol: {
        if (p.column < 0 || p.column >= width || p.rhs_column < 0 || p.rhs_column >= width)
            throw InvalidView("predicate column out of range");
        if (schema.tables[table].columns[p.column] != schema.tables[table].columns[p.rhs_column])
            throw InvalidView("column comparison requires matching domains");
        break;
    }
    case Predicate::Kind::IsNull:
    case Predicate::Kind::NotNull:
        if (p.column < 0 || p.column >= width)
            throw InvalidView("predicate column out of range");
        break;
    case Predicate::Kind::Not:
        if (p.children.size() != 1) throw InvalidView("malformed negation");
        [[fallthrough]];
    case Predicate::Kind::And:
    case Predicate::Kind::Or:
        for (const auto& c : p.children) validate_predicate(c, schema, table);
        break;
    default:
        break;
    }
}

void validate_column_pairs(const DatabaseSchema& schema, int left, int right,
                           const std::vector<std::pair<int, int>>& on) {
    if (on.empty()) throw InvalidView("join requires at least one column pair");
    for (auto [lc, rc] : on) {
        if (lc < 0 || lc >= schema.tables[left].width() || rc < 0 ||
            rc >= schema.tables[right].width())
            throw InvalidView("join column out of range");
        if (schema.tables[left].columns[lc] != schema.tables[right].columns[rc])
            throw InvalidView("join columns must share a domain");
    }
}

} // namespace

void validate_view(const ViewDef& view, const DatabaseSchema& schema) {
    if (const auto* s = view.as<SelectionDef>()) {
        check_table_index(schema, s->table, "selection");
        validate_predicate(s->predicate, schema, s->table);
    } else if (const auto* p = view.as<ProjectionDef>()) {
        check_table_index(schema, p->table, "projection");
        const int width = schema.tables[p->table].width();
        if (p->keep.empty()) throw InvalidView("projection keeps no columns");
        std::set<int> seen;
        for (int c : p->keep) {
            if (c < 0 || c >= width) throw InvalidView("projection column out of range");
            if (!seen.insert(c).second) throw InvalidView("projection repeats a column");
        }
        for (int c : p->drop_if_null)
            if (c < 0 || c >= width)
                throw InvalidView("projection null-exclusion column out of range");
    } else if (const auto* u = view.as<UnionDef>()) {
        check_table_index(schema, u->left, "union");
        check_table_index(schema, u->right, "union");
        if (schema.tables[u->left].columns != schema.tables[u->right].columns)
            throw InvalidView("union operands must have identical table schemas");
    } else if (const auto* h = view.as<HierJoinDef>()) {
        check_table_index(schema, h->parent, "join");
        check_table_index(schema, h->child, "join");
        validate_column_pairs(schema, h->parent, h->child, h->on);
    } else if (const auto* f = view.as<FKJoinDef>()) {
        check_table_index(schema, f->local, "join");
        check_table_index(schema, f->foreign, "join");
        validate_column_pairs(schema, f->local, f->foreign, f->on);
    } else if (const auto* a = view.as<AntiJoinDef>()) {
        check_table_index(schema, a->left, "join");
        check_table_index(schema, a->right, "join");
        validate_column_pairs(schema, a->left, a->right, a->on);
    } else if (const auto* g = view.as<GenericJoinDef>()) {
        check_table_index(schema, g->left, "join");
        check_table_index(schema, g->right, "join");
        if (g->on.empty()) throw InvalidView("join requires at least one condition");
        for (const auto& cond : g->on) {
            if (cond.left_column < 0 || cond.left_column >= schema.tables[g->left].width() ||
                cond.right_column < 0 || cond.right_column >= schema.tables[g->right].width())
                throw InvalidView("join column out of range");
            if (schema.tables[g->left].columns[cond.left_column] !=
                schema.tables[g->right].columns[cond.right_column])
                throw InvalidView("join columns must share a domain");
        }
    } else if (const auto* pr = view.as<ProductDef>()) {
        validate_view(*pr->left, schema);
        validate_view(*pr->right, schema);
    } else if (const auto* tb = view.as<TabulatedDef>()) {
        for (const auto& [state, label] : tb->map) {
            validate_state(schema, state);
            if (label.empty()) throw InvalidView("tabulated label is empty");
        }
    }
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

Tuple concat(const Tuple& a, const Tuple& b) {
    Tuple out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

bool rows_match(const Tuple& l, const Tuple& r, const std::vector<std::pair<int, int>>& on) {
    for (auto [lc, rc] : on)
        if (l[lc] != r[rc]) return false;
    return true;
}

TableState equijoin(const TableState& left, const TableState& right,
                    const std::vector<std::pair<int, int>>& on) {
    TableState out;
    for (const auto& l : left.rows)
        for (const auto& r : right.rows)
            if (rows_match(l, r, on)) out.insert(concat(l, r));
    return out;
}

} // namespace

ViewState eval(const ViewDef& view, const DatabaseSchema& schema, const DatabaseState& s) {
    if (const auto* sel = view.as<SelectionDef>()) {
        TableState out;
        for (const auto& row : s.tables[sel->table].rows)
            if (eval_predicate(sel->predicate, schema, sel->table, row)) out.insert(row);
        return ViewState::tables({std::move(out)});
    }
    if (const auto* p = view.as<ProjectionDef>()) {
        TableState out;
        for (const auto& row : s.tables[p->table].rows) {
            bool excluded = false;
            for (int c : p->drop_if_null)
                if (schema.column_domain(p->table, c).is_null(row[c])) { excluded = true; break; }
            if (excluded) continue;
            Tuple kept;
            kept.reserve(p->keep.size());
            for (int c : p->keep) kept.push_back(row[c]);
            out.insert(kept);
        }
        return ViewState::tables({std::move(out)});
    }
    if (const auto* u = view.as<UnionDef>())
        return ViewState::tables({s.tables[u->left].set_union(s.tables[u->right])});
    if (const auto* h = view.as<HierJoinDef>())
        return ViewState::tables({equijoin(s.tables[h->parent], s.tables[h->child], h->on)});
    if (const auto* f = view.as<FKJoinDef>())
        return ViewState::tables({equijoin(s.tables[f->local], s.tables[f->foreign], f->on)});
    if (const auto* a = view.as<AntiJoinDef>()) {
        TableState out;
        for (const auto& l : s.tables[a->left].rows) {
            bool matched = false;
            for (const auto& r : s.tables[a->right].rows)
                if (rows_match(l, r, a->on)) { matched = true; break; }
            if (!matched) out.insert(l);
        }
        return ViewState::tables({std::move(out)});
    }
    if (const auto* g = view.as<GenericJoinDef>()) {
        TableState out;
        for (const auto& l : s.tables[g->left].rows)
            for (const auto& r : s.tables[g->right].rows) {
                bool match = true;
                for (const auto& cond : g->on) {
                    const Domain& d = schema.column_domain(g->left, cond.left_column);
                    if (!compare_values(cond.op, l[cond.left_column], r[cond.right_column],
                                        d.is_null(l[cond.left_column]),
                                        d.is_null(r[cond.right_column]))) {
                        match = false;
                        break;
                    }
                }
                if (match) out.insert(concat(l, r));
            }
        return ViewState::tables({std::move(out)});
    }
    if (const auto* pr = view.as<ProductDef>())
        return ViewState::pair(eval(*pr->left, schema, s), eval(*pr->right, schema, s));
    if (const auto* tb = view.as<TabulatedDef>()) {
        for (const auto& [state, label] : tb->map)
            if (state == s) return ViewState::label(label);
        throw InvalidView("tabulated view is not defined at this state");
    }
    if (view.is<ZeroDef>()) return ViewState::label("0");
    // One: the state itself.
    return ViewState::tables(s.tables);
}

std::vector<TableSchema> view_output_tables(const ViewDef& view, const DatabaseSchema& schema) {
    auto named = [](std::vector<int> columns, int i) {
        return TableSchema{"t" + std::to_string(i), std::move(columns)};
    };
    if (const auto* sel = view.as<SelectionDef>())
        return {named(schema.tables[sel->table].columns, 0)};
    if (const auto* p = view.as<ProjectionDef>()) {
        std::vector<int> cols;
        for (int c : p->keep) cols.push_back(schema.tables[p->table].columns[c]);
        return {named(std::move(cols), 0)};
    }
    if (const auto* u = view.as<UnionDef>())
        return {named(schema.tables[u->left].columns, 0)};
    auto join_schema = [&](int l, int r) {
        std::vector<int> cols = schema.tables[l].columns;
        const auto& rc = schema.tables[r].columns;
        cols.insert(cols.end(), rc.begin(), rc.end());
        return std::vector<TableSchema>{named(std::move(cols), 0)};
    };
    if (const auto* h = view.as<HierJoinDef>()) return join_schema(h->parent, h->child);
    if (const auto* f = view.as<FKJoinDef>()) return join_schema(f->local, f->foreign);
    if (const auto* a = view.as<AntiJoinDef>())
        return {named(schema.tables[a->left].columns, 0)};
    if (const auto* g = view.as<GenericJoinDef>()) return join_schema(g->left, g->right);
    if (view.is<OneDef>()) {
        std::vector<TableSchema> out;
        for (int t = 0; t < schema.table_count(); ++t)
            out.push_back(named(schema.tables[t].columns, t));
        return out;
    }
    throw InvalidView(std::string("view kind '") + view.kind_name() +
                      "' has no row-set output shape");
}

// ---------------------------------------------------------------------------
// Partitions and the view ordering
// ---------------------------------------------------------------------------

std::vector<std::vector<size_t>> Partition::blocks() const {
    std::vector<std::vector<size_t>> out(block_count);
    for (size_t i = 0; i < block_of.size(); ++i) out[block_of[i]].push_back(i);
    return out;
}

Partition canonical_partition(const std::vector<int>& labels) {
    Partition p;
    p.block_of.resize(labels.size());
    std::map<int, int> renumber;
    for (size_t i = 0; i < labels.size(); ++i) {
        auto [it, fresh] = renumber.emplace(labels[i], p.block_count);
        if (fresh) ++p.block_count;
        p.block_of[i] = it->second;
    }
    return p;
}

bool refines(const Partition& p, const Partition& q) {
    if (p.block_of.size() != q.block_of.size()) return false;
    std::vector<int> image(p.block_count, -1);
    for (size_t i = 0; i < p.block_of.size(); ++i) {
        int& target = image[p.block_of[i]];
        if (target == -1) target = q.block_of[i];
        else if (target != q.block_of[i]) return false;
    }
    return true;
}

std::vector<ViewState> eval_over_space(const ViewDef& view, const StateSpace& space, Exec exec) {
    validate_view(view, space.schema());
    const size_t n = space.size();
    std::vector<ViewState> values(n);
    const bool par = exec == Exec::Parallel;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (par)
#else
    (void)par;
#endif
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        values[static_cast<size_t>(i)] =
            eval(view, space.schema(), space.unpack(space.state_at(static_cast<size_t>(i))));
    return values;
}

Partition view_partition(const ViewDef& view, const StateSpace& space, Exec exec) {
    auto values = eval_over_space(view, space, exec);
    // Deduplicate serially in enumeration order so block ids are canonical.
    Partition p;
    p.block_of.resize(values.size());
    std::map<ViewState, int> ids;
    for (size_t i = 0; i < values.size(); ++i) {
        auto [it, fresh] = ids.emplace(values[i], p.block_count);
        if (fresh) ++p.block_count;
        p.block_of[i] = it->second;
    }
    return p;
}

const char* view_order_text(ViewOrder o) {
    switch (o) {
    case ViewOrder::GreaterEqual: return "greater-or-equal";
    case ViewOrder::LessEqual: return "less-or-equal";
    case ViewOrder::Equivalent: return "equivalent";
    case ViewOrder::Incomparable: return "incomparable";
    }
    return "?";
}

ViewOrder compare_views(const ViewDef& f, const ViewDef& g, const StateSpace& space) {
    Partition pf = view_partition(f, space);
    Partition pg = view_partition(g, space);
    const bool ge = refines(pf, pg);
    const bool le = refines(pg, pf);
    if (ge && le) return ViewOrder::Equivalent;
    if (ge) return ViewOrder::GreaterEqual;
    if (le) return ViewOrder::LessEqual;
    return ViewOrder::Incomparable;
}

bool is_complement(const ViewDef& f, const ViewDef& c, const StateSpace& space) {
    Partition p = view_partition(make_product(f, c), space);
    return p.block_count == static_cast<int>(space.size());
}

// ---------------------------------------------------------------------------
// Constructive complements
// ---------------------------------------------------------------------------

ViewDef complement_of(const ViewDef& view, const DatabaseSchema& schema) {
    validate_view(view, schema);
    if (const auto* sel = view.as<SelectionDef>())
        return ViewDef{SelectionDef{sel->table, Predicate::negation(sel->predicate)}};
    if (view.is<UnionDef>()) return ViewDef{ZeroDef{}};
    if (const auto* p = view.as<ProjectionDef>()) {
        // The key part of the view is what it keeps but can never null out;
        // the complement keeps the key plus everything the view dropped, and
        // hides rows whose non-key part is null.
        std::set<int> keep(p->keep.begin(), p->keep.end());
        std::set<int> dropnull(p->drop_if_null.begin(), p->drop_if_null.end());
        ProjectionDef c;
        c.table = p->table;
        for (int col = 0; col < schema.tables[p->table].width(); ++col) {
            const bool kept = keep.count(col) != 0;
            const bool key = kept && !dropnull.count(col);
            if (key || !kept) c.keep.push_back(col);
            if (!kept) c.drop_if_null.push_back(col);
        }
        if (c.keep.empty())
            throw NoConstructiveComplement("projection view exposes every column");
        return ViewDef{std::move(c)};
    }
    if (const auto* h = view.as<HierJoinDef>())
        return ViewDef{AntiJoinDef{h->parent, h->child, h->on}};
    if (const auto* f = view.as<FKJoinDef>())
        return ViewDef{SelectionDef{f->foreign, Predicate::make_true()}};
    throw NoConstructiveComplement(std::string("no constructive complement for view kind '") +
                                   view.kind_name() + "'");
}

// ---------------------------------------------------------------------------
// Perfect decomposition
// ---------------------------------------------------------------------------

namespace {

void collect_tables(const ViewState& v, std::vector<const TableState*>& out) {
    if (v.is_tables()) {
        for (const auto& t : v.as_tables()) out.push_back(&t);
    } else if (v.value.index() == 2) {
        collect_tables(v.as_pair().left, out);
        collect_tables(v.as_pair().right, out);
    }
    // labels contribute no rows
}

} // namespace

bool perfect_decomposition(const ViewDef& f, const ViewDef& c, const StateSpace& space) {
    validate_view(f, space.schema());
    validate_view(c, space.schema());
    for (size_t i = 0; i < space.size(); ++i) {
        DatabaseState s = space.unpack(space.state_at(i));
        ViewState vf = eval(f, space.schema(), s);
        ViewState vc = eval(c, space.schema(), s);
        std::vector<const TableState*> tf, tc;
        collect_tables(vf, tf);
        collect_tables(vc, tc);
        for (const TableState* a : tf)
            for (const TableState* b : tc) {
                if (a->empty() || b->empty()) continue;
                if (a->rows.front().size() != b->rows.front().size()) continue;
                if (!a->disjoint_with(*b)) return false;
            }
    }
    return true;
}

} // namespace ccv
