#include "ccview/translate.hpp"

#include <limits>
#include <map>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ccv {

const char* strategy_kind_text(StrategyKind k) {
    switch (k) {
    case StrategyKind::Selection: return "selection";
    case StrategyKind::Union: return "union";
    case StrategyKind::Projection: return "projection";
    case StrategyKind::HierJoin: return "hierjoin";
    case StrategyKind::FKJoin: return "fkjoin";
    case StrategyKind::Combined: return "combined";
    case StrategyKind::Identity: return "identity";
    }
    return "?";
}

const char* union_policy_text(UnionInsertPolicy p) {
    switch (p) {
    case UnionInsertPolicy::Both: return "both";
    case UnionInsertPolicy::Left: return "left";
    case UnionInsertPolicy::Right: return "right";
    }
    return "?";
}

void require_strategy_match(const ViewDef& view, const TranslationStrategy& strategy) {
    bool ok = false;
    switch (strategy.kind) {
    case StrategyKind::Selection: ok = view.is<SelectionDef>(); break;
    case StrategyKind::Union: ok = view.is<UnionDef>(); break;
    case StrategyKind::Projection: ok = view.is<ProjectionDef>(); break;
    case StrategyKind::HierJoin: ok = view.is<HierJoinDef>(); break;
    case StrategyKind::FKJoin:
    case StrategyKind::Combined: ok = view.is<FKJoinDef>(); break;
    case StrategyKind::Identity: ok = view.is<OneDef>(); break;
    }
    if (!ok)
        throw StrategyMismatch(std::string("strategy '") + strategy_kind_text(strategy.kind) +
                               "' does not apply to a " + view.kind_name() + " view");
}

namespace {

bool view_update_applicable(const std::vector<TableState>& view_tables, const ViewUpdate& u) {
    if (u.add.size() != view_tables.size() || u.del.size() != view_tables.size()) return false;
    for (size_t i = 0; i < view_tables.size(); ++i) {
        if (!u.add[i].disjoint_with(view_tables[i])) return false;
        if (!u.del[i].subset_of(view_tables[i])) return false;
    }
    return true;
}

std::vector<TableState> view_apply(const std::vector<TableState>& view_tables,
                                   const ViewUpdate& u) {
    std::vector<TableState> out;
    out.reserve(view_tables.size());
    for (size_t i = 0; i < view_tables.size(); ++i)
        out.push_back(view_tables[i].set_union(u.add[i]).set_minus(u.del[i]));
    return out;
}

Tuple prefix(const Tuple& row, int n) { return Tuple(row.begin(), row.begin() + n); }
Tuple suffix(const Tuple& row, int n) { return Tuple(row.begin() + n, row.end()); }

/// Added join-view rows must agree across the join columns, or they could
/// never appear in any view image.
void require_join_consistent(const TableState& added, int left_width,
                             const std::vector<std::pair<int, int>>& on) {
    for (const auto& row : added)
        for (auto [lc, rc] : on)
            if (row[lc] != row[left_width + rc])
                throw InvalidViewUpdate("added view row violates the join condition");
}

DatabaseState translate_selection(const SelectionDef& sel, const ViewUpdate& u,
                                  const DatabaseSchema& schema, const DatabaseState& s) {
    for (const auto& row : u.add[0])
        if (!eval_predicate(sel.predicate, schema, sel.table, row))
            throw InvalidViewUpdate("added view row does not satisfy the selection predicate");
    DatabaseState target = s;
    target.tables[sel.table] =
        s.tables[sel.table].set_minus(u.del[0]).set_union(u.add[0]);
    return target;
}

DatabaseState translate_union(const UnionDef& un, UnionInsertPolicy policy, const ViewUpdate& u,
                              const DatabaseState& s) {
    DatabaseState target = s;
    target.tables[un.left] = s.tables[un.left].set_minus(u.del[0]);
    target.tables[un.right] = target.tables[un.right].set_minus(u.del[0]);
    if (policy == UnionInsertPolicy::Both || policy == UnionInsertPolicy::Left)
        target.tables[un.left] = target.tables[un.left].set_union(u.add[0]);
    if (policy == UnionInsertPolicy::Both || policy == UnionInsertPolicy::Right)
        target.tables[un.right] = target.tables[un.right].set_union(u.add[0]);
    return target;
}

DatabaseState translate_projection(const ProjectionDef& proj, const ViewUpdate& u,
                                   const DatabaseSchema& schema, const DatabaseState& s) {
    const int table = proj.table;
    const int width = schema.tables[table].width();
    std::set<int> dropnull(proj.drop_if_null.begin(), proj.drop_if_null.end());
    std::vector<int> key_positions; // positions within `keep` that cannot be nulled out
    for (size_t i = 0; i < proj.keep.size(); ++i)
        if (!dropnull.count(proj.keep[i])) key_positions.push_back(static_cast<int>(i));

    auto null_of = [&](int col) -> Value {
        const Domain& d = schema.column_domain(table, col);
        if (!d.has_null())
            throw NullNotSupported("projection translation needs a null value in domain '" +
                                   d.name + "'");
        return *d.null_index;
    };
    auto visible = [&](const Tuple& row) {
        for (int c : proj.drop_if_null)
            if (schema.column_domain(table, c).is_null(row[c])) return false;
        return true;
    };
    auto keep_projection = [&](const Tuple& row) {
        Tuple v;
        v.reserve(proj.keep.size());
        for (int c : proj.keep) v.push_back(row[c]);
        return v;
    };
    // A row is worth keeping only while some column outside the key part is
    // non-null; otherwise it holds no information either view can see.
    auto informative = [&](const Tuple& row) {
        std::set<int> key_cols;
        for (int pos : key_positions) key_cols.insert(proj.keep[pos]);
        for (int c = 0; c < width; ++c) {
            if (key_cols.count(c)) continue;
            if (!schema.column_domain(table, c).is_null(row[c])) return true;
        }
        return false;
    };

    std::vector<Tuple> rows(s.tables[table].rows);

    // Deletions null out the view's excluded-if-null columns so the row
    // disappears from the view; a row left with nothing outside the key is
    // deleted outright.
    std::vector<Tuple> after_del;
    for (const auto& row : rows) {
        if (visible(row) && u.del[0].contains(keep_projection(row))) {
            Tuple changed = row;
            for (int c : proj.drop_if_null) changed[c] = null_of(c);
            if (informative(changed)) after_del.push_back(changed);
        } else {
            after_del.push_back(row);
        }
    }

    // Insertions revive the hidden row with the same key part when one
    // exists (an update in SQL terms); otherwise they pad a fresh row with
    // nulls in every unexposed column.
    std::vector<Tuple> result = after_del;
    for (const auto& v : u.add[0]) {
        std::vector<size_t> hidden;
        for (size_t i = 0; i < result.size(); ++i) {
            const Tuple& row = result[i];
            bool key_match = true;
            for (int pos : key_positions)
                if (row[proj.keep[pos]] != v[pos]) { key_match = false; break; }
            if (!key_match) continue;
            bool is_hidden = true;
            for (int c : proj.drop_if_null)
                if (!schema.column_domain(table, c).is_null(row[c])) { is_hidden = false; break; }
            if (is_hidden) hidden.push_back(i);
        }
        if (hidden.empty()) {
            Tuple fresh(width, 0);
            std::set<int> kept(proj.keep.begin(), proj.keep.end());
            for (size_t i = 0; i < proj.keep.size(); ++i) fresh[proj.keep[i]] = v[i];
            for (int c = 0; c < width; ++c)
                if (!kept.count(c)) fresh[c] = null_of(c);
            result.push_back(fresh);
        } else {
            for (size_t i : hidden)
                for (size_t pos = 0; pos < proj.keep.size(); ++pos)
                    result[i][proj.keep[pos]] = v[pos];
        }
    }

    DatabaseState target = s;
    target.tables[table] = TableState::from(std::move(result));
    return target;
}

DatabaseState translate_hierjoin(const HierJoinDef& join, const ViewUpdate& u,
                                 const DatabaseSchema& schema, const DatabaseState& s,
                                 const std::vector<TableState>& view_tables) {
    const int pw = schema.tables[join.parent].width();
    require_join_consistent(u.add[0], pw, join.on);

    TableState v1 = view_apply(view_tables, u)[0];
    TableState parents, children;
    for (const auto& row : v1) {
        parents.insert(prefix(row, pw));
        children.insert(suffix(row, pw));
    }
    TableState childless;
    for (const auto& p : s.tables[join.parent].rows) {
        bool has_child = false;
        for (const auto& c : s.tables[join.child].rows) {
            bool match = true;
            for (auto [pc, cc] : join.on)
                if (p[pc] != c[cc]) { match = false; break; }
            if (match) { has_child = true; break; }
        }
        if (!has_child) childless.insert(p);
    }
    // A childless parent acquiring its first child would leave the
    // complement; the insert has no complement-preserving translation.
    if (!childless.disjoint_with(parents))
        throw NotTranslatable("view insert gives an existing childless parent a child");

    DatabaseState target = s;
    target.tables[join.parent] = parents.set_union(childless);
    target.tables[join.child] = children;
    return target;
}

DatabaseState translate_fkjoin(const FKJoinDef& join, const ViewUpdate& u,
                               const DatabaseSchema& schema, const DatabaseState& s,
                               const std::vector<TableState>& view_tables) {
    const int lw = schema.tables[join.local].width();
    require_join_consistent(u.add[0], lw, join.on);
    for (const auto& row : u.add[0])
        if (!s.tables[join.foreign].contains(suffix(row, lw)))
            throw NotTranslatable("foreign part of the added view row is not in the foreign table");

    TableState v1 = view_apply(view_tables, u)[0];
    TableState locals;
    for (const auto& row : v1) locals.insert(prefix(row, lw));

    DatabaseState target = s;
    target.tables[join.local] = locals;
    return target;
}

DatabaseState translate_combined(const FKJoinDef& join, const ViewUpdate& u,
                                 const DatabaseSchema& schema, const DatabaseState& s) {
    const int lw = schema.tables[join.local].width();
    require_join_consistent(u.add[0], lw, join.on);
    // Deletes as in the fk strategy (local rows only); inserts may create
    // the missing foreign row as well.
    TableState del_locals, add_locals, add_foreigns;
    for (const auto& row : u.del[0]) del_locals.insert(prefix(row, lw));
    for (const auto& row : u.add[0]) {
        add_locals.insert(prefix(row, lw));
        add_foreigns.insert(suffix(row, lw));
    }
    DatabaseState target = s;
    target.tables[join.local] =
        s.tables[join.local].set_minus(del_locals).set_union(add_locals);
    target.tables[join.foreign] = s.tables[join.foreign].set_union(add_foreigns);
    return target;
}

} // namespace

Update translate(const ViewDef& view, const TranslationStrategy& strategy, const ViewUpdate& u,
                 const DatabaseSchema& schema, const DatabaseState& s) {
    require_strategy_match(view, strategy);
    ViewState v0 = eval(view, schema, s);
    const auto& view_tables = v0.as_tables();
    if (!view_update_applicable(view_tables, u))
        throw InvalidViewUpdate("view update is not applicable to the current view state");

    DatabaseState target;
    switch (strategy.kind) {
    case StrategyKind::Selection:
        target = translate_selection(*view.as<SelectionDef>(), u, schema, s);
        break;
    case StrategyKind::Union:
        target = translate_union(*view.as<UnionDef>(), strategy.policy, u, s);
        break;
    case StrategyKind::Projection:
        target = translate_projection(*view.as<ProjectionDef>(), u, schema, s);
        break;
    case StrategyKind::HierJoin:
        target = translate_hierjoin(*view.as<HierJoinDef>(), u, schema, s, view_tables);
        break;
    case StrategyKind::FKJoin:
        target = translate_fkjoin(*view.as<FKJoinDef>(), u, schema, s, view_tables);
        break;
    case StrategyKind::Combined:
        target = translate_combined(*view.as<FKJoinDef>(), u, schema, s);
        break;
    case StrategyKind::Identity: {
        DatabaseState t = s;
        for (size_t i = 0; i < t.tables.size(); ++i)
            t.tables[i] = t.tables[i].set_minus(u.del[i]).set_union(u.add[i]);
        target = std::move(t);
        break;
    }
    }
    return diff(s, target);
}

bool is_translation(const ViewDef& view, const ViewUpdate& u, const Update& t,
                    const StateSpace& space) {
    validate_view(view, space.schema());
    for (size_t i = 0; i < space.size(); ++i) {
        DatabaseState s = space.unpack(space.state_at(i));
        ViewState v0 = eval(view, space.schema(), s);
        if (!v0.is_tables()) throw InvalidView("view has no row-set output shape");
        if (!view_update_applicable(v0.as_tables(), u)) continue;
        if (!applicable(s, t)) return false;
        DatabaseState target = apply(s, t);
        Packed packed;
        try {
            packed = space.pack(target);
        } catch (const InvalidView&) {
            return false; // target is not even within the tuple space
        }
        if (!space.satisfies_constraints(packed)) return false;
        ViewState after = eval(view, space.schema(), target);
        if (!(after.as_tables() == view_apply(v0.as_tables(), u))) return false;
        if (u.empty() && !(target == s)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// The memoized translation table and the law checker
// ---------------------------------------------------------------------------

namespace {
constexpr int32_t kEscaped = -2; // translation left the enumerated space
} // namespace

ViewUpdate TranslationTable::arrow(size_t state, size_t vt) const {
    const auto& from = view_states[eval_of[state]].as_tables();
    const auto& to = view_states[vt].as_tables();
    ViewUpdate u;
    u.add.reserve(from.size());
    u.del.reserve(from.size());
    for (size_t i = 0; i < from.size(); ++i) {
        u.add.push_back(to[i].set_minus(from[i]));
        u.del.push_back(from[i].set_minus(to[i]));
    }
    return u;
}

TranslationTable TranslationTable::build(const ViewDef& view, const TranslationStrategy& strategy,
                                         const StateSpace& space, Exec exec) {
    require_strategy_match(view, strategy);
    TranslationTable table;
    table.space = &space;

    auto values = eval_over_space(view, space, exec);
    const size_t n = space.size();
    table.eval_of.resize(n);
    std::map<ViewState, int32_t> ids;
    for (size_t i = 0; i < n; ++i) {
        auto [it, fresh] = ids.emplace(values[i], static_cast<int32_t>(table.view_states.size()));
        if (fresh) table.view_states.push_back(values[i]);
        table.eval_of[i] = it->second;
    }

    const size_t m = table.view_states.size();
    table.endpoint.assign(n * m, kSkipped);
    uint64_t translations = 0, skipped = 0;

    const bool par = exec == Exec::Parallel;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : translations, skipped) if (par)
#else
    (void)par;
#endif
    for (long long si = 0; si < static_cast<long long>(n); ++si) {
        const size_t s_idx = static_cast<size_t>(si);
        DatabaseState s = space.unpack(space.state_at(s_idx));
        for (size_t vt = 0; vt < m; ++vt) {
            ViewUpdate u = table.arrow(s_idx, vt);
            int32_t result;
            try {
                Update t = translate(view, strategy, u, space.schema(), s);
                DatabaseState reached = apply(s, t);
                auto idx = space.index_of(space.pack(reached));
                result = idx ? static_cast<int32_t>(*idx) : kEscaped;
                ++translations;
            } catch (const NotTranslatable&) {
                result = kSkipped;
                ++skipped;
            } catch (const InvalidViewUpdate&) {
                result = kSkipped;
                ++skipped;
            } catch (const InvalidView&) {
                result = kEscaped; // packing failed: outside the tuple space
                ++translations;
            }
            table.endpoint[s_idx * m + vt] = result;
        }
    }
    table.translations = translations;
    table.skipped = skipped;
    return table;
}

namespace {

struct LawViolation {
    uint64_t key = std::numeric_limits<uint64_t>::max();
    int phase = 0; // 0 identity, 1 commutativity, 2 composition
    size_t state = 0, v1 = 0, v2 = 0;
    std::string detail;

    bool better_than(const LawViolation& o) const { return key < o.key; }
};

uint64_t law_key(size_t s, int phase, size_t v1, size_t v2) {
    return (uint64_t(s) << 34) | (uint64_t(phase) << 32) | (uint64_t(v1) << 16) | uint64_t(v2);
}

TranslatorReport report_from_table(const TranslationTable& table, Exec exec) {
    const size_t n = table.eval_of.size();
    const size_t m = table.view_states.size();
    TranslatorReport report;
    report.state_count = n;
    report.view_state_count = m;
    report.translations = table.translations;
    report.skipped = table.skipped;

    bool comm_ok = true, id_ok = true, comp_ok = true;
    uint64_t triples = 0;
    LawViolation best;

    const bool par = exec == Exec::Parallel;
#ifdef _OPENMP
#pragma omp parallel if (par)
#else
    (void)par;
#endif
    {
        LawViolation local;
        bool l_comm = true, l_id = true, l_comp = true;
        uint64_t l_triples = 0;
#ifdef _OPENMP
#pragma omp for schedule(static) nowait
#endif
        for (long long si = 0; si < static_cast<long long>(n); ++si) {
            const size_t s = static_cast<size_t>(si);
            const size_t v0 = static_cast<size_t>(table.eval_of[s]);
            // identity preservation: the empty arrow must fix the state
            const int32_t self = table.at(s, v0);
            if (self != static_cast<int32_t>(s)) {
                l_id = false;
                LawViolation v{law_key(s, 0, v0, 0), 0, s, v0, 0,
                               self == TranslationTable::kSkipped
                                   ? "strategy refuses the identity view update"
                                   : "identity view update moves the base state"};
                if (v.better_than(local)) local = v;
            }
            // commutativity: a translation must land on a state whose view
            // value is the update's target
            for (size_t vt = 0; vt < m; ++vt) {
                const int32_t e = table.at(s, vt);
                if (e == TranslationTable::kSkipped) continue;
                if (e == kEscaped) {
                    l_comm = false;
                    LawViolation v{law_key(s, 1, vt, 0), 1, s, vt, 0,
                                   "translation leaves the enumerated state space"};
                    if (v.better_than(local)) local = v;
                    continue;
                }
                if (table.eval_of[e] != static_cast<int32_t>(vt)) {
                    l_comm = false;
                    LawViolation v{law_key(s, 1, vt, 0), 1, s, vt, 0,
                                   "evaluating the translated state does not give the updated view"};
                    if (v.better_than(local)) local = v;
                }
            }
            // composition: translating the composite equals translating in
            // two steps through the intermediate state
            for (size_t v1 = 0; v1 < m; ++v1) {
                const int32_t e1 = table.at(s, v1);
                if (e1 < 0) continue;
                for (size_t v2 = 0; v2 < m; ++v2) {
                    const int32_t e2 = table.at(static_cast<size_t>(e1), v2);
                    if (e2 < 0) continue;
                    ++l_triples;
                    const int32_t direct = table.at(s, v2);
                    if (direct != e2) {
                        l_comp = false;
                        LawViolation v{law_key(s, 2, v1, v2), 2, s, v1, v2,
                                       direct == TranslationTable::kSkipped
                                           ? "composite update is refused though the two-step route exists"
                                           : "two-step route and composite translation disagree"};
                        if (v.better_than(local)) local = v;
                    }
                }
            }
        }
#ifdef _OPENMP
#pragma omp critical
#endif
        {
            comm_ok = comm_ok && l_comm;
            id_ok = id_ok && l_id;
            comp_ok = comp_ok && l_comp;
            triples += l_triples;
            if (local.better_than(best)) best = local;
        }
    }

    report.commutativity = comm_ok;
    report.identity = id_ok;
    report.composition = comp_ok;
    report.triples_checked = triples;
    if (best.key != std::numeric_limits<uint64_t>::max()) {
        LawWitness w;
        w.state = best.state;
        if (best.phase == 2) {
            w.first = table.arrow(best.state, best.v1);
            const int32_t mid = table.at(best.state, best.v1);
            ViewUpdate second;
            const auto& from = table.view_states[table.eval_of[mid]].as_tables();
            const auto& to = table.view_states[best.v2].as_tables();
            for (size_t i = 0; i < from.size(); ++i) {
                second.add.push_back(to[i].set_minus(from[i]));
                second.del.push_back(from[i].set_minus(to[i]));
            }
            w.second = std::move(second);
        } else {
            w.first = table.arrow(best.state, best.v1);
        }
        w.detail = best.detail;
        report.witness = std::move(w);
    }
    return report;
}

} // namespace

TranslatorReport check_translator(const ViewDef& view, const TranslationStrategy& strategy,
                                  const StateSpace& space, Exec exec) {
    TranslationTable table = TranslationTable::build(view, strategy, space, exec);
    return report_from_table(table, exec);
}

TranslatorReport check_translator_reference(const ViewDef& view,
                                            const TranslationStrategy& strategy,
                                            const StateSpace& space) {
    // Straight-line restatement of the laws over rich states, without the
    // memoized table; used to validate the kernel on small fixtures.
    require_strategy_match(view, strategy);
    TranslatorReport report;
    const size_t n = space.size();
    report.state_count = n;

    std::vector<DatabaseState> states;
    states.reserve(n);
    for (Packed p : space.states()) states.push_back(space.unpack(p));

    std::vector<ViewState> values;
    values.reserve(n);
    for (const auto& s : states) values.push_back(eval(view, space.schema(), s));

    std::vector<ViewState> vs;
    std::vector<int> eval_of(n);
    std::map<ViewState, int> ids;
    for (size_t i = 0; i < n; ++i) {
        auto [it, fresh] = ids.emplace(values[i], static_cast<int>(vs.size()));
        if (fresh) vs.push_back(values[i]);
        eval_of[i] = it->second;
    }
    const size_t m = vs.size();
    report.view_state_count = m;

    auto arrow_between = [&](int from, int to) {
        const auto& a = vs[from].as_tables();
        const auto& b = vs[to].as_tables();
        ViewUpdate u;
        for (size_t i = 0; i < a.size(); ++i) {
            u.add.push_back(b[i].set_minus(a[i]));
            u.del.push_back(a[i].set_minus(b[i]));
        }
        return u;
    };

    // endpoint of the translation, or nullopt when the strategy refuses
    auto translated = [&](size_t s_idx, size_t vt) -> std::optional<size_t> {
        ViewUpdate u = arrow_between(eval_of[s_idx], static_cast<int>(vt));
        Update t;
        try {
            t = translate(view, strategy, u, space.schema(), states[s_idx]);
            ++report.translations;
        } catch (const NotTranslatable&) {
            ++report.skipped;
            return std::nullopt;
        } catch (const InvalidViewUpdate&) {
            ++report.skipped;
            return std::nullopt;
        }
        DatabaseState reached = apply(states[s_idx], t);
        std::optional<size_t> idx;
        try {
            idx = space.index_of(space.pack(reached));
        } catch (const InvalidView&) {
            idx = std::nullopt;
        }
        if (!idx) {
            if (report.commutativity) {
                report.commutativity = false;
                report.witness = LawWitness{s_idx, u, std::nullopt,
                                            "translation leaves the enumerated state space"};
            }
            return std::nullopt;
        }
        return idx;
    };

    // The reference recomputes translations on demand; counts therefore
    // differ from the kernel's table build and are not compared in tests.
    for (size_t s = 0; s < n; ++s) {
        auto self = translated(s, eval_of[s]);
        if (!self || *self != s) {
            if (report.identity) {
                report.identity = false;
                if (!report.witness)
                    report.witness = LawWitness{s, arrow_between(eval_of[s], eval_of[s]),
                                                std::nullopt, "identity view update moves the base state"};
            }
        }
        for (size_t vt = 0; vt < m; ++vt) {
            auto e = translated(s, vt);
            if (!e) continue;
            if (eval_of[*e] != static_cast<int>(vt)) {
                if (report.commutativity) {
                    report.commutativity = false;
                    if (!report.witness)
                        report.witness =
                            LawWitness{s, arrow_between(eval_of[s], static_cast<int>(vt)),
                                       std::nullopt,
                                       "evaluating the translated state does not give the updated view"};
                }
                continue;
            }
            for (size_t v2 = 0; v2 < m; ++v2) {
                auto e2 = translated(*e, v2);
                if (!e2) continue;
                ++report.triples_checked;
                auto direct = translated(s, v2);
                if (!direct || *direct != *e2) {
                    if (report.composition) {
                        report.composition = false;
                        if (!report.witness)
                            report.witness = LawWitness{
                                s, arrow_between(eval_of[s], static_cast<int>(vt)),
                                arrow_between(static_cast<int>(vt), static_cast<int>(v2)),
                                "two-step route and composite translation disagree"};
                    }
                }
            }
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Join classification
// ---------------------------------------------------------------------------

const char* join_class_text(JoinClass c) {
    switch (c) {
    case JoinClass::Hierarchical: return "Hierarchical";
    case JoinClass::ForeignKey: return "ForeignKey";
    case JoinClass::Computational: return "Computational";
    }
    return "?";
}

JoinClass classify_join(const DatabaseSchema& schema, const ViewDef& join) {
    int left, right;
    std::vector<GenericJoinDef::Cond> conds;
    if (const auto* h = join.as<HierJoinDef>()) {
        left = h->parent;
        right = h->child;
        for (auto [a, b] : h->on) conds.push_back({a, CmpOp::Eq, b});
    } else if (const auto* f = join.as<FKJoinDef>()) {
        left = f->local;
        right = f->foreign;
        for (auto [a, b] : f->on) conds.push_back({a, CmpOp::Eq, b});
    } else if (const auto* g = join.as<GenericJoinDef>()) {
        left = g->left;
        right = g->right;
        conds = g->on;
    } else {
        throw InvalidView(std::string("cannot classify a ") + join.kind_name() + " view");
    }

    for (const auto& c : conds)
        if (c.op != CmpOp::Eq) return JoinClass::Computational;

    if (schema.keys[left].empty() && schema.keys[right].empty())
        throw MissingKeyMetadata("neither joined table declares keys");

    auto as_set = [](std::vector<int> v) { return std::set<int>(v.begin(), v.end()); };
    std::set<int> left_cols, right_cols;
    for (const auto& c : conds) {
        left_cols.insert(c.left_column);
        right_cols.insert(c.right_column);
    }

    auto hier_fits = [&](int parent, int child, const std::set<int>& pcols,
                         const std::set<int>& ccols) {
        const auto& pk = schema.keys[parent].unique_key;
        const auto& ck = schema.keys[child].unique_key;
        if (!pk || !ck) return false;
        if (as_set(*pk) != pcols) return false;           // join uses the parent's key
        std::set<int> child_key = as_set(*ck);
        for (int c : ccols)
            if (!child_key.count(c)) return false;        // and part of the child's key
        return true;
    };
    if (hier_fits(left, right, left_cols, right_cols) ||
        hier_fits(right, left, right_cols, left_cols))
        return JoinClass::Hierarchical;

    auto fk_fits = [&](int local, int foreign, const std::set<int>& lcols,
                       const std::set<int>& fcols) {
        const auto& fk_key = schema.keys[foreign].unique_key;
        if (!fk_key || as_set(*fk_key) != fcols) return false;
        if (schema.keys[local].unique_key) {
            std::set<int> lk = as_set(*schema.keys[local].unique_key);
            for (int c : lcols)
                if (lk.count(c)) return false; // join columns must be non-key locally
        }
        for (const auto& c : conds) {
            const int lc = local == left ? c.left_column : c.right_column;
            const int fc = local == left ? c.right_column : c.left_column;
            bool declared = false;
            for (const auto& fk : schema.keys[local].foreign_keys)
                if (fk.column == lc && fk.foreign_table == foreign && fk.foreign_column == fc)
                    declared = true;
            if (!declared) return false;
        }
        return true;
    };
    if (fk_fits(left, right, left_cols, right_cols) ||
        fk_fits(right, left, right_cols, left_cols))
        return JoinClass::ForeignKey;

    return JoinClass::Computational;
}

} // namespace ccv
