#include "ccview/statespace.hpp"

#include <bit>
#include <limits>
#include <numeric>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ccv {

namespace {

std::vector<Tuple> build_tuple_space(const DatabaseSchema& schema, int table) {
    const auto& ts = schema.tables[table];
    std::vector<Tuple> out;
    Tuple current(ts.width(), 0);
    // Odometer over the column domains; the last column turns fastest, which
    // yields lexicographic order because domain values are already ordered.
    while (true) {
        out.push_back(current);
        int c = ts.width() - 1;
        while (c >= 0) {
            if (++current[c] < schema.column_domain(table, c).size()) break;
            current[c] = 0;
            --c;
        }
        if (c < 0) break;
    }
    return out;
}

} // namespace

StateSpace StateSpace::enumerate(const DatabaseSchema& schema, const EnumerationOptions& opts) {
    schema.validate();
    StateSpace space;
    space.schema_ = schema;

    const int nt = schema.table_count();
    space.tuple_space_.resize(nt);
    for (int t = 0; t < nt; ++t) {
        auto tuples = build_tuple_space(schema, t);
        if (opts.row_cap && static_cast<int>(tuples.size()) > *opts.row_cap)
            tuples.resize(*opts.row_cap);
        if (static_cast<int>(tuples.size()) > opts.max_tuples_per_table)
            throw StateSpaceTooLarge("table '" + schema.tables[t].name + "' has " +
                                     std::to_string(tuples.size()) +
                                     " possible tuples, bound is " +
                                     std::to_string(opts.max_tuples_per_table));
        space.tuple_space_[t] = std::move(tuples);
    }

    space.bit_offset_.resize(nt);
    int total = 0;
    for (int t = nt - 1; t >= 0; --t) { // table 0 gets the highest bits
        space.bit_offset_[t] = total;
        total += static_cast<int>(space.tuple_space_[t].size());
    }
    space.total_bits_ = total;
    if (total > opts.max_total_bits)
        throw StateSpaceTooLarge("schema spans " + std::to_string(total) +
                                 " tuples in total, bound is " +
                                 std::to_string(opts.max_total_bits));

    // Per-table mask validity: declared unique keys exclude states holding
    // two rows with equal key projections, and exclude rows whose non-key
    // columns are all null (nothing outside the key survives in them).
    std::vector<std::vector<uint8_t>> table_ok(nt);
    for (int t = 0; t < nt; ++t) {
        const int n = static_cast<int>(space.tuple_space_[t].size());
        std::vector<uint8_t> ok(size_t{1} << n, 1);
        if (opts.respect_constraints && schema.keys[t].unique_key) {
            const auto& uk = *schema.keys[t].unique_key;
            auto key_of = [&](const Tuple& row) {
                Tuple k;
                for (int c : uk) k.push_back(row[c]);
                return k;
            };
            Packed forbidden = 0;
            const int width = schema.tables[t].width();
            for (int i = 0; i < n; ++i) {
                bool has_non_key = false, all_null = true;
                for (int c = 0; c < width; ++c) {
                    if (std::find(uk.begin(), uk.end(), c) != uk.end()) continue;
                    has_non_key = true;
                    if (!schema.column_domain(t, c).is_null(space.tuple_space_[t][i][c]))
                        all_null = false;
                }
                if (has_non_key && all_null) forbidden |= Packed{1} << i;
            }
            std::vector<Packed> conflicts;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (key_of(space.tuple_space_[t][i]) == key_of(space.tuple_space_[t][j]))
                        conflicts.push_back((Packed{1} << i) | (Packed{1} << j));
            for (Packed m = 0; m < (Packed{1} << n); ++m) {
                if (m & forbidden) { ok[m] = 0; continue; }
                for (Packed pair : conflicts)
                    if ((m & pair) == pair) { ok[m] = 0; break; }
            }
        }
        table_ok[t] = std::move(ok);
    }

    // Foreign keys: each referencing row needs a supporting row in the
    // foreign table. Precompute supporter masks per referencing tuple.
    struct FkCheck {
        int table;
        int foreign_table;
        std::vector<Packed> supporters; // per tuple of `table`
    };
    std::vector<FkCheck> fk_checks;
    if (opts.respect_constraints) {
        for (int t = 0; t < nt; ++t) {
            for (const auto& fk : schema.keys[t].foreign_keys) {
                FkCheck check{t, fk.foreign_table, {}};
                check.supporters.reserve(space.tuple_space_[t].size());
                for (const auto& row : space.tuple_space_[t]) {
                    Packed m = 0;
                    const auto& ft = space.tuple_space_[fk.foreign_table];
                    for (size_t q = 0; q < ft.size(); ++q)
                        if (ft[q][fk.foreign_column] == row[fk.column]) m |= Packed{1} << q;
                    check.supporters.push_back(m);
                }
                fk_checks.push_back(std::move(check));
            }
        }
    }

    const Packed universe = total == 0 ? 0 : ((total >= 32 ? 0 : (Packed{1} << total)) - 1);
    space.valid_.assign(size_t{1} << total, 0);
    for (Packed p = 0;; ++p) {
        bool ok = true;
        for (int t = 0; t < nt && ok; ++t) {
            Packed m = (p >> space.bit_offset_[t]) &
                       ((Packed{1} << space.tuple_space_[t].size()) - 1);
            ok = table_ok[t][m];
        }
        for (const auto& check : fk_checks) {
            if (!ok) break;
            Packed local = (p >> space.bit_offset_[check.table]) &
                           ((Packed{1} << space.tuple_space_[check.table].size()) - 1);
            Packed foreign = (p >> space.bit_offset_[check.foreign_table]) &
                             ((Packed{1} << space.tuple_space_[check.foreign_table].size()) - 1);
            while (local) {
                int bit = std::countr_zero(local);
                local &= local - 1;
                if (!(foreign & check.supporters[bit])) { ok = false; break; }
            }
        }
        if (ok) {
            space.valid_[p] = 1;
            space.states_.push_back(p);
        }
        if (p == universe) break;
    }
    return space;
}

DatabaseState StateSpace::unpack(Packed p) const {
    DatabaseState s;
    s.tables.resize(schema_.table_count());
    for (int t = 0; t < schema_.table_count(); ++t) {
        Packed m = (p >> bit_offset_[t]) & ((Packed{1} << tuple_space_[t].size()) - 1);
        while (m) {
            int bit = std::countr_zero(m);
            m &= m - 1;
            s.tables[t].rows.push_back(tuple_space_[t][bit]); // ascending bits keep rows sorted
        }
    }
    return s;
}

Packed StateSpace::pack(const DatabaseState& s) const {
    if (static_cast<int>(s.tables.size()) != schema_.table_count())
        throw SchemaMismatch("state table count does not match schema");
    Packed p = 0;
    for (int t = 0; t < schema_.table_count(); ++t) {
        for (const auto& row : s.tables[t].rows) {
            auto it = std::lower_bound(tuple_space_[t].begin(), tuple_space_[t].end(), row);
            if (it == tuple_space_[t].end() || *it != row)
                throw InvalidView("row outside the enumerated tuple space of table '" +
                                  schema_.tables[t].name + "'");
            p |= Packed{1} << (bit_offset_[t] + (it - tuple_space_[t].begin()));
        }
    }
    return p;
}

std::optional<size_t> StateSpace::index_of(Packed p) const {
    if (p >= valid_.size() || !valid_[p]) return std::nullopt;
    auto it = std::lower_bound(states_.begin(), states_.end(), p);
    return static_cast<size_t>(it - states_.begin());
}

size_t StateSpace::index_of_state(const DatabaseState& s) const {
    auto idx = index_of(pack(s));
    if (!idx)
        throw NotApplicable("state is not a member of the enumerated space");
    return *idx;
}

bool StateSpace::satisfies_constraints(Packed p) const {
    return p < valid_.size() && valid_[p];
}

Packed StateSpace::table_mask(int table) const {
    return ((Packed{1} << tuple_space_[table].size()) - 1) << bit_offset_[table];
}

std::vector<DatabaseState> enumerate_states(const DatabaseSchema& schema,
                                            const EnumerationOptions& opts) {
    StateSpace space = StateSpace::enumerate(schema, opts);
    std::vector<DatabaseState> out;
    out.reserve(space.size());
    for (Packed p : space.states()) out.push_back(space.unpack(p));
    return out;
}

// ---------------------------------------------------------------------------
// Complete-set verification
// ---------------------------------------------------------------------------

namespace {

/// Encodes a violation so the smallest key is the first counterexample in
/// canonical order (layer, then loop indices).
struct Violation {
    uint64_t key = std::numeric_limits<uint64_t>::max();
    CompleteSetCounterexample info;

    bool better_than(const Violation& o) const { return key < o.key; }
};

uint64_t violation_key(int layer, size_t a, size_t b, size_t c) {
    auto clamp20 = [](size_t x) { return uint64_t(std::min<size_t>(x, (1u << 20) - 1)); };
    return (uint64_t(layer) << 60) | (clamp20(a) << 40) | (clamp20(b) << 20) | clamp20(c);
}

} // namespace

CompleteSetReport check_complete_set(const StateSpace& space, Exec exec) {
    CompleteSetReport report;
    const auto& states = space.states();
    const size_t n = states.size();
    report.state_count = n;

    const int total = space.total_bits();
    const Packed universe = total == 0 ? 0 : static_cast<Packed>((uint64_t{1} << total) - 1);

    Violation best;
    uint64_t pairs = 0, updates = 0, triples = 0;

    const bool par = exec == Exec::Parallel;
#ifdef _OPENMP
#pragma omp parallel if (par)
#else
    (void)par;
#endif
    {
        Violation local;
        uint64_t local_pairs = 0, local_updates = 0, local_triples = 0;
#ifdef _OPENMP
#pragma omp for schedule(static) nowait
#endif
        for (long long ai = 0; ai < static_cast<long long>(n); ++ai) {
            const Packed a = states[static_cast<size_t>(ai)];
            // identity at a: apply with empty add/del sets
            const Packed add0 = 0, del0 = 0;
            if (((a | add0) & ~del0) != a) {
                Violation v{violation_key(0, ai, 0, 0),
                            {"identity", static_cast<size_t>(ai), 0, 0, "apply(a, id) != a"}};
                if (v.better_than(local)) local = v;
            }
            for (size_t bi = 0; bi < n; ++bi) {
                const Packed b = states[bi];
                ++local_pairs;
                const Packed add = b & ~a, del = a & ~b;
                // diff is normalized and apply(a, diff(a,b)) == b
                if ((add & a) || (del & ~a) || (((a | add) & ~del) != b)) {
                    Violation v{violation_key(1, ai, bi, 0),
                                {"diff-apply", static_cast<size_t>(ai), bi, 0,
                                 "apply(a, diff(a,b)) != b"}};
                    if (v.better_than(local)) local = v;
                }
                // local inverse carries b back to a
                if (((b | del) & ~add) != a) {
                    Violation v{violation_key(2, ai, bi, 0),
                                {"local-inverse", static_cast<size_t>(ai), bi, 0,
                                 "apply(b, invert(u)) != a"}};
                    if (v.better_than(local)) local = v;
                }
                // composition closed form vs the diff of the endpoints
                const Packed u_add = add, u_del = del;
                for (size_t ci = 0; ci < n; ++ci) {
                    const Packed c = states[ci];
                    ++local_triples;
                    const Packed v_add = c & ~b, v_del = b & ~c;
                    Packed w_add = (v_add | u_add) & ~v_del;
                    Packed w_del = (v_del | u_del) & ~v_add;
                    w_add &= ~a;
                    w_del &= a;
                    if (w_add != (c & ~a) || w_del != (a & ~c)) {
                        Violation v{violation_key(4, ai, bi, ci),
                                    {"composition", static_cast<size_t>(ai), bi, ci,
                                     "compose(v, u) != diff(a, c)"}};
                        if (v.better_than(local)) local = v;
                    }
                }
            }
            // uniqueness: every normalized update applicable at a whose target
            // stays in the space is recovered by diff of the endpoints
            const Packed clear = universe & ~a;
            Packed add = clear;
            while (true) {
                Packed del = a;
                while (true) {
                    const Packed b = (a | add) & ~del;
                    if (space.satisfies_constraints(b)) {
                        ++local_updates;
                        if ((b & ~a) != add || (a & ~b) != del) {
                            Violation v{violation_key(3, ai, size_t(add), size_t(del)),
                                        {"uniqueness", static_cast<size_t>(ai), size_t(add),
                                         size_t(del), "diff(a, apply(a,u)) != u"}};
                            if (v.better_than(local)) local = v;
                        }
                    }
                    if (del == 0) break;
                    del = (del - 1) & a;
                }
                if (add == 0) break;
                add = (add - 1) & clear;
            }
        }
#ifdef _OPENMP
#pragma omp critical
#endif
        {
            if (local.better_than(best)) best = local;
            pairs += local_pairs;
            updates += local_updates;
            triples += local_triples;
        }
    }

    report.pairs_checked = pairs;
    report.updates_checked = updates;
    report.triples_checked = triples;
    if (best.key != std::numeric_limits<uint64_t>::max()) {
        report.pass = false;
        report.counterexample = best.info;
    }
    return report;
}

CompleteSetReport check_complete_set_reference(const StateSpace& space) {
    CompleteSetReport report;
    const size_t n = space.size();
    report.state_count = n;

    std::vector<DatabaseState> rich;
    rich.reserve(n);
    for (Packed p : space.states()) rich.push_back(space.unpack(p));

    auto fail = [&](const char* law, size_t a, size_t b, size_t c, const char* detail) {
        if (report.pass) {
            report.pass = false;
            report.counterexample = CompleteSetCounterexample{law, a, b, c, detail};
        }
    };

    for (size_t ai = 0; ai < n; ++ai) {
        const DatabaseState& a = rich[ai];
        if (apply(a, identity(space.schema())) != a)
            fail("identity", ai, 0, 0, "apply(a, id) != a");
        for (size_t bi = 0; bi < n; ++bi) {
            const DatabaseState& b = rich[bi];
            ++report.pairs_checked;
            Update u = diff(a, b);
            if (normalized(u, a) != u)
                fail("diff-apply", ai, bi, 0, "diff(a,b) is not normalized at a");
            if (apply(a, u) != b)
                fail("diff-apply", ai, bi, 0, "apply(a, diff(a,b)) != b");
            if (apply(b, invert(u)) != a)
                fail("local-inverse", ai, bi, 0, "apply(b, invert(u)) != a");
            for (size_t ci = 0; ci < n; ++ci) {
                ++report.triples_checked;
                Update v = diff(b, rich[ci]);
                if (compose(v, u, a) != diff(a, rich[ci]))
                    fail("composition", ai, bi, ci, "compose(v, u) != diff(a, c)");
            }
        }
        // uniqueness over all normalized updates at a with in-space targets:
        // build the update from its masks, apply it, and require diff of the
        // endpoints to recover it exactly
        const int total = space.total_bits();
        const Packed universe = total == 0 ? 0 : static_cast<Packed>((uint64_t{1} << total) - 1);
        const Packed pa = space.state_at(ai);
        const Packed clear = universe & ~pa;
        auto update_from_masks = [&](Packed madd, Packed mdel) {
            Update u;
            const int nt = space.schema().table_count();
            u.add.resize(nt);
            u.del.resize(nt);
            for (int t = 0; t < nt; ++t) {
                const size_t bits = space.tuple_space()[t].size();
                for (size_t bit = 0; bit < bits; ++bit) {
                    const Packed flag = Packed{1} << (space.table_bit_offset(t) + bit);
                    if (madd & flag) u.add[t].insert(space.tuple_space()[t][bit]);
                    if (mdel & flag) u.del[t].insert(space.tuple_space()[t][bit]);
                }
            }
            return u;
        };
        Packed madd = clear;
        while (true) {
            Packed mdel = pa;
            while (true) {
                const Packed pb = (pa | madd) & ~mdel;
                if (space.satisfies_constraints(pb)) {
                    ++report.updates_checked;
                    Update u = update_from_masks(madd, mdel);
                    if (!applicable(a, u))
                        fail("uniqueness", ai, size_t(madd), size_t(mdel),
                             "normalized update not applicable at its source");
                    DatabaseState reached = apply(a, u);
                    if (space.pack(reached) != pb)
                        fail("uniqueness", ai, size_t(madd), size_t(mdel),
                             "apply does not reach the intended target");
                    if (diff(a, reached) != u)
                        fail("uniqueness", ai, size_t(madd), size_t(mdel),
                             "diff(a, apply(a,u)) != u");
                }
                if (mdel == 0) break;
                mdel = (mdel - 1) & pa;
            }
            if (madd == 0) break;
            madd = (madd - 1) & clear;
        }
    }
    return report;
}

} // namespace ccv
