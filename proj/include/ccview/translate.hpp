#pragma once

#include "ccview/views.hpp"

#include <optional>
#include <string>

namespace ccv {

/// A view update has the same add/del structure as a base update, shaped by
/// the view's output tables.
using ViewUpdate = Update;

enum class StrategyKind {
    Selection,  // identity translation; inserts must satisfy the predicate
    Union,      // deletions hit both tables; insert placement per policy
    Projection, // null padding with the all-null deletion rule
    HierJoin,   // child-level edits; parents follow their last child
    FKJoin,     // local-table edits only; the foreign table is off-limits
    Combined,   // fk-style deletes with hier-style inserts (fails the laws)
    Identity    // for the one view: the view update is the base update
};

enum class UnionInsertPolicy { Both, Left, Right };

struct TranslationStrategy {
    StrategyKind kind = StrategyKind::Selection;
    UnionInsertPolicy policy = UnionInsertPolicy::Both;

    bool operator==(const TranslationStrategy&) const = default;
};

const char* strategy_kind_text(StrategyKind k);
const char* union_policy_text(UnionInsertPolicy p);

/// Checks that the strategy applies to the view's operator; throws
/// StrategyMismatch otherwise.
void require_strategy_match(const ViewDef& view, const TranslationStrategy& strategy);

/// Translates a view update at a base state into a base update t such that
/// eval(view, apply(s, t)) = apply(eval(view, s), u) and the view's
/// complement keeps its value. Throws:
///   InvalidViewUpdate  - u not applicable to eval(view, s), or a selection
///                        insert that fails the predicate
///   NotTranslatable    - no complement-preserving target exists (fk insert
///                        with an unknown foreign part; hier insert whose
///                        parent part exists childless)
///   NullNotSupported   - projection padding needs a null the domain lacks
Update translate(const ViewDef& view, const TranslationStrategy& strategy,
                 const ViewUpdate& u, const DatabaseSchema& schema,
                 const DatabaseState& s);

/// Checks whether one fixed base update t is a translation of the view
/// update u: at every enumerated state where u applies to the view image,
/// t applies to the base, commutes with evaluation, and acts as the
/// identity wherever u does.
bool is_translation(const ViewDef& view, const ViewUpdate& u, const Update& t,
                    const StateSpace& space);

struct LawWitness {
    size_t state = 0;              // base state index
    ViewUpdate first;              // u (arrow from eval(state))
    std::optional<ViewUpdate> second; // v, for composition failures
    std::string detail;
};

struct TranslatorReport {
    bool commutativity = true;
    bool identity = true;
    bool composition = true;
    size_t state_count = 0;
    size_t view_state_count = 0;
    size_t translations = 0;
    size_t skipped = 0;        // (state, update) pairs the strategy rejects
    size_t triples_checked = 0;
    std::optional<LawWitness> witness;

    bool pass() const { return commutativity && identity && composition; }
};

/// Exhaustively verifies the translator laws for a strategy over the whole
/// space: every produced translation commutes and preserves identities, and
/// translation distributes over composition of view updates. View updates
/// are quantified over all normalized updates between reachable view states;
/// (state, update) pairs the strategy refuses are excluded from the universe
/// and counted as skipped. The first violation in canonical order is
/// reported.
TranslatorReport check_translator(const ViewDef& view, const TranslationStrategy& strategy,
                                  const StateSpace& space, Exec exec = Exec::Parallel);

/// Serial reference implementation over rich states, kept for testing the
/// kernel; quadratic in view states per base state.
TranslatorReport check_translator_reference(const ViewDef& view,
                                            const TranslationStrategy& strategy,
                                            const StateSpace& space);

enum class JoinClass { Hierarchical, ForeignKey, Computational };

const char* join_class_text(JoinClass c);

/// Classifies a join by declared key structure: hierarchical when the join
/// columns are the parent's unique key and part of the child's key;
/// foreign-key when a non-key local column matches the foreign table's
/// unique key and is declared a foreign key to it; computational otherwise
/// (in particular, any inequality condition). Throws MissingKeyMetadata when
/// neither joined table declares keys.
JoinClass classify_join(const DatabaseSchema& schema, const ViewDef& join);

// --- shared infrastructure for the exhaustive checkers -----------------

/// Memoized translation table over (state, target view state) pairs. The
/// translator-at-state is a pure function of the pair, so every law check
/// reduces to lookups in this table.
struct TranslationTable {
    static constexpr int32_t kSkipped = -1;

    const StateSpace* space = nullptr;
    std::vector<ViewState> view_states;   // canonical order of first appearance
    std::vector<int32_t> eval_of;         // state index -> view state index
    /// endpoint[s * view_states.size() + vt] = resulting state index,
    /// kSkipped when the strategy refuses the pair.
    std::vector<int32_t> endpoint;
    size_t translations = 0;
    size_t skipped = 0;

    int32_t at(size_t state, size_t vt) const {
        return endpoint[state * view_states.size() + vt];
    }
    /// The normalized view update from eval(state) to view_states[vt].
    ViewUpdate arrow(size_t state, size_t vt) const;

    static TranslationTable build(const ViewDef& view, const TranslationStrategy& strategy,
                                  const StateSpace& space, Exec exec);
};

} // namespace ccv
