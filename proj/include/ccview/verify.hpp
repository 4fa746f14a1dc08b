#pragma once

#include "ccview/translate.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ccv {

/// The equivalence over base states induced by a translator: s' relates to s
/// when some translated view update carries s' to s. Built as connected
/// components of the reachability graph; local inverses make single-step
/// reachability symmetric, which the construction asserts rather than
/// assumes.
struct InducedEquivalence {
    Partition partition;
    size_t edge_count = 0;
};

/// Throws NotATranslator when the strategy fails the laws (the partition is
/// undefined per the theory) unless force is set, which computes the raw
/// reachability components anyway for diagnostics.
InducedEquivalence induced_partition(const ViewDef& view, const TranslationStrategy& strategy,
                                     const StateSpace& space, Exec exec = Exec::Parallel,
                                     bool force = false);

struct CorrespondenceReport {
    bool pass = false;
    /// On pass: for each induced block, the complement value its states share.
    std::vector<std::pair<std::vector<size_t>, ViewState>> witness;
    /// On fail: two state indices the two partitions disagree about.
    std::optional<std::pair<size_t, size_t>> violating_states;
    std::string detail;
};

/// Checks that the partition induced by the translator equals the partition
/// of the complement view block-for-block, i.e. that equivalence classes are
/// in one-to-one correspondence with complement states.
CorrespondenceReport correspondence(const ViewDef& view, const TranslationStrategy& strategy,
                                    const ViewDef& complement, const StateSpace& space,
                                    Exec exec = Exec::Parallel);

struct LagerakReport {
    bool pass = true;
    size_t comparisons = 0;
    std::optional<std::pair<size_t, size_t>> colliding_states;
    std::string detail;
};

/// Verifies that translated updates never merge distinct base states with
/// equal view values: for all s1 != s2 with eval(s1) = eval(s2) and every
/// view update translated at both, the targets differ.
LagerakReport lagerak_check(const ViewDef& view, const TranslationStrategy& strategy,
                            const StateSpace& space, Exec exec = Exec::Parallel);

/// Applies the translation of the delete-every-view-row update at s and
/// returns the residual base state - the heuristic's complement guess.
DatabaseState delete_all_heuristic(const ViewDef& view, const TranslationStrategy& strategy,
                                   const DatabaseSchema& schema, const DatabaseState& s);

} // namespace ccv
