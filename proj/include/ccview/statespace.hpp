#pragma once

#include "ccview/exec.hpp"
#include "ccview/relcore.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ccv {

/// Bitmask encoding of a database state. Tuple j of a table maps to one bit;
/// table 0 occupies the highest bits so that ascending packed values match
/// the canonical enumeration order (tuples lexicographic per domain order,
/// subsets ordered by bitmask, tables in schema order, first table outermost).
using Packed = uint32_t;

struct EnumerationOptions {
    int max_tuples_per_table = 12;
    int max_total_bits = 24;
    /// When true (the default), states violating declared unique keys or
    /// foreign keys are excluded, as is any row of a uniquely-keyed table
    /// whose non-key columns are all null (such a row holds no information
    /// the discipline could ever reconstruct).
    bool respect_constraints = true;
    /// Caps each table's tuple space independently of domain sizes; useful
    /// for degenerate fixtures (0 yields the single empty state).
    std::optional<int> row_cap;
};

/// The enumerated, constraint-filtered state space of a schema, with the
/// packed codec used by the exhaustive kernels.
class StateSpace {
public:
    static StateSpace enumerate(const DatabaseSchema& schema,
                                const EnumerationOptions& opts = {});

    const DatabaseSchema& schema() const { return schema_; }
    const std::vector<std::vector<Tuple>>& tuple_space() const { return tuple_space_; }
    const std::vector<Packed>& states() const { return states_; }
    size_t size() const { return states_.size(); }
    int total_bits() const { return total_bits_; }

    Packed state_at(size_t i) const { return states_[i]; }
    DatabaseState unpack(Packed p) const;
    Packed pack(const DatabaseState& s) const; // throws InvalidView if a row is outside the tuple space
    /// Index of a packed state in the enumeration, or nullopt when the state
    /// is not a member (e.g. it violates a declared constraint).
    std::optional<size_t> index_of(Packed p) const;
    size_t index_of_state(const DatabaseState& s) const; // throws NotApplicable when absent

    bool satisfies_constraints(Packed p) const;

    int table_bit_offset(int table) const { return bit_offset_[table]; }
    int table_bit_count(int table) const { return static_cast<int>(tuple_space_[table].size()); }
    /// Mask selecting table t's bits within a packed word.
    Packed table_mask(int table) const;

private:
    DatabaseSchema schema_;
    std::vector<std::vector<Tuple>> tuple_space_;
    std::vector<int> bit_offset_;
    int total_bits_ = 0;
    std::vector<Packed> states_;
    std::vector<uint8_t> valid_; // indexed by packed value
};

/// Convenience wrapper matching the operation surface: the canonical list of
/// states as rich values.
std::vector<DatabaseState> enumerate_states(const DatabaseSchema& schema,
                                            const EnumerationOptions& opts = {});

struct CompleteSetCounterexample {
    std::string law;  // which clause failed
    size_t state_a = 0, state_b = 0, state_c = 0;
    std::string detail;
};

struct CompleteSetReport {
    bool pass = true;
    size_t state_count = 0;
    size_t pairs_checked = 0;
    size_t updates_checked = 0;
    size_t triples_checked = 0;
    std::optional<CompleteSetCounterexample> counterexample;
};

/// Exhaustive check of the update-algebra laws over the whole space:
///   - apply(a, diff(a, b)) == b for every pair, and diff is normalized;
///   - every normalized update applicable at a state with an in-space target
///     is recovered by diff (uniqueness: arrows biject with state pairs);
///   - composition closed form equals the diff of the endpoints (all triples);
///   - every update has a local inverse; identities act as identities.
/// This is the packed-kernel implementation; Exec::Parallel distributes the
/// outer loops over OpenMP threads.
CompleteSetReport check_complete_set(const StateSpace& space, Exec exec = Exec::Parallel);

/// Serial reference implementation of the same check built directly on the
/// public diff/apply/compose/invert operations over rich states. Kept for
/// cross-validation of the packed kernel; intended for small spaces.
CompleteSetReport check_complete_set_reference(const StateSpace& space);

} // namespace ccv
