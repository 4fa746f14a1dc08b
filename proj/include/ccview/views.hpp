#pragma once

#include "ccview/statespace.hpp"

#include <memory>
#include <utility>
#include <variant>
#include <vector>

namespace ccv {

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

const char* cmp_op_text(CmpOp op);

/// Boolean expression over one table's columns. Comparisons use the domain's
/// declared value order; any comparison other than =/!= involving a null
/// value evaluates to false, so evaluation is total.
struct Predicate {
    enum class Kind { True, False, CmpConst, CmpCol, IsNull, NotNull, And, Or, Not };

    Kind kind = Kind::True;
    int column = 0;          // CmpConst/CmpCol/IsNull/NotNull
    CmpOp op = CmpOp::Eq;    // CmpConst/CmpCol
    Value constant = 0;      // CmpConst
    int rhs_column = 0;      // CmpCol
    std::vector<Predicate> children; // And/Or (n-ary), Not (1)

    static Predicate make_true() { return {}; }
    static Predicate make_false() { Predicate p; p.kind = Kind::False; return p; }
    static Predicate cmp_const(int col, CmpOp op, Value c);
    static Predicate cmp_col(int col, CmpOp op, int rhs);
    static Predicate is_null(int col, bool positive);
    static Predicate negation(Predicate inner);
    static Predicate conjunction(std::vector<Predicate> ps);
    static Predicate disjunction(std::vector<Predicate> ps);

    bool operator==(const Predicate&) const = default;
};

bool eval_predicate(const Predicate& p, const DatabaseSchema& schema, int table,
                    const Tuple& row);

struct ViewDef;
using ViewPtr = std::shared_ptr<const ViewDef>;

struct SelectionDef {
    int table = 0;
    Predicate predicate;
    bool operator==(const SelectionDef&) const = default;
};

struct ProjectionDef {
    int table = 0;
    std::vector<int> keep;          // kept column indices, in output order
    std::vector<int> drop_if_null;  // rows with a null in any of these are excluded
    bool operator==(const ProjectionDef&) const = default;
};

struct UnionDef {
    int left = 0;
    int right = 0;
    bool operator==(const UnionDef&) const = default;
};

struct HierJoinDef {
    int parent = 0;
    int child = 0;
    std::vector<std::pair<int, int>> on; // (parent column, child column)
    bool operator==(const HierJoinDef&) const = default;
};

struct FKJoinDef {
    int local = 0;
    int foreign = 0;
    std::vector<std::pair<int, int>> on; // (local column, foreign column)
    bool operator==(const FKJoinDef&) const = default;
};

/// Rows of `left` with no `right` row matching on the given columns. This is
/// the shape of a hierarchical join's complement (the childless parents).
struct AntiJoinDef {
    int left = 0;
    int right = 0;
    std::vector<std::pair<int, int>> on;
    bool operator==(const AntiJoinDef&) const = default;
};

/// A general theta join, used as input to the join classifier; inequality
/// conditions make a join computational rather than structural.
struct GenericJoinDef {
    int left = 0;
    int right = 0;
    struct Cond {
        int left_column;
        CmpOp op;
        int right_column;
        bool operator==(const Cond&) const = default;
    };
    std::vector<Cond> on;
    bool operator==(const GenericJoinDef&) const = default;
};

struct ProductDef {
    ViewPtr left;
    ViewPtr right;
};

/// Explicit state-to-label map; exists to encode views (like the minimal
/// complement counterexample) that no operator expresses over the schema.
struct TabulatedDef {
    std::vector<std::pair<DatabaseState, std::string>> map;
    bool operator==(const TabulatedDef&) const = default;
};

struct ZeroDef {
    bool operator==(const ZeroDef&) const = default;
};
struct OneDef {
    bool operator==(const OneDef&) const = default;
};

struct ViewDef {
    std::variant<SelectionDef, ProjectionDef, UnionDef, HierJoinDef, FKJoinDef,
                 AntiJoinDef, GenericJoinDef, ProductDef, TabulatedDef, ZeroDef,
                 OneDef>
        node;

    template <typename T> const T* as() const { return std::get_if<T>(&node); }
    template <typename T> bool is() const { return std::holds_alternative<T>(node); }
    const char* kind_name() const;
};

bool operator==(const ViewDef& a, const ViewDef& b);

ViewDef make_product(ViewDef left, ViewDef right);

/// A view's value at one database state: an array of table states for
/// operator views, an opaque label for tabulated/zero views, or a pair for
/// products. Totally ordered so view states can be deduplicated canonically.
struct ViewState {
    struct Pair;
    std::variant<std::vector<TableState>, std::string, std::shared_ptr<const Pair>> value;

    static ViewState tables(std::vector<TableState> ts);
    static ViewState label(std::string s);
    static ViewState pair(ViewState l, ViewState r);

    bool is_tables() const { return value.index() == 0; }
    const std::vector<TableState>& as_tables() const { return std::get<0>(value); }
    const std::string& as_label() const { return std::get<1>(value); }
    const Pair& as_pair() const;
};

struct ViewState::Pair {
    ViewState left;
    ViewState right;
};

bool operator==(const ViewState& a, const ViewState& b);
bool operator<(const ViewState& a, const ViewState& b);

/// Checks structural validity of a view against a schema; throws InvalidView.
void validate_view(const ViewDef& view, const DatabaseSchema& schema);

/// Evaluates the view at a state. Operator semantics are set-based: joins
/// concatenate left columns then right columns and collapse duplicates.
ViewState eval(const ViewDef& view, const DatabaseSchema& schema, const DatabaseState& s);

/// Output table schemas of an operator-shaped view (selection, projection,
/// union, joins, one). Throws InvalidView for label-valued or product views,
/// which have no row-set shape to update.
std::vector<TableSchema> view_output_tables(const ViewDef& view, const DatabaseSchema& schema);

/// An equivalence relation over the enumerated states: block ids are dense
/// and numbered by first occurrence, so equal partitions compare equal.
struct Partition {
    std::vector<int> block_of; // one entry per state, in enumeration order
    int block_count = 0;

    bool operator==(const Partition&) const = default;
    std::vector<std::vector<size_t>> blocks() const;
};

/// Canonicalizes arbitrary block labels into first-occurrence numbering.
Partition canonical_partition(const std::vector<int>& labels);

/// True iff every block of p is contained in one block of q.
bool refines(const Partition& p, const Partition& q);

/// Evaluates a view at every enumerated state, in enumeration order.
std::vector<ViewState> eval_over_space(const ViewDef& view, const StateSpace& space,
                                       Exec exec = Exec::Parallel);

/// Groups states by view value: s and s' share a block iff eval agrees.
Partition view_partition(const ViewDef& view, const StateSpace& space,
                         Exec exec = Exec::Parallel);

enum class ViewOrder { GreaterEqual, LessEqual, Equivalent, Incomparable };

const char* view_order_text(ViewOrder o);

/// Compares views by partition refinement: f >= g iff f's partition refines
/// g's (f-equality implies g-equality).
ViewOrder compare_views(const ViewDef& f, const ViewDef& g, const StateSpace& space);

/// True iff f x c distinguishes every state (the product partition has only
/// singleton blocks).
bool is_complement(const ViewDef& f, const ViewDef& c, const StateSpace& space);

/// The constructive complement of an operator view:
///   selection  -> selection with the negated predicate
///   union      -> zero
///   projection -> complement columns, excluded-if-null on its non-key part
///   hier join  -> anti join (parents with no joining child)
///   fk join    -> the whole foreign table
/// Throws NoConstructiveComplement for other shapes.
ViewDef complement_of(const ViewDef& view, const DatabaseSchema& schema);

/// True iff in every state, same-arity output tables of the two views have
/// empty row intersection (different arities intersect vacuously).
bool perfect_decomposition(const ViewDef& f, const ViewDef& c, const StateSpace& space);

} // namespace ccv
