#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace jsched {

using Time = std::int64_t;

struct IntVar {
    std::int32_t id{-1};
    friend bool operator==(IntVar, IntVar) = default;
};

struct BoolVar {
    std::int32_t id{-1};
    friend bool operator==(BoolVar, BoolVar) = default;
};

enum class BoolState : std::int8_t { Zero = 0, One = 1, Unassigned = 2 };

/// Clause literal, true when `var` holds `value`.
struct Lit {
    BoolVar var;
    bool value{true};

    Lit operator~() const { return {var, !value}; }
    friend bool operator==(Lit, Lit) = default;
};

struct ConstraintId {
    std::int32_t id{-1};
    friend bool operator==(ConstraintId, ConstraintId) = default;
};

enum class ConflictSource : std::uint8_t { Constraint, Nogood, Decision };

struct Conflict {
    ConflictSource source{ConflictSource::Constraint};
    std::int32_t index{-1}; ///< constraint id or nogood index
};

/// Per-job input of the earliness/tardiness objective. The completion time
/// is `last + duration`.
struct EtJobTerm {
    IntVar last;
    Time duration{0};
    Time due{0};
    Time w_early{1};
    Time w_tardy{1};
};

struct EtObjectiveVars {
    IntVar total;
    std::vector<BoolVar> early;
    std::vector<BoolVar> late;
    std::vector<IntVar> earliness;
    std::vector<IntVar> lateness;
};

/// Trail-based propagation core over interval integer variables and
/// three-state Booleans.
///
/// Constraints are posted once and propagated to a bounds-consistent
/// fixpoint by propagate(). Every domain change is recorded on a trail so
/// restore_to() can undo all changes made above a saved level. Failure
/// weights are deliberately outside the trail and survive restores.
///
/// Nogood clauses are propagated with two watched literals. They are meant
/// to be posted at the root of a search and stay valid for every state
/// below it; watch positions are never undone.
class Engine {
public:
    IntVar new_int(Time lo, Time hi);
    BoolVar new_bool();

    [[nodiscard]] std::size_t num_ints() const { return lo_.size(); }
    [[nodiscard]] std::size_t num_bools() const { return bool_.size(); }
    [[nodiscard]] std::size_t num_constraints() const { return constraints_.size(); }

    [[nodiscard]] Time min(IntVar x) const { return lo_[x.id]; }
    [[nodiscard]] Time max(IntVar x) const { return hi_[x.id]; }
    [[nodiscard]] bool fixed(IntVar x) const { return lo_[x.id] == hi_[x.id]; }
    [[nodiscard]] BoolState state(BoolVar b) const { return bool_[b.id]; }
    [[nodiscard]] bool assigned(BoolVar b) const { return bool_[b.id] != BoolState::Unassigned; }
    [[nodiscard]] bool is_true(Lit l) const;
    [[nodiscard]] bool is_false(Lit l) const;

    /// x + offset <= y
    ConstraintId post_precedence(IntVar x, Time offset, IntVar y);

    /// Fresh Boolean b with b = 0 <=> x + fwd <= y and b = 1 <=> y + bwd <= x.
    BoolVar post_disjunct(IntVar x, Time fwd, IntVar y, Time bwd);

    /// Posts early/late flags, earliness/lateness amounts and their weighted
    /// sum. Flags use strict comparisons: completing exactly on the due date
    /// costs nothing and leaves both flags at zero.
    EtObjectiveVars post_et_objective(std::span<const EtJobTerm> jobs);

    /// Adds a clause. Returns false when every literal is already false.
    bool post_nogood(std::span<const Lit> clause);
    /// Re-posts every stored clause against the current state (after the
    /// trail went below the level they were posted at).
    bool reattach_nogoods();
    void clear_nogoods();
    [[nodiscard]] std::size_t num_nogoods() const { return clauses_.size() + units_.size(); }

    /// Runs every pending propagator to a fixpoint. On failure the culprit
    /// is returned and its weight update has been applied.
    std::optional<Conflict> propagate();

    // Domain updates. They return false on a wipe-out and only queue
    // propagation; call propagate() afterwards.
    bool set_min(IntVar x, Time v);
    bool set_max(IntVar x, Time v);
    bool assign(BoolVar b, bool value);
    bool apply(Lit l) { return assign(l.var, l.value); }

    [[nodiscard]] int level() const { return static_cast<int>(levels_.size()); }
    void save_level();
    void restore_to(int target);

    [[nodiscard]] std::int64_t weight(IntVar x) const { return int_weight_[x.id]; }
    [[nodiscard]] std::int64_t weight(BoolVar b) const { return bool_weight_[b.id]; }
    [[nodiscard]] std::uint64_t failures() const { return failures_; }

    /// Scope of a posted constraint, mainly for diagnostics and tests.
    [[nodiscard]] std::vector<IntVar> int_scope(ConstraintId c) const;

private:
    struct Precedence {
        IntVar x;
        Time offset;
        IntVar y;
    };
    struct Disjunct {
        BoolVar b;
        IntVar x;
        Time fwd;
        IntVar y;
        Time bwd;
    };
    struct EarlyTardy {
        IntVar last;
        Time duration;
        Time due;
        BoolVar early;
        BoolVar late;
        IntVar earliness;
        IntVar lateness;
    };
    struct WeightedSum {
        std::vector<std::pair<Time, IntVar>> terms;
        IntVar total;
    };
    using Constraint = std::variant<Precedence, Disjunct, EarlyTardy, WeightedSum>;

    enum class TrailKind : std::uint8_t { Min, Max, Bool };
    struct TrailEntry {
        std::int32_t var;
        TrailKind kind;
        Time old;
    };

    ConstraintId add_constraint(Constraint c);
    void watch(IntVar x, std::int32_t c) { int_watch_[x.id].push_back(c); }
    void watch(BoolVar b, std::int32_t c) { bool_watch_[b.id].push_back(c); }
    void enqueue(std::int32_t c);
    void notify_int(IntVar x);

    bool run(std::int32_t c);
    bool run(const Precedence& c);
    bool run(const Disjunct& c);
    bool run(const EarlyTardy& c);
    bool run(const WeightedSum& c);
    bool enforce(IntVar x, Time offset, IntVar y);
    void bump(std::int32_t c);

    bool propagate_clauses(BoolVar b);
    bool attach(std::vector<Lit> lits);
    static std::size_t code(Lit l) { return 2 * static_cast<std::size_t>(l.var.id) + (l.value ? 1 : 0); }
    void clear_queues();

    std::vector<Time> lo_;
    std::vector<Time> hi_;
    std::vector<BoolState> bool_;
    std::vector<std::int64_t> int_weight_;
    std::vector<std::int64_t> bool_weight_;

    std::vector<Constraint> constraints_;
    std::vector<std::vector<std::int32_t>> int_watch_;
    std::vector<std::vector<std::int32_t>> bool_watch_;

    std::vector<TrailEntry> trail_;
    std::vector<std::size_t> levels_;

    std::vector<std::int32_t> queue_;
    std::size_t queue_head_{0};
    std::vector<char> in_queue_;
    std::int32_t current_{-1};

    std::vector<BoolVar> bool_events_;
    std::size_t bool_head_{0};

    std::vector<std::vector<Lit>> clauses_;
    std::vector<Lit> units_;
    std::vector<std::vector<std::int32_t>> watches_;

    std::uint64_t failures_{0};
};

} // namespace jsched
