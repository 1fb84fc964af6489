#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "jsched/greedy.hpp"
#include "jsched/models.hpp"
#include "jsched/rng.hpp"

namespace jsched {

enum class Heuristic { TdomOverTw, TdomPlusBw, DomOverWdeg };

const char* to_string(Heuristic h);
std::optional<Heuristic> parse_heuristic(std::string_view s);

struct SearchConfig {
    std::uint64_t restart_base{256};
    double restart_factor{1.3};
    Heuristic heuristic{Heuristic::TdomOverTw};
    /// Node budget of each satisfaction call during the dichotomy.
    std::uint64_t dichotomy_node_limit{20000};
    double time_limit{3600.0};
    std::uint64_t seed{0};
    /// Greedy descents before the search; only used for time-lag and
    /// no-wait models.
    std::uint64_t greedy_iterations{1000};
    std::uint64_t greedy_failure_limit{1000};
    bool record_nogoods{true};
    /// Total failure cap over the whole optimization, 0 for none.
    std::uint64_t failure_limit{0};

    /// Throws std::invalid_argument on a bad configuration.
    void check() const;
};

/// Something the heuristic may branch on: a Boolean, or an integer variable
/// that is not fixed yet.
struct Candidate {
    std::optional<BoolVar> b;
    std::optional<IntVar> x;
};

struct Decision {
    enum class Kind : std::uint8_t { Assign, AtMost, AtLeast };
    Kind kind{Kind::Assign};
    BoolVar b;
    bool value{false};
    IntVar x;
    Time bound{0};

    [[nodiscard]] Decision negated() const;
    [[nodiscard]] bool is_bool() const { return kind == Kind::Assign; }
    [[nodiscard]] Lit lit() const { return {b, value}; }
};

struct DecisionEntry {
    Decision decision;
    bool left{true};
};

using DecisionStack = std::vector<DecisionEntry>;

/// Applies a decision to the engine. False on an immediate wipe-out.
bool apply(Engine& e, const Decision& d);

/// Branching score num/den, smaller is better; `tie` breaks equal ratios,
/// larger is better.
struct Score {
    std::int64_t num{0};
    std::int64_t den{1};
    std::int64_t tie{0};
};

/// -1 if a is strictly better, 1 if b is, 0 on a tie. Ratios are compared
/// exactly by cross-multiplication.
int compare(const Score& a, const Score& b);

Score disjunct_score(const Engine& e, const DisjunctInfo& d, Heuristic h);

/// Variable chosen by the heuristic, nullopt once every branching candidate
/// of the model is assigned (then the lower bounds form a schedule).
std::optional<Candidate> select_decision(const BuiltModel& model, Heuristic h, Rng& rng);

/// Left branch for a candidate: repeats the guide's value when there is
/// one, otherwise Boolean zero or the integer's minimum.
Decision choose_branch(const Engine& e, const Candidate& c, const Guide* guide);

/// Failure limits base * factor^k, rounded down.
class GeometricCutoffs {
public:
    GeometricCutoffs(std::uint64_t base, double factor);
    std::uint64_t next();

private:
    double base_;
    double factor_;
    double scale_{1.0};
};

/// Reduced nld-nogoods of a branch: for every right branch, the clause
/// forbidding the positive decisions above it together with the refuted
/// left decision. Stops at the first integer decision.
std::vector<std::vector<Lit>> extract_restart_nogoods(const DecisionStack& stack);

struct SearchStats {
    std::uint64_t failures{0};
    std::uint64_t restarts{0};
    std::uint64_t nodes{0};
    std::uint64_t solutions{0};
    std::uint64_t nogoods{0};
    std::uint64_t max_failures_in_run{0};
    std::uint64_t sat_calls{0};
    double seconds{0.0};
};

enum class SatStatus { Sat, Unsat, Unknown };

struct SatResult {
    SatStatus status{SatStatus::Unknown};
    std::optional<Incumbent> incumbent;
};

struct SatLimits {
    std::uint64_t nodes{0}; ///< 0 for none
    std::uint64_t failures{0};
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Searches for a schedule with objective at most `bound` starting from the
/// engine's current level, which is restored before returning. Stored
/// nogoods are reattached first; new ones are added at every restart when
/// `record_nogoods` is set.
SatResult solve_satisfaction(BuiltModel& model, Time bound, const SearchConfig& cfg, const Guide* guide,
                             Rng& rng, const SatLimits& limits, SearchStats& stats);

enum class OptStatus { Optimal, Feasible, Infeasible, Unknown };

const char* to_string(OptStatus s);

struct OptimizationResult {
    std::optional<Solution> best;
    Time lower_bound{0};
    OptStatus status{OptStatus::Unknown};
    SearchStats stats;
    std::optional<Time> greedy_objective;
};

/// Dichotomy on the objective under the node limit, then repeated
/// tightening of the incumbent without node limit until the gap closes or
/// time runs out.
OptimizationResult optimize(BuiltModel& model, const SearchConfig& cfg);

} // namespace jsched
