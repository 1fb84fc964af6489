#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "jsched/models.hpp"
#include "jsched/rng.hpp"

namespace jsched {

/// Offset from the start of a job's first task to the latest start of its
/// last task when every gap takes its maximal lag. nullopt if some gap is
/// unbounded.
std::optional<Time> stretched(const Instance& inst, int job);

/// Values of every Boolean (-1 when unassigned) and the lower bound of every
/// integer variable at the moment a solution was recorded. Drives
/// solution-guided branching.
struct Guide {
    std::vector<std::int8_t> bools;
    std::vector<Time> ints;

    static Guide capture(const Engine& e);
};

struct Incumbent {
    Solution solution;
    Guide guide;
};

struct GreedyStats {
    std::uint64_t failures{0};
    std::uint64_t tchoice_failures{0};
    std::uint64_t decisions{0};
};

struct GreedyOutcome {
    std::optional<Incumbent> incumbent;
    GreedyStats stats;
};

/// One randomized descent of the greedy initialization strategy from the
/// current engine state: jobs are added in random order, each new job's
/// disjuncts with already placed jobs are decided in random order with the
/// new job's task first on the left branch, then the job's last task is
/// bounded by its first start plus its stretched length.
///
/// Backtracking is chronological and capped by `failure_limit`; the engine
/// is restored to its entry level before returning.
GreedyOutcome greedy_descend(BuiltModel& model, Rng& rng, std::uint64_t failure_limit = 1000);

struct GreedyInitResult {
    std::optional<Incumbent> best;
    std::uint64_t descents{0};
    std::uint64_t failed_descents{0};
    GreedyStats stats;
};

/// Runs `iterations` descents under the model's trivial upper bound and
/// keeps the best valid schedule.
GreedyInitResult greedy_init(BuiltModel& model, std::uint64_t iterations, Rng& rng,
                             std::uint64_t failure_limit = 1000);

} // namespace jsched
