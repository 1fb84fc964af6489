#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "jsched/engine.hpp"
#include "jsched/instance.hpp"
#include "jsched/solution.hpp"

namespace jsched {

class ModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Branching view of one disjunct: state zero puts the side of `x` first.
struct DisjunctInfo {
    BoolVar b;
    IntVar x;
    IntVar y;
    int job_x{-1};
    int job_y{-1};
};

/// The offset J_y - J_x of two no-wait jobs may not lie in the open
/// interval (lo, hi).
struct ForbiddenInterval {
    Time lo{0};
    Time hi{0};
    friend bool operator==(const ForbiddenInterval&, const ForbiddenInterval&) = default;
};

struct Bounds {
    Time lb{0};
    Time ub{0};
};

/// An instance translated into engine variables and constraints.
///
/// The start of task t is min(task_var[t]) + task_offset[t] once the search
/// has assigned every branching candidate. For no-wait models task_var is
/// the job variable and the offset is the task's head.
struct BuiltModel {
    Variant variant{Variant::Jsp};
    Instance instance;
    Engine engine;
    IntVar objective;
    Bounds bounds;

    std::vector<DisjunctInfo> disjuncts;
    /// Extra candidates of the earliness/tardiness model.
    std::vector<BoolVar> et_flags;
    std::vector<IntVar> et_last;
    std::optional<EtObjectiveVars> et;

    std::vector<IntVar> task_var;
    std::vector<Time> task_offset;
    std::vector<Time> heads;
    /// Indices into `disjuncts` of every disjunct touching each job.
    std::vector<std::vector<int>> job_disjuncts;

    bool root_failed{false};

    [[nodiscard]] IntVar first_var(int job) const { return task_var[instance.task(job, 0)]; }
    [[nodiscard]] IntVar last_var(int job) const {
        return task_var[instance.task(job, instance.n_machines - 1)];
    }
    [[nodiscard]] Time last_offset(int job) const {
        return task_offset[instance.task(job, instance.n_machines - 1)];
    }

    /// Schedule given by the current lower bounds, objective recomputed.
    [[nodiscard]] Solution extract_solution() const;
};

/// Total duration of the tasks before each task within its job.
std::vector<Time> compute_heads(const Instance& inst);

/// Maximal forbidden intervals for the offset of job y relative to job x,
/// sorted ascending and pairwise disjoint.
std::vector<ForbiddenInterval> get_f_intervals(const Instance& inst, int job_x, int job_y);

/// Jobs one after another in index order, each as a no-wait block started
/// at its release date at the earliest. Feasible for every variant.
Solution back_to_back(const Instance& inst, Variant v);

Bounds trivial_bounds(const Instance& inst, Variant v);

BuiltModel build_jsp(const Instance& inst, Time ub);
BuiltModel build_etjsp(const Instance& inst, Time ub_cost);
BuiltModel build_tljsp(const Instance& inst, Time ub);
BuiltModel build_nwjsp_task(const Instance& inst, Time ub);
BuiltModel build_nwjsp_interval(const Instance& inst, Time ub);

/// Dispatches on the variant using trivial_bounds for the horizon.
BuiltModel build_model(const Instance& inst, Variant v);

} // namespace jsched
