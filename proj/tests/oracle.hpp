#pragma once

// Reference solvers and instance generators used only by the tests. They
// share no code with the solver beyond the Instance type.

#include <optional>
#include <vector>

#include "jsched/instance.hpp"
#include "jsched/rng.hpp"
#include "jsched/solution.hpp"

namespace oracle {

using jsched::Instance;
using jsched::Time;

/// Random n x m shop, every job visiting the machines in random order.
Instance random_shop(jsched::Rng& rng, int n, int m, Time pmin, Time pmax);

/// Adds due dates in [0, total duration], weights in [1, wmax] and release
/// dates in [0, rmax].
Instance with_random_targets(Instance inst, jsched::Rng& rng, Time wmax, Time rmax);

/// Minimal makespan by enumerating every combination of machine orders and
/// scheduling each as early as possible with Bellman-Ford longest paths.
/// Lags come from the instance for TimeLag, are all zero for the no-wait
/// variants and ignored for Jsp. nullopt if no combination is feasible.
std::optional<Time> min_makespan(const Instance& inst, jsched::Variant v);

/// Minimal weighted earliness plus tardiness, again over all machine orders.
/// For a fixed order the difference constraints are closed with
/// Floyd-Warshall and the last-task starts are enumerated over a horizon
/// twice as long as any schedule needs; the final job takes its best value
/// in closed form.
Time min_et_cost(const Instance& inst);

/// The two four-task jobs of the classical no-wait interval example.
Instance two_job_example();

} // namespace oracle
