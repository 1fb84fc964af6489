#include "jsched/greedy.hpp"

#include <algorithm>
#include <limits>

namespace jsched {

std::optional<Time> stretched(const Instance& inst, int job) {
    const int m = inst.n_machines;
    Time s = 0;
    for (int k = 0; k + 1 < m; ++k) {
        s += inst.jobs[job][k].duration;
        if (!inst.has_lags()) return std::nullopt;
        const auto& lag = inst.lags[job][k];
        if (!lag) return std::nullopt;
        s += *lag;
    }
    return s;
}

Guide Guide::capture(const Engine& e) {
    Guide g;
    g.bools.resize(e.num_bools());
    for (std::size_t b = 0; b < g.bools.size(); ++b) {
        const auto st = e.state(BoolVar{static_cast<std::int32_t>(b)});
        g.bools[b] = st == BoolState::Unassigned ? std::int8_t{-1} : static_cast<std::int8_t>(st);
    }
    g.ints.resize(e.num_ints());
    for (std::size_t x = 0; x < g.ints.size(); ++x) g.ints[x] = e.min(IntVar{static_cast<std::int32_t>(x)});
    return g;
}

namespace {

// A step of the pre-drawn descent plan. A disjunct step's left branch puts
// the newly added job first; a stretch step caps the new job's last start.
struct Step {
    int disjunct{-1};
    bool left_value{false};
    int job{-1};
};

std::vector<Step> draw_plan(const BuiltModel& model, Rng& rng) {
    const int n = model.instance.n_jobs;
    std::vector<int> order(n);
    for (int x = 0; x < n; ++x) order[x] = x;
    shuffle(order, rng);

    std::vector<char> fixed(n, 0);
    std::vector<Step> plan;
    for (int y : order) {
        fixed[y] = 1;
        std::vector<int> next;
        for (int d : model.job_disjuncts[y]) {
            const auto& info = model.disjuncts[d];
            const int other = info.job_x == y ? info.job_y : info.job_x;
            if (fixed[other] && other != y) next.push_back(d);
        }
        shuffle(next, rng);
        for (int d : next) {
            // state zero puts x's side first
            plan.push_back({d, model.disjuncts[d].job_x != y, -1});
        }
        plan.push_back({-1, false, y});
    }
    return plan;
}

} // namespace

GreedyOutcome greedy_descend(BuiltModel& model, Rng& rng, std::uint64_t failure_limit) {
    GreedyOutcome out;
    Engine& e = model.engine;
    const int entry = e.level();
    if (model.root_failed) return out;

    const auto plan = draw_plan(model, rng);

    struct Frame {
        std::size_t step;
        int level;
        bool right;
        Time bound;
    };
    std::vector<Frame> stack;

    // Applies branch `right` of the step on top of the stack; false on conflict.
    auto branch = [&](const Frame& f) {
        const Step& s = plan[f.step];
        bool ok;
        if (s.disjunct >= 0) {
            const bool v = f.right ? !s.left_value : s.left_value;
            ok = e.assign(model.disjuncts[s.disjunct].b, v);
        } else if (!f.right) {
            ok = e.set_max(model.last_var(s.job), f.bound);
        } else {
            ok = e.set_min(model.last_var(s.job), f.bound + 1);
        }
        return ok && !e.propagate();
    };

    // Undo failed branches until some open right branch propagates.
    auto backtrack = [&]() {
        while (!stack.empty()) {
            Frame& f = stack.back();
            e.restore_to(f.level);
            if (f.right) {
                stack.pop_back();
                continue;
            }
            f.right = true;
            e.save_level();
            if (branch(f)) return true;
            ++out.stats.failures;
            if (out.stats.failures >= failure_limit) return false;
        }
        return false;
    };

    auto fail_and_backtrack = [&](const Step& s) {
        ++out.stats.failures;
        if (s.disjunct < 0) ++out.stats.tchoice_failures;
        if (out.stats.failures >= failure_limit) return false;
        return backtrack();
    };

    std::size_t i = 0;
    bool alive = true;
    while (alive && i < plan.size()) {
        const Step& s = plan[i];
        Time bound = 0;
        if (s.disjunct >= 0) {
            if (e.assigned(model.disjuncts[s.disjunct].b)) {
                ++i;
                continue;
            }
        } else {
            const auto st = stretched(model.instance, s.job);
            if (!st) {
                ++i;
                continue;
            }
            const int first = model.instance.task(s.job, 0);
            bound = e.min(model.first_var(s.job)) + model.task_offset[first] + *st - model.last_offset(s.job);
            if (e.max(model.last_var(s.job)) <= bound) {
                ++i;
                continue;
            }
        }
        ++out.stats.decisions;
        stack.push_back({i, e.level(), false, bound});
        e.save_level();
        if (branch(stack.back())) {
            ++i;
            continue;
        }
        alive = fail_and_backtrack(s);
        if (alive) i = stack.back().step + 1;
    }

    if (alive) {
        Solution sol = model.extract_solution();
        if (validate_solution(model.instance, sol).ok()) out.incumbent = Incumbent{std::move(sol), Guide::capture(e)};
    }
    e.restore_to(entry);
    return out;
}

GreedyInitResult greedy_init(BuiltModel& model, std::uint64_t iterations, Rng& rng, std::uint64_t failure_limit) {
    GreedyInitResult res;
    if (iterations == 0 || model.root_failed) return res;
    Engine& e = model.engine;
    const int entry = e.level();
    e.save_level();
    if (e.set_max(model.objective, model.bounds.ub) && !e.propagate()) {
        for (std::uint64_t k = 0; k < iterations; ++k) {
            auto one = greedy_descend(model, rng, failure_limit);
            ++res.descents;
            res.stats.failures += one.stats.failures;
            res.stats.tchoice_failures += one.stats.tchoice_failures;
            res.stats.decisions += one.stats.decisions;
            if (!one.incumbent) {
                ++res.failed_descents;
                continue;
            }
            if (!res.best || one.incumbent->solution.objective < res.best->solution.objective)
                res.best = std::move(one.incumbent);
        }
    }
    e.restore_to(entry);
    return res;
}

} // namespace jsched
