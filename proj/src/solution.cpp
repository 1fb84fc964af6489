#include "jsched/solution.hpp"

#include <algorithm>

namespace jsched {

const char* to_string(Variant v) {
    switch (v) {
    case Variant::Jsp: return "jsp";
    case Variant::Et: return "et";
    case Variant::TimeLag: return "tl";
    case Variant::NoWaitTask: return "nw-task";
    case Variant::NoWaitInterval: return "nw-interval";
    }
    return "?";
}

std::optional<Variant> parse_variant(std::string_view s) {
    if (s == "jsp") return Variant::Jsp;
    if (s == "et") return Variant::Et;
    if (s == "tl") return Variant::TimeLag;
    if (s == "nw-task") return Variant::NoWaitTask;
    if (s == "nw-interval") return Variant::NoWaitInterval;
    return std::nullopt;
}

Time makespan(const Instance& inst, const std::vector<Time>& starts) {
    Time c = 0;
    for (int t = 0; t < inst.num_tasks(); ++t) c = std::max(c, starts[t] + inst.op(t).duration);
    return c;
}

Time et_cost(const Instance& inst, const std::vector<Time>& starts) {
    Time cost = 0;
    const int m = inst.n_machines;
    for (int x = 0; x < inst.n_jobs; ++x) {
        const int last = inst.task(x, m - 1);
        const Time completion = starts[last] + inst.op(last).duration;
        const JobTargets t = inst.has_targets() ? inst.targets[x] : JobTargets{};
        if (completion < t.due) cost += t.w_early * (t.due - completion);
        if (completion > t.due) cost += t.w_tardy * (completion - t.due);
    }
    return cost;
}

Time evaluate(const Instance& inst, Variant v, const std::vector<Time>& starts) {
    return v == Variant::Et ? et_cost(inst, starts) : makespan(inst, starts);
}

Validation validate_solution(const Instance& inst, const Solution& sol) {
    Validation res;
    auto fail = [&](Violation::Kind k, int a, int b, std::string msg) {
        res.violation = Violation{k, a, b, std::move(msg)};
        return res;
    };
    const int n = inst.n_jobs;
    const int m = inst.n_machines;
    if (static_cast<int>(sol.starts.size()) != inst.num_tasks())
        return fail(Violation::Kind::Shape, -1, -1, "start vector has the wrong length");
    const auto& s = sol.starts;
    for (int t = 0; t < inst.num_tasks(); ++t)
        if (s[t] < 0) return fail(Violation::Kind::NegativeStart, t, -1, "task " + std::to_string(t) + " starts before 0");

    for (int x = 0; x < n; ++x) {
        const int first = inst.task(x, 0);
        if (s[first] < inst.release(x))
            return fail(Violation::Kind::Release, first, -1,
                        "job " + std::to_string(x) + " starts before its release date");
        for (int k = 0; k + 1 < m; ++k) {
            const int a = inst.task(x, k);
            const int b = a + 1;
            const Time gap = s[b] - (s[a] + inst.op(a).duration);
            if (gap < 0)
                return fail(Violation::Kind::JobOrder, a, b,
                            "task " + std::to_string(b) + " starts before task " + std::to_string(a) + " ends");
            Lag lag;
            if (is_no_wait(sol.variant))
                lag = 0;
            else if (sol.variant == Variant::TimeLag && inst.has_lags())
                lag = inst.lags[x][k];
            if (lag && gap > *lag)
                return fail(Violation::Kind::MaxLag, a, b,
                            "gap between tasks " + std::to_string(a) + " and " + std::to_string(b) +
                                " exceeds its maximal lag");
        }
    }

    std::vector<std::vector<int>> on_machine(m);
    for (int t = 0; t < inst.num_tasks(); ++t) on_machine[inst.op(t).machine].push_back(t);
    for (const auto& tasks : on_machine) {
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            for (std::size_t j = i + 1; j < tasks.size(); ++j) {
                const int a = tasks[i];
                const int b = tasks[j];
                const bool a_first = s[a] + inst.op(a).duration <= s[b];
                const bool b_first = s[b] + inst.op(b).duration <= s[a];
                if (!a_first && !b_first)
                    return fail(Violation::Kind::MachineOverlap, a, b,
                                "tasks " + std::to_string(a) + " and " + std::to_string(b) +
                                    " overlap on machine " + std::to_string(inst.op(a).machine));
            }
        }
    }

    res.objective = evaluate(inst, sol.variant, s);
    if (res.objective != sol.objective)
        return fail(Violation::Kind::Objective, -1, -1,
                    "reported objective " + std::to_string(sol.objective) + " but schedule gives " +
                        std::to_string(res.objective));
    return res;
}

} // namespace jsched
