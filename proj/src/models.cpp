#include "jsched/models.hpp"

#include <algorithm>

#include "jsched/greedy.hpp"

namespace jsched {

namespace {

BuiltModel skeleton(const Instance& inst, Variant v) {
    inst.check();
    BuiltModel m;
    m.variant = v;
    m.instance = inst;
    m.heads = compute_heads(inst);
    m.task_var.resize(inst.num_tasks());
    m.task_offset.assign(inst.num_tasks(), 0);
    m.job_disjuncts.resize(inst.n_jobs);
    return m;
}

IntVar bounded_var(BuiltModel& m, Time lo, Time hi) {
    if (hi < lo) {
        m.root_failed = true;
        hi = lo;
    }
    return m.engine.new_int(lo, hi);
}

void add_disjunct(BuiltModel& m, BoolVar b, IntVar x, IntVar y, int job_x, int job_y) {
    const auto idx = static_cast<int>(m.disjuncts.size());
    m.disjuncts.push_back({b, x, y, job_x, job_y});
    m.job_disjuncts[job_x].push_back(idx);
    m.job_disjuncts[job_y].push_back(idx);
}

// One start variable per task with job precedences and machine disjuncts.
void post_task_structure(BuiltModel& m, Time horizon) {
    const auto& inst = m.instance;
    const int mm = inst.n_machines;
    for (int x = 0; x < inst.n_jobs; ++x) {
        Time tail = inst.job_length(x);
        for (int k = 0; k < mm; ++k) {
            const int t = inst.task(x, k);
            m.task_var[t] = bounded_var(m, inst.release(x) + m.heads[t], horizon - tail);
            tail -= inst.op(t).duration;
        }
        for (int k = 0; k + 1 < mm; ++k) {
            const int t = inst.task(x, k);
            m.engine.post_precedence(m.task_var[t], inst.op(t).duration, m.task_var[t + 1]);
        }
    }
    for (int a = 0; a < inst.num_tasks(); ++a) {
        for (int b = a + 1; b < inst.num_tasks(); ++b) {
            if (a / mm == b / mm || inst.op(a).machine != inst.op(b).machine) continue;
            auto d = m.engine.post_disjunct(m.task_var[a], inst.op(a).duration, m.task_var[b],
                                            inst.op(b).duration);
            add_disjunct(m, d, m.task_var[a], m.task_var[b], a / mm, b / mm);
        }
    }
}

void post_makespan(BuiltModel& m, Time ub) {
    m.objective = m.engine.new_int(0, ub);
    const auto& inst = m.instance;
    for (int x = 0; x < inst.n_jobs; ++x) {
        const int last = inst.task(x, inst.n_machines - 1);
        m.engine.post_precedence(m.task_var[last], m.task_offset[last] + inst.op(last).duration, m.objective);
    }
}

void finish(BuiltModel& m) {
    if (m.engine.propagate()) m.root_failed = true;
}

void require_zero_lags(const Instance& inst) {
    if (!inst.has_lags()) throw ModelError("no-wait models need an instance with zero lags");
    for (const auto& row : inst.lags)
        for (const auto& l : row)
            if (!l || *l != 0) throw ModelError("no-wait models need every lag to be zero");
}

BuiltModel nw_skeleton(const Instance& inst, Variant v, Time ub) {
    require_zero_lags(inst);
    BuiltModel m = skeleton(inst, v);
    for (int x = 0; x < inst.n_jobs; ++x) {
        IntVar job = bounded_var(m, inst.release(x), ub - inst.job_length(x));
        for (int k = 0; k < inst.n_machines; ++k) {
            const int t = inst.task(x, k);
            m.task_var[t] = job;
            m.task_offset[t] = m.heads[t];
        }
    }
    m.objective = m.engine.new_int(0, ub);
    for (int x = 0; x < inst.n_jobs; ++x)
        m.engine.post_precedence(m.first_var(x), inst.job_length(x), m.objective);
    return m;
}

} // namespace

std::vector<Time> compute_heads(const Instance& inst) {
    std::vector<Time> heads(inst.num_tasks(), 0);
    for (int x = 0; x < inst.n_jobs; ++x) {
        Time h = 0;
        for (int k = 0; k < inst.n_machines; ++k) {
            heads[inst.task(x, k)] = h;
            h += inst.jobs[x][k].duration;
        }
    }
    return heads;
}

std::vector<ForbiddenInterval> get_f_intervals(const Instance& inst, int job_x, int job_y) {
    const auto heads = compute_heads(inst);
    const int m = inst.n_machines;
    std::vector<int> pos_y(m, -1);
    for (int k = 0; k < m; ++k) pos_y[inst.jobs[job_y][k].machine] = k;

    // (coordinate, +1 opening / -1 closing)
    std::vector<std::pair<Time, int>> ends;
    for (int k = 0; k < m; ++k) {
        const int ky = pos_y[inst.jobs[job_x][k].machine];
        if (ky < 0) continue;
        const int i = inst.task(job_x, k);
        const int j = inst.task(job_y, ky);
        const Time f_ij = heads[i] + inst.op(i).duration - heads[j];
        const Time f_ji = heads[j] + inst.op(j).duration - heads[i];
        if (-f_ji >= f_ij) continue; // empty open interval
        ends.emplace_back(-f_ji, +1);
        ends.emplace_back(f_ij, -1);
    }
    // Closings sort before openings at equal coordinates: the shared end
    // point of two touching open intervals is itself allowed.
    std::sort(ends.begin(), ends.end());

    std::vector<ForbiddenInterval> out;
    int open = 0;
    Time start = 0;
    for (auto [at, delta] : ends) {
        if (open == 0) start = at;
        open += delta;
        if (open == 0) out.push_back({start, at});
    }
    return out;
}

Solution back_to_back(const Instance& inst, Variant v) {
    Solution s;
    s.variant = v;
    s.starts.assign(inst.num_tasks(), 0);
    Time clock = 0;
    for (int x = 0; x < inst.n_jobs; ++x) {
        clock = std::max(clock, inst.release(x));
        for (int k = 0; k < inst.n_machines; ++k) {
            const int t = inst.task(x, k);
            s.starts[t] = clock;
            clock += inst.op(t).duration;
        }
    }
    s.objective = evaluate(inst, v, s.starts);
    return s;
}

Bounds trivial_bounds(const Instance& inst, Variant v) {
    if (v == Variant::Et) return {0, back_to_back(inst, v).objective};
    Bounds b;
    for (int x = 0; x < inst.n_jobs; ++x) b.lb = std::max(b.lb, inst.release(x) + inst.job_length(x));
    for (int k = 0; k < inst.n_machines; ++k) b.lb = std::max(b.lb, inst.machine_load(k));
    if (v == Variant::Jsp) {
        b.ub = back_to_back(inst, v).objective;
        return b;
    }
    Time max_release = 0;
    for (int x = 0; x < inst.n_jobs; ++x) max_release = std::max(max_release, inst.release(x));
    b.ub = max_release;
    for (int x = 0; x < inst.n_jobs; ++x) {
        const Time last = inst.jobs[x].back().duration;
        const auto s = inst.has_lags() ? stretched(inst, x) : std::optional<Time>{};
        b.ub += (s ? *s : inst.job_length(x) - last) + last;
    }
    return b;
}

BuiltModel build_jsp(const Instance& inst, Time ub) {
    BuiltModel m = skeleton(inst, Variant::Jsp);
    post_task_structure(m, ub);
    post_makespan(m, ub);
    m.bounds = trivial_bounds(inst, Variant::Jsp);
    m.bounds.ub = std::min(m.bounds.ub, ub);
    finish(m);
    return m;
}

BuiltModel build_tljsp(const Instance& inst, Time ub) {
    BuiltModel m = skeleton(inst, Variant::TimeLag);
    post_task_structure(m, ub);
    if (inst.has_lags()) {
        for (int x = 0; x < inst.n_jobs; ++x) {
            for (int k = 0; k + 1 < inst.n_machines; ++k) {
                const auto& lag = inst.lags[x][k];
                if (!lag) continue;
                const int t = inst.task(x, k);
                m.engine.post_precedence(m.task_var[t + 1], -(inst.op(t).duration + *lag), m.task_var[t]);
            }
        }
    }
    post_makespan(m, ub);
    m.bounds = trivial_bounds(inst, Variant::TimeLag);
    m.bounds.ub = std::min(m.bounds.ub, ub);
    finish(m);
    return m;
}

BuiltModel build_etjsp(const Instance& inst, Time ub_cost) {
    if (!inst.has_targets()) throw ModelError("earliness/tardiness model needs due dates and weights");
    BuiltModel m = skeleton(inst, Variant::Et);
    Time horizon = 0;
    for (const auto& t : inst.targets) horizon = std::max({horizon, t.release, t.due});
    horizon += inst.total_duration();
    post_task_structure(m, horizon);

    std::vector<EtJobTerm> terms;
    for (int x = 0; x < inst.n_jobs; ++x) {
        const int last = inst.task(x, inst.n_machines - 1);
        const auto& t = inst.targets[x];
        terms.push_back({m.task_var[last], inst.op(last).duration, t.due, t.w_early, t.w_tardy});
        m.et_last.push_back(m.task_var[last]);
    }
    m.et = m.engine.post_et_objective(terms);
    for (int x = 0; x < inst.n_jobs; ++x) {
        m.et_flags.push_back(m.et->early[x]);
        m.et_flags.push_back(m.et->late[x]);
    }
    m.objective = m.et->total;
    if (!m.engine.set_max(m.objective, ub_cost)) m.root_failed = true;
    m.bounds = {0, ub_cost};
    finish(m);
    return m;
}

BuiltModel build_nwjsp_task(const Instance& inst, Time ub) {
    BuiltModel m = nw_skeleton(inst, Variant::NoWaitTask, ub);
    const int mm = inst.n_machines;
    for (int a = 0; a < inst.num_tasks(); ++a) {
        for (int b = a + 1; b < inst.num_tasks(); ++b) {
            if (a / mm == b / mm || inst.op(a).machine != inst.op(b).machine) continue;
            const Time f_ab = m.heads[a] + inst.op(a).duration - m.heads[b];
            const Time f_ba = m.heads[b] + inst.op(b).duration - m.heads[a];
            auto d = m.engine.post_disjunct(m.task_var[a], f_ab, m.task_var[b], f_ba);
            add_disjunct(m, d, m.task_var[a], m.task_var[b], a / mm, b / mm);
        }
    }
    m.bounds = trivial_bounds(inst, Variant::NoWaitTask);
    m.bounds.ub = std::min(m.bounds.ub, ub);
    finish(m);
    return m;
}

BuiltModel build_nwjsp_interval(const Instance& inst, Time ub) {
    BuiltModel m = nw_skeleton(inst, Variant::NoWaitInterval, ub);
    for (int x = 0; x < inst.n_jobs; ++x) {
        for (int y = x + 1; y < inst.n_jobs; ++y) {
            const IntVar jx = m.first_var(x);
            const IntVar jy = m.first_var(y);
            for (const auto& iv : get_f_intervals(inst, x, y)) {
                // zero: J_y - J_x <= lo, one: J_y - J_x >= hi
                auto d = m.engine.post_disjunct(jy, -iv.lo, jx, iv.hi);
                add_disjunct(m, d, jy, jx, y, x);
            }
        }
    }
    m.bounds = trivial_bounds(inst, Variant::NoWaitInterval);
    m.bounds.ub = std::min(m.bounds.ub, ub);
    finish(m);
    return m;
}

BuiltModel build_model(const Instance& inst, Variant v) {
    const auto b = trivial_bounds(inst, v);
    switch (v) {
    case Variant::Jsp: return build_jsp(inst, b.ub);
    case Variant::Et: return build_etjsp(inst, b.ub);
    case Variant::TimeLag: return build_tljsp(inst, b.ub);
    case Variant::NoWaitTask: return build_nwjsp_task(inst, b.ub);
    case Variant::NoWaitInterval: return build_nwjsp_interval(inst, b.ub);
    }
    throw ModelError("unknown variant");
}

Solution BuiltModel::extract_solution() const {
    Solution s;
    s.variant = variant;
    s.starts.resize(instance.num_tasks());
    for (int t = 0; t < instance.num_tasks(); ++t) s.starts[t] = engine.min(task_var[t]) + task_offset[t];
    s.objective = evaluate(instance, variant, s.starts);
    return s;
}

} // namespace jsched
