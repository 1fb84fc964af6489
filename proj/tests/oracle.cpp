#include "oracle.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace oracle {

using jsched::Rng;
using jsched::Variant;

namespace {

constexpr Time kNegInf = std::numeric_limits<Time>::min() / 4;
constexpr Time kInf = std::numeric_limits<Time>::max() / 4;

Time draw(Rng& rng, Time lo, Time hi) { return lo + static_cast<Time>(rng.below(static_cast<std::uint64_t>(hi - lo + 1))); }

// t[to] >= t[from] + w
struct Edge {
    int from;
    int to;
    Time w;
};

std::vector<Edge> base_edges(const Instance& inst, Variant v) {
    const int m = inst.n_machines;
    const int src = inst.num_tasks();
    std::vector<Edge> edges;
    for (int x = 0; x < inst.n_jobs; ++x) {
        edges.push_back({src, x * m, inst.release(x)});
        for (int k = 0; k + 1 < m; ++k) {
            const int a = x * m + k;
            const Time p = inst.jobs[x][k].duration;
            edges.push_back({a, a + 1, p});
            std::optional<Time> lag;
            if (v == Variant::NoWaitTask || v == Variant::NoWaitInterval)
                lag = 0;
            else if (v == Variant::TimeLag && !inst.lags.empty())
                lag = inst.lags[x][k];
            if (lag) edges.push_back({a + 1, a, -(p + *lag)});
        }
    }
    return edges;
}

// One permutation of the jobs per machine, advanced like an odometer.
struct Orders {
    std::vector<std::vector<int>> perm;

    explicit Orders(const Instance& inst) : perm(inst.n_machines, std::vector<int>(inst.n_jobs)) {
        for (auto& p : perm) std::iota(p.begin(), p.end(), 0);
    }
    bool advance() {
        for (auto& p : perm)
            if (std::next_permutation(p.begin(), p.end())) return true;
        return false;
    }
    void add_edges(const Instance& inst, std::vector<Edge>& edges) const {
        for (int k = 0; k < inst.n_machines; ++k) {
            for (std::size_t r = 0; r + 1 < perm[k].size(); ++r) {
                const int a = task_on(inst, perm[k][r], k);
                const int b = task_on(inst, perm[k][r + 1], k);
                edges.push_back({a, b, inst.op(a).duration});
            }
        }
    }
    static int task_on(const Instance& inst, int job, int machine) {
        for (int k = 0; k < inst.n_machines; ++k)
            if (inst.jobs[job][k].machine == machine) return inst.task(job, k);
        return -1;
    }
};

// Earliest starts, or nullopt on a positive cycle.
std::optional<std::vector<Time>> longest_paths(int nodes, int src, const std::vector<Edge>& edges) {
    std::vector<Time> dist(nodes, kNegInf);
    dist[src] = 0;
    for (int round = 0; round <= nodes; ++round) {
        bool changed = false;
        for (const auto& e : edges) {
            if (dist[e.from] == kNegInf) continue;
            if (dist[e.from] + e.w > dist[e.to]) {
                dist[e.to] = dist[e.from] + e.w;
                changed = true;
            }
        }
        if (!changed) return dist;
    }
    return std::nullopt;
}

Time job_cost(const jsched::JobTargets& t, Time completion) {
    if (completion < t.due) return t.w_early * (t.due - completion);
    return t.w_tardy * (completion - t.due);
}

} // namespace

Instance random_shop(Rng& rng, int n, int m, Time pmin, Time pmax) {
    Instance inst;
    inst.name = "rand";
    inst.n_jobs = n;
    inst.n_machines = m;
    inst.jobs.resize(n);
    for (auto& job : inst.jobs) {
        std::vector<int> order(m);
        std::iota(order.begin(), order.end(), 0);
        jsched::shuffle(order, rng);
        for (int k = 0; k < m; ++k) job.push_back({order[k], draw(rng, pmin, pmax)});
    }
    return inst;
}

Instance with_random_targets(Instance inst, Rng& rng, Time wmax, Time rmax) {
    Time total = 0;
    for (const auto& job : inst.jobs)
        for (const auto& op : job) total += op.duration;
    inst.targets.clear();
    for (int x = 0; x < inst.n_jobs; ++x) {
        jsched::JobTargets t;
        t.release = draw(rng, 0, rmax);
        t.due = draw(rng, 0, total);
        t.w_early = draw(rng, 1, wmax);
        t.w_tardy = draw(rng, 1, wmax);
        inst.targets.push_back(t);
    }
    return inst;
}

std::optional<Time> min_makespan(const Instance& inst, Variant v) {
    const int nodes = inst.num_tasks() + 1;
    const auto fixed = base_edges(inst, v);
    std::optional<Time> best;
    Orders orders(inst);
    do {
        auto edges = fixed;
        orders.add_edges(inst, edges);
        auto dist = longest_paths(nodes, inst.num_tasks(), edges);
        if (!dist) continue;
        Time cmax = 0;
        for (int t = 0; t < inst.num_tasks(); ++t) cmax = std::max(cmax, (*dist)[t] + inst.op(t).duration);
        if (!best || cmax < *best) best = cmax;
    } while (orders.advance());
    return best;
}

Time min_et_cost(const Instance& inst) {
    const int n = inst.n_jobs;
    const int m = inst.n_machines;
    const int src = inst.num_tasks();
    const int nodes = src + 1;
    Time horizon = 0;
    for (const auto& t : inst.targets) horizon = std::max({horizon, t.release, t.due});
    for (const auto& job : inst.jobs)
        for (const auto& op : job) horizon += op.duration;
    horizon *= 2;

    const auto fixed = base_edges(inst, Variant::Jsp);
    Time best = kInf;
    Orders orders(inst);
    do {
        auto edges = fixed;
        orders.add_edges(inst, edges);
        // ub[a][b] bounds t_b - t_a from above
        std::vector<std::vector<Time>> ub(nodes, std::vector<Time>(nodes, kInf));
        for (int a = 0; a < nodes; ++a) ub[a][a] = 0;
        for (const auto& e : edges) ub[e.to][e.from] = std::min(ub[e.to][e.from], -e.w);
        for (int t = 0; t < src; ++t) {
            ub[src][t] = std::min(ub[src][t], horizon);
            ub[t][src] = std::min(ub[t][src], Time{0});
        }
        for (int k = 0; k < nodes; ++k)
            for (int a = 0; a < nodes; ++a)
                for (int b = 0; b < nodes; ++b)
                    if (ub[a][k] < kInf && ub[k][b] < kInf) ub[a][b] = std::min(ub[a][b], ub[a][k] + ub[k][b]);
        bool consistent = true;
        for (int a = 0; a < nodes; ++a) consistent = consistent && ub[a][a] >= 0;
        if (!consistent) continue;

        std::vector<int> last(n);
        for (int x = 0; x < n; ++x) last[x] = inst.task(x, m - 1);
        std::vector<Time> start(n);
        // Depth-first over the last-task starts; the minimal network is
        // decomposable so every prefix consistent with its pairwise bounds
        // extends to a full schedule.
        auto range = [&](int x, Time& lo, Time& hi) {
            lo = -ub[last[x]][src];
            hi = ub[src][last[x]];
            for (int y = 0; y < x; ++y) {
                lo = std::max(lo, start[y] - ub[last[x]][last[y]]);
                hi = std::min(hi, start[y] + ub[last[y]][last[x]]);
            }
        };
        auto rec = [&](auto&& self, int x, Time acc) -> void {
            if (acc >= best) return;
            Time lo;
            Time hi;
            range(x, lo, hi);
            if (lo > hi) return;
            const Time p = inst.jobs[x][m - 1].duration;
            const auto& tg = inst.targets[x];
            if (x == n - 1) {
                const Time s = std::clamp(tg.due - p, lo, hi);
                best = std::min(best, acc + job_cost(tg, s + p));
                return;
            }
            for (Time s = lo; s <= hi; ++s) {
                start[x] = s;
                self(self, x + 1, acc + job_cost(tg, s + p));
            }
        };
        rec(rec, 0, 0);
    } while (orders.advance());
    return best;
}

Instance two_job_example() {
    Instance inst;
    inst.name = "two_jobs";
    inst.n_jobs = 2;
    inst.n_machines = 4;
    inst.jobs = {
        {{0, 20}, {1, 50}, {2, 80}, {3, 50}},
        {{0, 60}, {3, 45}, {1, 20}, {2, 25}},
    };
    inst.lags.assign(2, std::vector<jsched::Lag>(3, jsched::Lag{0}));
    return inst;
}

} // namespace oracle
