#include "jsched/search.hpp"

#include <cmath>
#include <stdexcept>

namespace jsched {

const char* to_string(Heuristic h) {
    switch (h) {
    case Heuristic::TdomOverTw: return "tdom-tw";
    case Heuristic::TdomPlusBw: return "tdom-bw";
    case Heuristic::DomOverWdeg: return "dom-wdeg";
    }
    return "?";
}

std::optional<Heuristic> parse_heuristic(std::string_view s) {
    if (s == "tdom-tw") return Heuristic::TdomOverTw;
    if (s == "tdom-bw") return Heuristic::TdomPlusBw;
    if (s == "dom-wdeg") return Heuristic::DomOverWdeg;
    return std::nullopt;
}

const char* to_string(OptStatus s) {
    switch (s) {
    case OptStatus::Optimal: return "optimal";
    case OptStatus::Feasible: return "feasible";
    case OptStatus::Infeasible: return "infeasible";
    case OptStatus::Unknown: return "unknown";
    }
    return "?";
}

void SearchConfig::check() const {
    if (restart_base < 1) throw std::invalid_argument("restart base must be at least 1");
    if (!(restart_factor > 1.0) || !std::isfinite(restart_factor))
        throw std::invalid_argument("restart factor must be a finite number above 1");
    if (!(time_limit > 0.0)) throw std::invalid_argument("time limit must be positive");
}

Decision Decision::negated() const {
    Decision d = *this;
    switch (kind) {
    case Kind::Assign: d.value = !value; break;
    case Kind::AtMost:
        d.kind = Kind::AtLeast;
        d.bound = bound + 1;
        break;
    case Kind::AtLeast:
        d.kind = Kind::AtMost;
        d.bound = bound - 1;
        break;
    }
    return d;
}

bool apply(Engine& e, const Decision& d) {
    switch (d.kind) {
    case Decision::Kind::Assign: return e.assign(d.b, d.value);
    case Decision::Kind::AtMost: return e.set_max(d.x, d.bound);
    case Decision::Kind::AtLeast: return e.set_min(d.x, d.bound);
    }
    return false;
}

int compare(const Score& a, const Score& b) {
    const auto l = static_cast<__int128>(a.num) * b.den;
    const auto r = static_cast<__int128>(b.num) * a.den;
    if (l != r) return l < r ? -1 : 1;
    if (a.tie != b.tie) return a.tie > b.tie ? -1 : 1;
    return 0;
}

Score disjunct_score(const Engine& e, const DisjunctInfo& d, Heuristic h) {
    const Time tdom = e.max(d.x) + e.max(d.y) - e.min(d.x) - e.min(d.y) + 2;
    switch (h) {
    case Heuristic::TdomOverTw: return {tdom, e.weight(d.x) + e.weight(d.y), 0};
    case Heuristic::TdomPlusBw: return {tdom, 1, e.weight(d.b)};
    case Heuristic::DomOverWdeg: break;
    }
    return {2, e.weight(d.b), 0};
}

namespace {

struct Picker {
    Rng& rng;
    std::optional<Candidate> best;
    Score best_score{0, 1, 0};
    std::uint64_t ties{0};

    void offer(const Candidate& c, const Score& s) {
        const int cmp = best ? compare(s, best_score) : -1;
        if (cmp < 0) {
            best = c;
            best_score = s;
            ties = 1;
        } else if (cmp == 0 && rng.below(++ties) == 0) {
            best = c;
        }
    }
};

} // namespace

std::optional<Candidate> select_decision(const BuiltModel& model, Heuristic h, Rng& rng) {
    const Engine& e = model.engine;
    Picker pick{rng, std::nullopt, {0, 1, 0}, 0};
    for (const auto& d : model.disjuncts) {
        if (e.assigned(d.b)) continue;
        pick.offer({d.b, std::nullopt}, disjunct_score(e, d, h));
    }
    for (BoolVar b : model.et_flags) {
        if (e.assigned(b)) continue;
        pick.offer({b, std::nullopt}, {2, e.weight(b), 0});
    }
    for (IntVar x : model.et_last) {
        if (e.fixed(x)) continue;
        pick.offer({std::nullopt, x}, {e.max(x) - e.min(x) + 1, e.weight(x), 0});
    }
    return pick.best;
}

Decision choose_branch(const Engine& e, const Candidate& c, const Guide* guide) {
    Decision d;
    if (c.b) {
        d.kind = Decision::Kind::Assign;
        d.b = *c.b;
        d.value = false;
        if (guide && static_cast<std::size_t>(c.b->id) < guide->bools.size() && guide->bools[c.b->id] >= 0)
            d.value = guide->bools[c.b->id] == 1;
        return d;
    }
    const IntVar x = *c.x;
    d.x = x;
    d.kind = Decision::Kind::AtMost;
    d.bound = e.min(x);
    if (guide && static_cast<std::size_t>(x.id) < guide->ints.size()) {
        const Time v = guide->ints[x.id];
        if (v >= e.min(x) && v < e.max(x)) {
            d.bound = v;
        } else if (v == e.max(x)) {
            d.kind = Decision::Kind::AtLeast;
            d.bound = v;
        }
    }
    return d;
}

GeometricCutoffs::GeometricCutoffs(std::uint64_t base, double factor)
    : base_(static_cast<double>(base)), factor_(factor) {
    if (base < 1) throw std::invalid_argument("restart base must be at least 1");
    if (!(factor > 1.0)) throw std::invalid_argument("restart factor must exceed 1");
}

std::uint64_t GeometricCutoffs::next() {
    const double v = std::floor(base_ * scale_);
    scale_ *= factor_;
    if (v >= 1e18) return static_cast<std::uint64_t>(1e18);
    return static_cast<std::uint64_t>(v);
}

std::vector<std::vector<Lit>> extract_restart_nogoods(const DecisionStack& stack) {
    std::vector<std::vector<Lit>> out;
    std::vector<Lit> prefix; // negations of the positive decisions so far
    for (const auto& entry : stack) {
        if (!entry.decision.is_bool()) break;
        if (entry.left) {
            prefix.push_back(~entry.decision.lit());
        } else {
            // the right branch holds ~d, so d was refuted under the prefix
            auto clause = prefix;
            clause.push_back(entry.decision.lit());
            out.push_back(std::move(clause));
        }
    }
    return out;
}

SatResult solve_satisfaction(BuiltModel& model, Time bound, const SearchConfig& cfg, const Guide* guide,
                             Rng& rng, const SatLimits& limits, SearchStats& stats) {
    SatResult res;
    Engine& e = model.engine;
    const int base = e.level();
    ++stats.sat_calls;
    if (model.root_failed) {
        res.status = SatStatus::Unsat;
        return res;
    }

    e.save_level();
    const int root = e.level();
    auto finish = [&](SatStatus s) {
        e.restore_to(base);
        res.status = s;
        return res;
    };
    if (!e.set_max(model.objective, bound) || !e.reattach_nogoods() || e.propagate()) {
        ++stats.failures;
        return finish(SatStatus::Unsat);
    }

    struct Frame {
        DecisionEntry entry;
        int level;
    };
    std::vector<Frame> stack;
    GeometricCutoffs cutoffs(cfg.restart_base, cfg.restart_factor);
    const std::uint64_t nodes_at_start = stats.nodes;
    std::uint64_t cutoff = cutoffs.next();
    std::uint64_t run_failures = 0;

    auto out_of_budget = [&]() {
        if (limits.nodes && stats.nodes - nodes_at_start >= limits.nodes) return true;
        if (limits.failures && stats.failures >= limits.failures) return true;
        if (limits.deadline && (stats.nodes & 63) == 0 && std::chrono::steady_clock::now() >= *limits.deadline)
            return true;
        return false;
    };

    auto push = [&](const Decision& d, bool left) {
        stack.push_back({{d, left}, e.level()});
        e.save_level();
        ++stats.nodes;
        return apply(e, d) && !e.propagate();
    };

    // Counts one failure; true when the current run has used up its cutoff.
    auto failed = [&]() {
        ++stats.failures;
        ++run_failures;
        stats.max_failures_in_run = std::max(stats.max_failures_in_run, run_failures);
        return run_failures >= cutoff;
    };

    // After a failure of the top branch: turns the deepest open left branch
    // into its refutation without applying it. Used to snapshot the refuted
    // part of the tree at a restart.
    auto close_refuted = [&]() {
        while (!stack.empty() && !stack.back().entry.left) stack.pop_back();
        if (!stack.empty()) {
            auto& en = stack.back().entry;
            en.decision = en.decision.negated();
            en.left = false;
        }
    };

    auto restart = [&]() {
        ++stats.restarts;
        std::vector<std::vector<Lit>> clauses;
        if (cfg.record_nogoods) {
            DecisionStack ds;
            ds.reserve(stack.size());
            for (const auto& f : stack) ds.push_back(f.entry);
            clauses = extract_restart_nogoods(ds);
        }
        stack.clear();
        e.restore_to(root);
        run_failures = 0;
        cutoff = cutoffs.next();
        bool ok = true;
        for (const auto& c : clauses) {
            ++stats.nogoods;
            ok = e.post_nogood(c) && ok;
        }
        return ok && !e.propagate();
    };

    while (true) {
        if (out_of_budget()) return finish(SatStatus::Unknown);

        const auto cand = select_decision(model, cfg.heuristic, rng);
        if (!cand) {
            Solution sol = model.extract_solution();
            if (!validate_solution(model.instance, sol).ok() || sol.objective > bound)
                throw std::logic_error("search produced an invalid schedule");
            ++stats.solutions;
            res.incumbent = Incumbent{std::move(sol), Guide::capture(e)};
            return finish(SatStatus::Sat);
        }
        if (push(choose_branch(e, *cand, guide), true)) continue;

        // Backtrack until some right branch survives propagation.
        bool need_restart = failed();
        while (!need_restart) {
            while (!stack.empty() && !stack.back().entry.left) {
                e.restore_to(stack.back().level);
                stack.pop_back();
            }
            if (stack.empty()) return finish(SatStatus::Unsat);
            const Frame top = stack.back();
            stack.pop_back();
            e.restore_to(top.level);
            if (push(top.entry.decision.negated(), false)) break;
            need_restart = failed();
        }
        if (need_restart) {
            close_refuted();
            // no open left branch anywhere: the whole tree is refuted
            if (stack.empty()) return finish(SatStatus::Unsat);
            if (!restart()) return finish(SatStatus::Unsat);
        }
    }
}

OptimizationResult optimize(BuiltModel& model, const SearchConfig& cfg) {
    cfg.check();
    OptimizationResult out;
    const auto started = std::chrono::steady_clock::now();
    const auto deadline = started + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                        std::chrono::duration<double>(cfg.time_limit));
    auto elapsed = [&]() { return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count(); };

    Rng root(cfg.seed);
    Rng search_rng = root.split(2);

    Time proven_lb = model.bounds.lb;
    out.lower_bound = proven_lb;
    if (model.root_failed) {
        out.status = OptStatus::Infeasible;
        return out;
    }

    std::optional<Incumbent> inc;
    const bool greedy_applies = model.variant == Variant::TimeLag || is_no_wait(model.variant);
    if (greedy_applies && cfg.greedy_iterations > 0) {
        Rng greedy_rng = root.split(1);
        auto g = greedy_init(model, cfg.greedy_iterations, greedy_rng, cfg.greedy_failure_limit);
        if (g.best) {
            out.greedy_objective = g.best->solution.objective;
            inc = std::move(g.best);
        }
    }

    // Exclusive upper end of the open range: the incumbent's objective, or
    // one past the trivial bound while there is none.
    auto hi = [&]() { return inc ? inc->solution.objective : model.bounds.ub + 1; };

    SatLimits limits;
    limits.deadline = deadline;
    limits.failures = cfg.failure_limit;
    auto budget_left = [&]() {
        if (std::chrono::steady_clock::now() >= deadline) return false;
        return !(cfg.failure_limit && out.stats.failures >= cfg.failure_limit);
    };

    bool infeasible = false;
    // Phase 1: dichotomy under a node limit.
    limits.nodes = cfg.dichotomy_node_limit;
    Time dlb = proven_lb;
    while (dlb < hi() && budget_left()) {
        const Time target = dlb + (hi() - 1 - dlb) / 2;
        model.engine.clear_nogoods();
        auto r = solve_satisfaction(model, target, cfg, inc ? &inc->guide : nullptr, search_rng, limits, out.stats);
        if (r.status == SatStatus::Sat) {
            inc = std::move(r.incumbent);
        } else if (r.status == SatStatus::Unsat) {
            dlb = target + 1;
            proven_lb = std::max(proven_lb, target + 1);
        } else {
            dlb = target + 1;
        }
    }

    // Phase 2: tighten the incumbent without node limit. The bound only
    // decreases, so nogoods stay valid from one call to the next.
    limits.nodes = 0;
    model.engine.clear_nogoods();
    while (proven_lb < hi() && budget_left()) {
        const Time target = hi() - 1;
        auto r = solve_satisfaction(model, target, cfg, inc ? &inc->guide : nullptr, search_rng, limits, out.stats);
        if (r.status == SatStatus::Sat) {
            inc = std::move(r.incumbent);
        } else if (r.status == SatStatus::Unsat) {
            proven_lb = hi();
            if (!inc) infeasible = true;
        } else {
            break;
        }
    }
    model.engine.clear_nogoods();

    out.stats.seconds = elapsed();
    if (inc) out.best = inc->solution;
    if (infeasible) {
        out.status = OptStatus::Infeasible;
        out.lower_bound = proven_lb;
    } else if (inc && proven_lb >= inc->solution.objective) {
        out.status = OptStatus::Optimal;
        out.lower_bound = inc->solution.objective;
    } else {
        out.status = inc ? OptStatus::Feasible : OptStatus::Unknown;
        out.lower_bound = proven_lb;
    }
    return out;
}

} // namespace jsched
