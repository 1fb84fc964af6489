#include "jsched/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace jsched {

namespace {

Time floor_div(Time a, Time b) {
    Time q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

Time ceil_div(Time a, Time b) { return -floor_div(-a, b); }

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

IntVar Engine::new_int(Time lo, Time hi) {
    IntVar x{static_cast<std::int32_t>(lo_.size())};
    lo_.push_back(lo);
    hi_.push_back(hi);
    int_weight_.push_back(1);
    int_watch_.emplace_back();
    return x;
}

BoolVar Engine::new_bool() {
    BoolVar b{static_cast<std::int32_t>(bool_.size())};
    bool_.push_back(BoolState::Unassigned);
    bool_weight_.push_back(1);
    bool_watch_.emplace_back();
    watches_.emplace_back();
    watches_.emplace_back();
    return b;
}

bool Engine::is_true(Lit l) const {
    auto s = bool_[l.var.id];
    return s != BoolState::Unassigned && (s == BoolState::One) == l.value;
}

bool Engine::is_false(Lit l) const {
    auto s = bool_[l.var.id];
    return s != BoolState::Unassigned && (s == BoolState::One) != l.value;
}

ConstraintId Engine::add_constraint(Constraint c) {
    auto id = static_cast<std::int32_t>(constraints_.size());
    constraints_.push_back(std::move(c));
    in_queue_.push_back(0);
    enqueue(id);
    return {id};
}

ConstraintId Engine::post_precedence(IntVar x, Time offset, IntVar y) {
    auto id = add_constraint(Precedence{x, offset, y});
    watch(x, id.id);
    watch(y, id.id);
    return id;
}

BoolVar Engine::post_disjunct(IntVar x, Time fwd, IntVar y, Time bwd) {
    BoolVar b = new_bool();
    auto id = add_constraint(Disjunct{b, x, fwd, y, bwd});
    watch(x, id.id);
    watch(y, id.id);
    watch(b, id.id);
    return b;
}

EtObjectiveVars Engine::post_et_objective(std::span<const EtJobTerm> jobs) {
    EtObjectiveVars out;
    WeightedSum sum;
    Time total_hi = 0;
    for (const auto& j : jobs) {
        const Time cmin = lo_[j.last.id] + j.duration;
        const Time cmax = hi_[j.last.id] + j.duration;
        BoolVar e = new_bool();
        BoolVar l = new_bool();
        IntVar earliness = new_int(0, std::max<Time>(0, j.due - cmin));
        IntVar lateness = new_int(0, std::max<Time>(0, cmax - j.due));
        total_hi += j.w_early * max(earliness) + j.w_tardy * max(lateness);
        auto id = add_constraint(EarlyTardy{j.last, j.duration, j.due, e, l, earliness, lateness});
        watch(j.last, id.id);
        watch(e, id.id);
        watch(l, id.id);
        watch(earliness, id.id);
        watch(lateness, id.id);
        sum.terms.emplace_back(j.w_early, earliness);
        sum.terms.emplace_back(j.w_tardy, lateness);
        out.early.push_back(e);
        out.late.push_back(l);
        out.earliness.push_back(earliness);
        out.lateness.push_back(lateness);
    }
    out.total = new_int(0, total_hi);
    sum.total = out.total;
    auto terms = sum.terms;
    auto id = add_constraint(std::move(sum));
    for (auto& [w, v] : terms) watch(v, id.id);
    watch(out.total, id.id);
    return out;
}

std::vector<IntVar> Engine::int_scope(ConstraintId c) const {
    return std::visit(overloaded{
                          [](const Precedence& p) { return std::vector<IntVar>{p.x, p.y}; },
                          [](const Disjunct& d) { return std::vector<IntVar>{d.x, d.y}; },
                          [](const EarlyTardy& e) {
                              return std::vector<IntVar>{e.last, e.earliness, e.lateness};
                          },
                          [](const WeightedSum& s) {
                              std::vector<IntVar> v;
                              for (auto& t : s.terms) v.push_back(t.second);
                              v.push_back(s.total);
                              return v;
                          },
                      },
                      constraints_[c.id]);
}

void Engine::enqueue(std::int32_t c) {
    if (in_queue_[c]) return;
    in_queue_[c] = 1;
    queue_.push_back(c);
}

void Engine::notify_int(IntVar x) {
    for (auto c : int_watch_[x.id])
        if (c != current_) enqueue(c);
}

bool Engine::set_min(IntVar x, Time v) {
    if (v <= lo_[x.id]) return true;
    if (v > hi_[x.id]) return false;
    trail_.push_back({x.id, TrailKind::Min, lo_[x.id]});
    lo_[x.id] = v;
    notify_int(x);
    return true;
}

bool Engine::set_max(IntVar x, Time v) {
    if (v >= hi_[x.id]) return true;
    if (v < lo_[x.id]) return false;
    trail_.push_back({x.id, TrailKind::Max, hi_[x.id]});
    hi_[x.id] = v;
    notify_int(x);
    return true;
}

bool Engine::assign(BoolVar b, bool value) {
    const auto want = value ? BoolState::One : BoolState::Zero;
    auto& s = bool_[b.id];
    if (s != BoolState::Unassigned) return s == want;
    trail_.push_back({b.id, TrailKind::Bool, 0});
    s = want;
    bool_events_.push_back(b);
    for (auto c : bool_watch_[b.id])
        if (c != current_) enqueue(c);
    return true;
}

void Engine::save_level() { levels_.push_back(trail_.size()); }

void Engine::restore_to(int target) {
    if (target < 0) throw std::out_of_range("restore_to: negative level");
    if (target >= level()) {
        clear_queues();
        return;
    }
    const auto mark = levels_[target];
    while (trail_.size() > mark) {
        const auto& e = trail_.back();
        switch (e.kind) {
        case TrailKind::Min: lo_[e.var] = e.old; break;
        case TrailKind::Max: hi_[e.var] = e.old; break;
        case TrailKind::Bool: bool_[e.var] = BoolState::Unassigned; break;
        }
        trail_.pop_back();
    }
    levels_.resize(target);
    clear_queues();
}

void Engine::clear_queues() {
    for (auto i = queue_head_; i < queue_.size(); ++i) in_queue_[queue_[i]] = 0;
    queue_.clear();
    queue_head_ = 0;
    bool_events_.clear();
    bool_head_ = 0;
}

std::optional<Conflict> Engine::propagate() {
    for (;;) {
        if (bool_head_ < bool_events_.size()) {
            BoolVar b = bool_events_[bool_head_++];
            if (auto bad = propagate_clauses(b); !bad) {
                ++failures_;
                clear_queues();
                return Conflict{ConflictSource::Nogood, -1};
            }
            continue;
        }
        if (queue_head_ < queue_.size()) {
            const auto c = queue_[queue_head_++];
            in_queue_[c] = 0;
            current_ = c;
            const bool ok = run(c);
            current_ = -1;
            if (!ok) {
                bump(c);
                ++failures_;
                clear_queues();
                return Conflict{ConflictSource::Constraint, c};
            }
            continue;
        }
        queue_.clear();
        queue_head_ = 0;
        bool_events_.clear();
        bool_head_ = 0;
        return std::nullopt;
    }
}

void Engine::bump(std::int32_t c) {
    std::visit(overloaded{
                   [&](const Precedence& p) {
                       ++int_weight_[p.x.id];
                       ++int_weight_[p.y.id];
                   },
                   [&](const Disjunct& d) {
                       ++int_weight_[d.x.id];
                       ++int_weight_[d.y.id];
                       ++bool_weight_[d.b.id];
                   },
                   [&](const EarlyTardy& e) {
                       ++int_weight_[e.last.id];
                       ++int_weight_[e.earliness.id];
                       ++int_weight_[e.lateness.id];
                       ++bool_weight_[e.early.id];
                       ++bool_weight_[e.late.id];
                   },
                   [&](const WeightedSum& s) {
                       for (auto& t : s.terms) ++int_weight_[t.second.id];
                       ++int_weight_[s.total.id];
                   },
               },
               constraints_[c]);
}

bool Engine::run(std::int32_t c) {
    return std::visit([this](const auto& k) { return run(k); }, constraints_[c]);
}

bool Engine::enforce(IntVar x, Time offset, IntVar y) {
    return set_min(y, lo_[x.id] + offset) && set_max(x, hi_[y.id] - offset);
}

bool Engine::run(const Precedence& c) { return enforce(c.x, c.offset, c.y); }

bool Engine::run(const Disjunct& c) {
    switch (bool_[c.b.id]) {
    case BoolState::Zero: return enforce(c.x, c.fwd, c.y);
    case BoolState::One: return enforce(c.y, c.bwd, c.x);
    case BoolState::Unassigned: break;
    }
    const bool before = lo_[c.x.id] + c.fwd <= hi_[c.y.id];
    const bool after = lo_[c.y.id] + c.bwd <= hi_[c.x.id];
    if (!before && !after) return false;
    if (!before) {
        assign(c.b, true);
        return enforce(c.y, c.bwd, c.x);
    }
    if (!after) {
        assign(c.b, false);
        return enforce(c.x, c.fwd, c.y);
    }
    return true;
}

bool Engine::run(const EarlyTardy& c) {
    bool changed = true;
    auto lower = [&](IntVar x, Time v) {
        if (v <= lo_[x.id]) return true;
        changed = true;
        return set_min(x, v);
    };
    auto upper = [&](IntVar x, Time v) {
        if (v >= hi_[x.id]) return true;
        changed = true;
        return set_max(x, v);
    };
    auto fix = [&](BoolVar b, bool v) {
        changed = true;
        return assign(b, v);
    };
    const Time p = c.duration;
    const Time d = c.due;
    while (changed) {
        changed = false;
        const Time cmin = lo_[c.last.id] + p;
        const Time cmax = hi_[c.last.id] + p;

        if (!assigned(c.early)) {
            if (cmax < d || lo_[c.earliness.id] > 0) {
                if (!fix(c.early, true)) return false;
            } else if (cmin >= d || hi_[c.earliness.id] == 0) {
                if (!fix(c.early, false)) return false;
            }
        }
        if (!assigned(c.late)) {
            if (cmin > d || lo_[c.lateness.id] > 0) {
                if (!fix(c.late, true)) return false;
            } else if (cmax <= d || hi_[c.lateness.id] == 0) {
                if (!fix(c.late, false)) return false;
            }
        }

        // completion lies in [d - earliness, d + lateness] whatever the flags say
        if (!lower(c.last, d - hi_[c.earliness.id] - p)) return false;
        if (!upper(c.last, d + hi_[c.lateness.id] - p)) return false;

        switch (bool_[c.early.id]) {
        case BoolState::One:
            if (!upper(c.last, d - 1 - p)) return false;
            if (!lower(c.earliness, d - (hi_[c.last.id] + p))) return false;
            if (!upper(c.earliness, d - (lo_[c.last.id] + p))) return false;
            if (!lower(c.last, d - hi_[c.earliness.id] - p)) return false;
            if (!upper(c.last, d - lo_[c.earliness.id] - p)) return false;
            break;
        case BoolState::Zero:
            if (!lower(c.last, d - p)) return false;
            if (!upper(c.earliness, 0)) return false;
            break;
        case BoolState::Unassigned:
            if (!upper(c.earliness, std::max<Time>(0, d - cmin))) return false;
            break;
        }

        switch (bool_[c.late.id]) {
        case BoolState::One:
            if (!lower(c.last, d + 1 - p)) return false;
            if (!lower(c.lateness, lo_[c.last.id] + p - d)) return false;
            if (!upper(c.lateness, hi_[c.last.id] + p - d)) return false;
            if (!upper(c.last, d + hi_[c.lateness.id] - p)) return false;
            if (!lower(c.last, d + lo_[c.lateness.id] - p)) return false;
            break;
        case BoolState::Zero:
            if (!upper(c.last, d - p)) return false;
            if (!upper(c.lateness, 0)) return false;
            break;
        case BoolState::Unassigned:
            if (!upper(c.lateness, std::max<Time>(0, cmax - d))) return false;
            break;
        }
    }
    return true;
}

bool Engine::run(const WeightedSum& c) {
    bool changed = true;
    while (changed) {
        changed = false;
        Time summin = 0;
        Time summax = 0;
        for (const auto& [w, v] : c.terms) {
            summin += w * lo_[v.id];
            summax += w * hi_[v.id];
        }
        if (!set_min(c.total, summin) || !set_max(c.total, summax)) return false;
        const Time tmax = hi_[c.total.id];
        const Time tmin = lo_[c.total.id];
        for (const auto& [w, v] : c.terms) {
            if (w == 0) continue;
            const Time vmax = floor_div(tmax - (summin - w * lo_[v.id]), w);
            if (vmax < hi_[v.id]) {
                if (!set_max(v, vmax)) return false;
                changed = true;
            }
            const Time vmin = ceil_div(tmin - (summax - w * hi_[v.id]), w);
            if (vmin > lo_[v.id]) {
                if (!set_min(v, vmin)) return false;
                changed = true;
            }
        }
    }
    return true;
}

// Returns false on a falsified clause.
bool Engine::propagate_clauses(BoolVar b) {
    const Lit falsified{b, bool_[b.id] != BoolState::One};
    auto& ws = watches_[code(falsified)];
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < ws.size()) {
        const auto ci = ws[i++];
        auto& cl = clauses_[ci];
        if (cl[0] == falsified) std::swap(cl[0], cl[1]);
        if (is_true(cl[0])) {
            ws[j++] = ci;
            continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < cl.size(); ++k) {
            if (!is_false(cl[k])) {
                std::swap(cl[1], cl[k]);
                watches_[code(cl[1])].push_back(ci);
                moved = true;
                break;
            }
        }
        if (moved) continue;
        ws[j++] = ci;
        if (is_false(cl[0])) {
            while (i < ws.size()) ws[j++] = ws[i++];
            ws.resize(j);
            return false;
        }
        assign(cl[0].var, cl[0].value);
    }
    ws.resize(j);
    return true;
}

bool Engine::attach(std::vector<Lit> lits) {
    std::sort(lits.begin(), lits.end(), [](Lit a, Lit b) { return code(a) < code(b); });
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t k = 1; k < lits.size(); ++k)
        if (lits[k].var == lits[k - 1].var) return true; // tautology
    if (lits.empty()) return false;

    std::stable_partition(lits.begin(), lits.end(), [this](Lit l) { return !is_false(l); });
    const bool conflict = is_false(lits[0]);
    if (lits.size() == 1) {
        units_.push_back(lits[0]);
        return !conflict && apply(lits[0]);
    }
    if (!conflict && is_false(lits[1]) && !assigned(lits[0].var)) apply(lits[0]);
    const auto ci = static_cast<std::int32_t>(clauses_.size());
    watches_[code(lits[0])].push_back(ci);
    watches_[code(lits[1])].push_back(ci);
    clauses_.push_back(std::move(lits));
    return !conflict;
}

bool Engine::post_nogood(std::span<const Lit> clause) {
    return attach(std::vector<Lit>(clause.begin(), clause.end()));
}

bool Engine::reattach_nogoods() {
    for (auto& w : watches_) w.clear();
    auto clauses = std::move(clauses_);
    auto units = std::move(units_);
    clauses_.clear();
    units_.clear();
    bool ok = true;
    for (auto& u : units) ok = attach({u}) && ok;
    for (auto& c : clauses) ok = attach(std::move(c)) && ok;
    return ok;
}

void Engine::clear_nogoods() {
    for (auto& w : watches_) w.clear();
    clauses_.clear();
    units_.clear();
}

} // namespace jsched
