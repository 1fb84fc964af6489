#include <catch_amalgamated.hpp>

#include <set>

#include "helpers.hpp"
#include "oracle.hpp"

using namespace jsched;

namespace {

std::size_t count_precedences_and_links(const BuiltModel& m) {
    return m.engine.num_constraints() - m.disjuncts.size();
}

} // namespace

TEST_CASE("JSP model sizes") {
    auto tiny = parse_jsp("2 2\n0 3 1 2\n1 2 0 4\n");
    auto m = build_jsp(tiny, 20);
    CHECK(m.disjuncts.size() == 2);
    CHECK(m.engine.num_bools() == 2);
    // two job precedences plus two makespan links
    CHECK(count_precedences_and_links(m) == 4);

    Rng rng(1);
    auto ten = oracle::random_shop(rng, 10, 10, 1, 99);
    auto big = build_model(ten, Variant::Jsp);
    CHECK(big.engine.num_bools() == 450);
}

TEST_CASE("heads and conflict offsets of the two-job example") {
    auto inst = oracle::two_job_example();
    auto h = compute_heads(inst);
    CHECK(std::vector<Time>(h.begin(), h.begin() + 4) == std::vector<Time>{0, 20, 70, 150});
    CHECK(std::vector<Time>(h.begin() + 4, h.end()) == std::vector<Time>{0, 60, 105, 125});

    // f(i,j) = h_i + p_i - h_j per machine, with i in job x and j in job y
    std::vector<Time> f;
    for (int k = 0; k < 4; ++k) {
        const int i = inst.task(0, k);
        int j = -1;
        for (int q = 0; q < 4; ++q)
            if (inst.jobs[1][q].machine == inst.op(i).machine) j = inst.task(1, q);
        f.push_back(h[i] + inst.op(i).duration - h[j]);
    }
    CHECK(f == std::vector<Time>{20, -35, 25, 140});
}

TEST_CASE("maximal forbidden intervals") {
    auto inst = oracle::two_job_example();
    auto iv = get_f_intervals(inst, 0, 1);
    CHECK(iv == std::vector<ForbiddenInterval>{{-105, 25}, {45, 140}});

    auto unit = parse_jsp("2 1\n0 1\n0 1\n");
    CHECK(get_f_intervals(unit, 0, 1) == std::vector<ForbiddenInterval>{{-1, 1}});

    // zero-length tasks give empty intervals, which are dropped
    auto zero = parse_jsp("2 1\n0 0\n0 0\n");
    CHECK(get_f_intervals(zero, 0, 1).empty());

    // open intervals that only touch leave the shared point allowed
    auto touch = parse_jsp("2 2\n0 2 1 2\n1 2 0 2\n");
    // machine 0: (-4, 0), machine 1: (0, 4)
    CHECK(get_f_intervals(touch, 0, 1) == std::vector<ForbiddenInterval>{{-4, 0}, {0, 4}});
}

TEST_CASE("merged intervals agree pointwise with the pairwise conflicts") {
    Rng rng(17);
    for (int round = 0; round < 300; ++round) {
        auto inst = oracle::random_shop(rng, 2, 6, 0, 30);
        const auto heads = compute_heads(inst);
        auto iv = get_f_intervals(inst, 0, 1);
        for (std::size_t k = 0; k < iv.size(); ++k) {
            CHECK(iv[k].lo < iv[k].hi);
            if (k) CHECK(iv[k - 1].hi <= iv[k].lo);
        }
        // offset J_y - J_x = d clashes on a machine when the open task
        // intervals intersect
        auto clash = [&](Time d) {
            for (int a = 0; a < 6; ++a) {
                for (int b = 0; b < 6; ++b) {
                    const int i = inst.task(0, a), j = inst.task(1, b);
                    if (inst.op(i).machine != inst.op(j).machine) continue;
                    const Time si = heads[i], sj = d + heads[j];
                    if (si < sj + inst.op(j).duration && sj < si + inst.op(i).duration) return true;
                }
            }
            return false;
        };
        auto inside = [&](Time d) {
            for (const auto& f : iv)
                if (f.lo < d && d < f.hi) return true;
            return false;
        };
        for (Time d = -200; d <= 200; ++d) {
            INFO("round " << round << " offset " << d);
            REQUIRE(clash(d) == inside(d));
        }
    }
}

TEST_CASE("interval model Booleans follow the offset semantics") {
    auto inst = oracle::two_job_example();
    auto m = build_nwjsp_interval(inst, 1000);
    REQUIRE(m.disjuncts.size() == 2);
    auto task = build_nwjsp_task(inst, 1000);
    CHECK(task.disjuncts.size() == 4);

    auto& e = m.engine;
    const IntVar jx = m.first_var(0), jy = m.first_var(1);
    // state zero of the first interval puts job y at least 105 before job x
    e.save_level();
    REQUIRE(e.assign(m.disjuncts[0].b, false));
    REQUIRE_FALSE(e.propagate());
    CHECK(e.min(jx) >= e.min(jy) + 105);
    e.restore_to(0);
    e.save_level();
    REQUIRE(e.assign(m.disjuncts[1].b, true));
    REQUIRE_FALSE(e.propagate());
    CHECK(e.min(jy) >= e.min(jx) + 140);
    e.restore_to(0);
}

TEST_CASE("interval model never needs more Booleans than the task model") {
    for (int k = 1; k <= 40; ++k) {
        auto inst = testing::with_lag(testing::lawrence(k), "0");
        auto iv = build_nwjsp_interval(inst, trivial_bounds(inst, Variant::NoWaitInterval).ub);
        auto tk = build_nwjsp_task(inst, trivial_bounds(inst, Variant::NoWaitTask).ub);
        INFO("la" << k);
        CHECK(iv.engine.num_bools() <= tk.engine.num_bools());
    }
}

TEST_CASE("trivial bounds") {
    auto one = parse_jsp("1 2\n0 3 1 4\n");
    auto b = trivial_bounds(one, Variant::Jsp);
    CHECK(b.lb == 7);
    CHECK(b.ub == 7);
    auto nw = trivial_bounds(testing::with_lag(one, "0"), Variant::NoWaitTask);
    CHECK(nw.lb == 7);
    CHECK(nw.ub == 7);

    auto two = parse_jsp("2 1\n0 3\n0 4\n");
    b = trivial_bounds(two, Variant::Jsp);
    CHECK(b.lb == 7);
    CHECK(b.ub == 7);

    // lags at their maximum stretch each job
    auto lagged = parse_tl("1 3\n0 3 1 4 2 5\n2 1\n");
    b = trivial_bounds(lagged, Variant::TimeLag);
    CHECK(b.ub == 3 + 2 + 4 + 1 + 5);
}

TEST_CASE("bounds sandwich the optimum on random shops") {
    Rng rng(8);
    for (int round = 0; round < 40; ++round) {
        auto inst = oracle::random_shop(rng, 3, 3, 1, 9);
        for (const char* y : {"0", "1", "inf"}) {
            auto tl = testing::with_lag(inst, y);
            auto opt = oracle::min_makespan(tl, Variant::TimeLag);
            REQUIRE(opt);
            auto b = trivial_bounds(tl, Variant::TimeLag);
            CHECK(b.lb <= *opt);
            CHECK(*opt <= b.ub);
        }
        auto opt = oracle::min_makespan(inst, Variant::Jsp);
        auto b = trivial_bounds(inst, Variant::Jsp);
        CHECK(b.lb <= *opt);
        CHECK(*opt <= b.ub);
    }
}

TEST_CASE("zero lags chain a job completely") {
    auto inst = parse_tl("1 3\n0 3 1 4 2 5\n0 0\n");
    auto m = build_tljsp(inst, 100);
    REQUIRE_FALSE(m.root_failed);
    m.engine.save_level();
    REQUIRE(m.engine.set_max(m.first_var(0), 10));
    REQUIRE(m.engine.set_min(m.first_var(0), 10));
    REQUIRE_FALSE(m.engine.propagate());
    CHECK(m.engine.fixed(m.task_var[1]));
    CHECK(m.engine.min(m.task_var[1]) == 13);
    CHECK(m.engine.min(m.task_var[2]) == 17);
}

TEST_CASE("model errors") {
    auto plain = parse_jsp("1 2\n0 3 1 4\n");
    CHECK_THROWS_AS(build_nwjsp_task(plain, 10), ModelError);
    CHECK_THROWS_AS(build_nwjsp_interval(testing::with_lag(plain, "1"), 10), ModelError);
    CHECK_THROWS_AS(build_etjsp(plain, 10), ModelError);
}

TEST_CASE("earliness/tardiness model branching set") {
    auto inst = parse_et("2 2\n0 3 1 2\n1 2 0 4\n5 1 1\n9 1 2\n");
    auto m = build_etjsp(inst, trivial_bounds(inst, Variant::Et).ub);
    CHECK(m.disjuncts.size() == 2);
    CHECK(m.et_flags.size() == 4);
    CHECK(m.et_last.size() == 2);
    REQUIRE(m.et);
    CHECK(m.objective == m.et->total);
}

TEST_CASE("start domains respect release dates and the tail of the job") {
    auto inst = parse_et("1 3\n0 3 1 4 2 5\n6 20 1 1\n");
    auto m = build_etjsp(inst, 100);
    CHECK(m.engine.min(m.task_var[0]) == 6);
    CHECK(m.engine.min(m.task_var[1]) == 9);
    CHECK(m.engine.min(m.task_var[2]) == 13);
}
