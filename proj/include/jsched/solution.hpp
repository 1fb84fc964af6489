#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jsched/instance.hpp"

namespace jsched {

enum class Variant { Jsp, Et, TimeLag, NoWaitTask, NoWaitInterval };

const char* to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view s);

[[nodiscard]] inline bool is_no_wait(Variant v) {
    return v == Variant::NoWaitTask || v == Variant::NoWaitInterval;
}
[[nodiscard]] inline bool minimizes_makespan(Variant v) { return v != Variant::Et; }

/// Start time of every task (task = job * m + position) and the objective
/// the schedule was reported with.
struct Solution {
    Variant variant{Variant::Jsp};
    std::vector<Time> starts;
    Time objective{0};
};

struct Violation {
    enum class Kind {
        Shape,
        NegativeStart,
        Release,
        JobOrder,
        MaxLag,
        MachineOverlap,
        Objective,
    };
    Kind kind;
    int task_a{-1};
    int task_b{-1};
    std::string message;
};

struct Validation {
    std::optional<Violation> violation;
    Time objective{0}; ///< recomputed from the starts

    [[nodiscard]] bool ok() const { return !violation.has_value(); }
};

Time makespan(const Instance& inst, const std::vector<Time>& starts);
/// Weighted earliness plus tardiness of the job completion times.
Time et_cost(const Instance& inst, const std::vector<Time>& starts);
Time evaluate(const Instance& inst, Variant v, const std::vector<Time>& starts);

/// Checks every constraint of the variant and reports the first violation.
Validation validate_solution(const Instance& inst, const Solution& sol);

} // namespace jsched
