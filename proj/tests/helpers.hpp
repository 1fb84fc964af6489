#pragma once

#include <string>

#include "jsched/harness.hpp"
#include "jsched/instance.hpp"
#include "jsched/models.hpp"
#include "jsched/search.hpp"

namespace testing {

inline std::string data_path(const std::string& rel) { return std::string(JSCHED_DATA_DIR) + "/" + rel; }

inline jsched::Instance lawrence(int k) {
    char name[32];
    std::snprintf(name, sizeof name, "lawrence/la%02d.txt", k);
    return jsched::load_instance_file(data_path(name), "jsp");
}

inline jsched::Instance with_lag(const jsched::Instance& base, const char* y) {
    return jsched::derive_time_lag(base, 0, jsched::LagFactor::parse(y));
}

/// Small-instance configuration: no wall clock in play, exact runs.
inline jsched::SearchConfig exact_config(std::uint64_t seed = 1) {
    jsched::SearchConfig cfg;
    cfg.seed = seed;
    cfg.time_limit = 1e6;
    cfg.greedy_iterations = 20;
    cfg.restart_base = 16;
    return cfg;
}

inline jsched::OptimizationResult solve(const jsched::Instance& inst, jsched::Variant v,
                                        const jsched::SearchConfig& cfg) {
    auto model = jsched::build_model(inst, v);
    return jsched::optimize(model, cfg);
}

} // namespace testing
