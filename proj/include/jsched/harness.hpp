#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jsched/search.hpp"

namespace jsched {

struct RunReport {
    std::string instance;
    Variant variant{Variant::Jsp};
    std::uint64_t seed{0};
    std::optional<Time> best;
    bool proven{false};
    Time lb{0};
    std::string status;
    std::optional<Time> greedy;
    std::uint64_t failures{0};
    std::uint64_t restarts{0};
    std::uint64_t nodes{0};
    double seconds{0.0};
    /// Set when the cell could not run; the other fields are then defaults.
    std::string error;
    std::optional<Solution> solution;
};

/// Builds the model for `v` and optimizes it. Never throws for per-run
/// problems such as a model error; they land in `error`.
RunReport run_one(const Instance& inst, Variant v, const SearchConfig& cfg);

struct Cell {
    const Instance* instance;
    std::uint64_t seed;
};

/// Runs every (instance, seed) cell on `workers` threads. Reports come back
/// in cell order; `on_done` is called under a lock as cells finish.
std::vector<RunReport> run_matrix(const std::vector<Instance>& instances, Variant v, const SearchConfig& base,
                                  const std::vector<std::uint64_t>& seeds, unsigned workers,
                                  const std::function<void(const RunReport&)>& on_done = {});

/// One JSON object per report. Timing sits in "seconds" only.
std::string to_jsonl(const RunReport& r);
std::string csv_header();
std::string to_csv(const RunReport& r);

/// {instance, variant, starts, objective, seed, stats}
std::string solution_json(const RunReport& r);

/// Two whitespace-separated columns per line: instance name and best-known
/// value. '#' starts a comment.
std::map<std::string, Time> read_reference(const std::string& path);

struct SummaryRow {
    std::string instance;
    std::size_t runs{0};
    std::size_t proven{0};
    std::optional<Time> best;
    std::optional<Time> worst;
    std::optional<Time> reference;
    std::optional<double> prd_best;
    std::optional<double> prd_worst;
};

std::vector<SummaryRow> summarize(const std::vector<RunReport>& reports, const std::map<std::string, Time>& ref);
std::string summary_csv(const std::vector<SummaryRow>& rows, bool with_reference);

} // namespace jsched
