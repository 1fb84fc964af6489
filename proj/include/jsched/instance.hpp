#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jsched/engine.hpp"

namespace jsched {

struct Operation {
    int machine{0};
    Time duration{0};
};

/// Per-job earliness/tardiness data.
struct JobTargets {
    Time release{0};
    Time due{0};
    Time w_early{1};
    Time w_tardy{1};
};

/// Maximal lag between two consecutive operations; nullopt means unbounded.
using Lag = std::optional<Time>;

/// An n x m shop: every job visits every machine exactly once. Tasks are
/// numbered job-major, task = job * m + position.
struct Instance {
    std::string name;
    int n_jobs{0};
    int n_machines{0};
    std::vector<std::vector<Operation>> jobs;
    /// Empty, or one row of m-1 gaps per job.
    std::vector<std::vector<Lag>> lags;
    /// Empty, or one entry per job.
    std::vector<JobTargets> targets;

    [[nodiscard]] bool has_lags() const { return !lags.empty(); }
    [[nodiscard]] bool has_targets() const { return !targets.empty(); }
    [[nodiscard]] int num_tasks() const { return n_jobs * n_machines; }
    [[nodiscard]] int task(int job, int pos) const { return job * n_machines + pos; }
    [[nodiscard]] const Operation& op(int task) const {
        return jobs[task / n_machines][task % n_machines];
    }
    [[nodiscard]] Time job_length(int job) const;
    [[nodiscard]] Time machine_load(int machine) const;
    [[nodiscard]] Time total_duration() const;
    [[nodiscard]] Time release(int job) const { return has_targets() ? targets[job].release : 0; }

    /// Throws std::invalid_argument when the shop structure is broken.
    void check() const;
};

enum class ParseErrorKind {
    MalformedHeader,
    ShortRow,
    LongRow,
    MachineOutOfRange,
    DuplicateMachine,
    NegativeDuration,
    BadNumber,
    Overflow,
    CountMismatch,
    NegativeLag,
};

const char* to_string(ParseErrorKind k);

class ParseError : public std::runtime_error {
public:
    ParseError(ParseErrorKind kind, int line, const std::string& what);
    [[nodiscard]] ParseErrorKind kind() const { return kind_; }
    [[nodiscard]] int line() const { return line_; }

private:
    ParseErrorKind kind_;
    int line_;
};

/// OR-library job-shop text: a header line "n m", then n lines of m
/// "machine duration" pairs with 0-indexed machines. Blank lines and lines
/// starting with '#' are ignored; tokens are separated by any whitespace.
Instance parse_jsp(std::string_view text, std::string name = {});

/// Job-shop body followed by n lines "[release] due w_early w_tardy".
/// A three-field line omits the release date, which then defaults to 0.
Instance parse_et(std::string_view text, std::string name = {});

/// Job-shop body followed by n lines of m-1 maximal lags; "inf" marks an
/// unbounded gap.
Instance parse_tl(std::string_view text, std::string name = {});

std::string write_jsp(const Instance& inst);
std::string write_et(const Instance& inst);
std::string write_tl(const Instance& inst);

/// A lag multiplier for instance derivation: a non-negative decimal, or
/// unbounded.
struct LagFactor {
    std::int64_t num{0};
    std::int64_t den{1};
    bool infinite{false};

    /// Accepts "0", "0.25", "10", "inf".
    static LagFactor parse(std::string_view s);
    [[nodiscard]] std::string str() const;
};

/// Derives N_x_y: every gap of a job gets lag floor(y * mean duration of the
/// job). Only x = 0 is supported.
Instance derive_time_lag(const Instance& base, int min_lag_factor, LagFactor y);

Instance load_instance_file(const std::string& path, std::string_view format);

} // namespace jsched
