#include "jsched/instance.hpp"

#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

namespace jsched {

namespace {

// Per-value and total caps keep every derived quantity (sums, weighted
// costs) far inside 64-bit range.
constexpr Time kMaxValue = Time{1} << 40;
constexpr Time kMaxTotal = Time{1} << 50;

struct Line {
    int number;
    std::vector<std::string_view> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
    std::vector<Line> lines;
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto raw = text.substr(pos, end - pos);
        ++number;
        Line line{number, {}};
        std::size_t i = 0;
        while (i < raw.size()) {
            while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
            std::size_t j = i;
            while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
            if (j > i) line.tokens.push_back(raw.substr(i, j - i));
            i = j;
        }
        if (!line.tokens.empty() && line.tokens.front().front() != '#') lines.push_back(std::move(line));
        if (end == text.size()) break;
        pos = end + 1;
    }
    return lines;
}

Time to_int(std::string_view tok, int line) {
    Time v{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec == std::errc::result_out_of_range)
        throw ParseError(ParseErrorKind::Overflow, line, "integer out of range: " + std::string(tok));
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError(ParseErrorKind::BadNumber, line, "not an integer: " + std::string(tok));
    if (v > kMaxValue || v < -kMaxValue)
        throw ParseError(ParseErrorKind::Overflow, line, "value too large: " + std::string(tok));
    return v;
}

struct Cursor {
    std::vector<Line> lines;
    std::size_t next{0};
};

Instance parse_body(Cursor& cur, std::string name) {
    if (cur.lines.empty())
        throw ParseError(ParseErrorKind::MalformedHeader, 0, "empty input");
    const auto& header = cur.lines[cur.next++];
    if (header.tokens.size() != 2)
        throw ParseError(ParseErrorKind::MalformedHeader, header.number, "header must be \"n m\"");
    Time n = 0;
    Time m = 0;
    try {
        n = to_int(header.tokens[0], header.number);
        m = to_int(header.tokens[1], header.number);
    } catch (const ParseError&) {
        throw ParseError(ParseErrorKind::MalformedHeader, header.number, "header must hold two integers");
    }
    if (n < 1 || m < 1 || n > 100000 || m > 100000)
        throw ParseError(ParseErrorKind::MalformedHeader, header.number, "bad job or machine count");

    Instance inst;
    inst.name = std::move(name);
    inst.n_jobs = static_cast<int>(n);
    inst.n_machines = static_cast<int>(m);
    Time total = 0;
    for (int x = 0; x < inst.n_jobs; ++x) {
        if (cur.next >= cur.lines.size())
            throw ParseError(ParseErrorKind::ShortRow, header.number, "missing job rows");
        const auto& row = cur.lines[cur.next++];
        const auto expected = static_cast<std::size_t>(2 * m);
        if (row.tokens.size() < expected)
            throw ParseError(ParseErrorKind::ShortRow, row.number, "job row has too few entries");
        if (row.tokens.size() > expected)
            throw ParseError(ParseErrorKind::LongRow, row.number, "job row has too many entries");
        std::vector<Operation> ops;
        std::vector<char> seen(static_cast<std::size_t>(m), 0);
        for (std::size_t k = 0; k < expected; k += 2) {
            const Time mach = to_int(row.tokens[k], row.number);
            const Time dur = to_int(row.tokens[k + 1], row.number);
            if (mach < 0 || mach >= m)
                throw ParseError(ParseErrorKind::MachineOutOfRange, row.number,
                                 "machine " + std::to_string(mach) + " out of range");
            if (seen[mach])
                throw ParseError(ParseErrorKind::DuplicateMachine, row.number,
                                 "machine " + std::to_string(mach) + " visited twice");
            seen[mach] = 1;
            if (dur < 0)
                throw ParseError(ParseErrorKind::NegativeDuration, row.number, "negative duration");
            total += dur;
            if (total > kMaxTotal)
                throw ParseError(ParseErrorKind::Overflow, row.number, "total duration too large");
            ops.push_back({static_cast<int>(mach), dur});
        }
        inst.jobs.push_back(std::move(ops));
    }
    return inst;
}

} // namespace

const char* to_string(ParseErrorKind k) {
    switch (k) {
    case ParseErrorKind::MalformedHeader: return "malformed-header";
    case ParseErrorKind::ShortRow: return "short-row";
    case ParseErrorKind::LongRow: return "long-row";
    case ParseErrorKind::MachineOutOfRange: return "machine-out-of-range";
    case ParseErrorKind::DuplicateMachine: return "duplicate-machine";
    case ParseErrorKind::NegativeDuration: return "negative-duration";
    case ParseErrorKind::BadNumber: return "bad-number";
    case ParseErrorKind::Overflow: return "overflow";
    case ParseErrorKind::CountMismatch: return "count-mismatch";
    case ParseErrorKind::NegativeLag: return "negative-lag";
    }
    return "unknown";
}

ParseError::ParseError(ParseErrorKind kind, int line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + to_string(kind) + ": " + what),
      kind_(kind), line_(line) {}

Time Instance::job_length(int job) const {
    Time s = 0;
    for (const auto& op : jobs[job]) s += op.duration;
    return s;
}

Time Instance::machine_load(int machine) const {
    Time s = 0;
    for (const auto& j : jobs)
        for (const auto& op : j)
            if (op.machine == machine) s += op.duration;
    return s;
}

Time Instance::total_duration() const {
    Time s = 0;
    for (int x = 0; x < n_jobs; ++x) s += job_length(x);
    return s;
}

void Instance::check() const {
    if (n_jobs < 1 || n_machines < 1) throw std::invalid_argument("instance: empty shop");
    if (static_cast<int>(jobs.size()) != n_jobs) throw std::invalid_argument("instance: job count");
    for (const auto& j : jobs) {
        if (static_cast<int>(j.size()) != n_machines)
            throw std::invalid_argument("instance: every job must visit every machine once");
        std::vector<char> seen(n_machines, 0);
        for (const auto& op : j) {
            if (op.machine < 0 || op.machine >= n_machines || seen[op.machine])
                throw std::invalid_argument("instance: bad machine sequence");
            seen[op.machine] = 1;
            if (op.duration < 0) throw std::invalid_argument("instance: negative duration");
        }
    }
    if (has_lags()) {
        if (static_cast<int>(lags.size()) != n_jobs) throw std::invalid_argument("instance: lag rows");
        for (const auto& row : lags) {
            if (static_cast<int>(row.size()) != n_machines - 1)
                throw std::invalid_argument("instance: lag row length");
            for (const auto& l : row)
                if (l && *l < 0) throw std::invalid_argument("instance: negative lag");
        }
    }
    if (has_targets() && static_cast<int>(targets.size()) != n_jobs)
        throw std::invalid_argument("instance: target count");
}

Instance parse_jsp(std::string_view text, std::string name) {
    Cursor cur{tokenize(text)};
    auto inst = parse_body(cur, std::move(name));
    if (cur.next != cur.lines.size())
        throw ParseError(ParseErrorKind::CountMismatch, cur.lines[cur.next].number,
                         "unexpected data after the last job");
    return inst;
}

Instance parse_et(std::string_view text, std::string name) {
    Cursor cur{tokenize(text)};
    auto inst = parse_body(cur, std::move(name));
    const auto remaining = cur.lines.size() - cur.next;
    if (remaining != static_cast<std::size_t>(inst.n_jobs))
        throw ParseError(ParseErrorKind::CountMismatch, cur.lines.empty() ? 0 : cur.lines.back().number,
                         "expected " + std::to_string(inst.n_jobs) + " due-date lines, found " +
                             std::to_string(remaining));
    for (int x = 0; x < inst.n_jobs; ++x) {
        const auto& line = cur.lines[cur.next++];
        JobTargets t;
        if (line.tokens.size() == 4) {
            t.release = to_int(line.tokens[0], line.number);
            t.due = to_int(line.tokens[1], line.number);
            t.w_early = to_int(line.tokens[2], line.number);
            t.w_tardy = to_int(line.tokens[3], line.number);
        } else if (line.tokens.size() == 3) {
            t.due = to_int(line.tokens[0], line.number);
            t.w_early = to_int(line.tokens[1], line.number);
            t.w_tardy = to_int(line.tokens[2], line.number);
        } else {
            throw ParseError(line.tokens.size() < 3 ? ParseErrorKind::ShortRow : ParseErrorKind::LongRow,
                             line.number, "due-date line needs 3 or 4 fields");
        }
        if (t.release < 0 || t.w_early < 0 || t.w_tardy < 0)
            throw ParseError(ParseErrorKind::BadNumber, line.number, "negative release or weight");
        inst.targets.push_back(t);
    }
    return inst;
}

Instance parse_tl(std::string_view text, std::string name) {
    Cursor cur{tokenize(text)};
    auto inst = parse_body(cur, std::move(name));
    const auto remaining = cur.lines.size() - cur.next;
    // single-machine jobs have no gaps, so their lag lines are blank and vanish
    if (inst.n_machines == 1 && remaining == 0) {
        inst.lags.assign(static_cast<std::size_t>(inst.n_jobs), {});
        return inst;
    }
    if (remaining != static_cast<std::size_t>(inst.n_jobs))
        throw ParseError(ParseErrorKind::CountMismatch, cur.lines.empty() ? 0 : cur.lines.back().number,
                         "expected " + std::to_string(inst.n_jobs) + " lag lines, found " +
                             std::to_string(remaining));
    const auto gaps = static_cast<std::size_t>(inst.n_machines - 1);
    for (int x = 0; x < inst.n_jobs; ++x) {
        const auto& line = cur.lines[cur.next++];
        if (line.tokens.size() != gaps)
            throw ParseError(line.tokens.size() < gaps ? ParseErrorKind::ShortRow : ParseErrorKind::LongRow,
                             line.number, "lag line needs " + std::to_string(gaps) + " fields");
        std::vector<Lag> row;
        for (auto tok : line.tokens) {
            if (tok == "inf") {
                row.emplace_back(std::nullopt);
                continue;
            }
            const Time v = to_int(tok, line.number);
            if (v < 0) throw ParseError(ParseErrorKind::NegativeLag, line.number, "negative lag");
            row.emplace_back(v);
        }
        inst.lags.push_back(std::move(row));
    }
    return inst;
}

std::string write_jsp(const Instance& inst) {
    std::ostringstream os;
    os << inst.n_jobs << ' ' << inst.n_machines << '\n';
    for (const auto& job : inst.jobs) {
        for (std::size_t k = 0; k < job.size(); ++k)
            os << (k ? " " : "") << job[k].machine << ' ' << job[k].duration;
        os << '\n';
    }
    return os.str();
}

std::string write_et(const Instance& inst) {
    std::string out = write_jsp(inst);
    std::ostringstream os;
    for (int x = 0; x < inst.n_jobs; ++x) {
        const JobTargets t = inst.has_targets() ? inst.targets[x] : JobTargets{};
        os << t.release << ' ' << t.due << ' ' << t.w_early << ' ' << t.w_tardy << '\n';
    }
    return out + os.str();
}

std::string write_tl(const Instance& inst) {
    std::string out = write_jsp(inst);
    std::ostringstream os;
    for (int x = 0; x < inst.n_jobs; ++x) {
        for (int k = 0; k + 1 < inst.n_machines; ++k) {
            const Lag l = inst.has_lags() ? inst.lags[x][k] : Lag{};
            os << (k ? " " : "");
            if (l)
                os << *l;
            else
                os << "inf";
        }
        os << '\n';
    }
    return out + os.str();
}

LagFactor LagFactor::parse(std::string_view s) {
    if (s == "inf" || s == "infinity") return {0, 1, true};
    LagFactor f;
    std::size_t i = 0;
    if (s.empty()) throw std::invalid_argument("lag factor: empty");
    if (s[0] == '-') throw std::invalid_argument("lag factor must be non-negative");
    bool digits = false;
    bool fraction = false;
    for (; i < s.size(); ++i) {
        const char c = s[i];
        if (c == '.' && !fraction) {
            fraction = true;
            continue;
        }
        if (c < '0' || c > '9') throw std::invalid_argument("lag factor: bad number " + std::string(s));
        digits = true;
        if (f.num > (std::int64_t{1} << 50) || (fraction && f.den > (std::int64_t{1} << 50)))
            throw std::invalid_argument("lag factor: too many digits");
        f.num = f.num * 10 + (c - '0');
        if (fraction) f.den *= 10;
    }
    if (!digits) throw std::invalid_argument("lag factor: bad number " + std::string(s));
    const auto g = std::gcd(f.num, f.den);
    if (g > 1) {
        f.num /= g;
        f.den /= g;
    }
    return f;
}

std::string LagFactor::str() const {
    if (infinite) return "inf";
    std::string out = std::to_string(num / den);
    auto rem = num % den;
    if (rem == 0) return out;
    out += '.';
    for (int k = 0; k < 18 && rem != 0; ++k) {
        rem *= 10;
        out += static_cast<char>('0' + rem / den);
        rem %= den;
    }
    return out;
}

Instance derive_time_lag(const Instance& base, int min_lag_factor, LagFactor y) {
    if (min_lag_factor != 0) throw std::invalid_argument("only minimal-lag factor 0 is supported");
    if (y.num < 0) throw std::invalid_argument("lag factor must be non-negative");
    Instance out = base;
    out.name = (base.name.empty() ? std::string("instance") : base.name) + "_0_" + y.str();
    out.lags.assign(base.n_jobs, std::vector<Lag>(base.n_machines - 1));
    for (int x = 0; x < base.n_jobs; ++x) {
        if (y.infinite) continue;
        const auto total = static_cast<__int128>(base.job_length(x));
        const auto lag = static_cast<Time>((total * y.num) / (static_cast<__int128>(y.den) * base.n_machines));
        for (auto& l : out.lags[x]) l = lag;
    }
    return out;
}

Instance load_instance_file(const std::string& path, std::string_view format) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const auto name = std::filesystem::path(path).stem().string();
    if (format == "et") return parse_et(ss.str(), name);
    if (format == "tl") return parse_tl(ss.str(), name);
    if (format == "jsp") return parse_jsp(ss.str(), name);
    throw std::invalid_argument("unknown instance format " + std::string(format));
}

} // namespace jsched
