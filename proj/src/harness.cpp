#include "jsched/harness.hpp"

#include <atomic>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "jsched/metrics.hpp"

namespace jsched {

RunReport run_one(const Instance& inst, Variant v, const SearchConfig& cfg) {
    RunReport r;
    r.instance = inst.name;
    r.variant = v;
    r.seed = cfg.seed;
    try {
        auto model = build_model(inst, v);
        auto res = optimize(model, cfg);
        r.status = to_string(res.status);
        r.proven = res.status == OptStatus::Optimal;
        r.lb = res.lower_bound;
        r.greedy = res.greedy_objective;
        r.failures = res.stats.failures;
        r.restarts = res.stats.restarts;
        r.nodes = res.stats.nodes;
        r.seconds = res.stats.seconds;
        if (res.best) {
            r.best = res.best->objective;
            r.solution = std::move(res.best);
        }
    } catch (const std::exception& ex) {
        r.status = "error";
        r.error = ex.what();
    }
    return r;
}

std::vector<RunReport> run_matrix(const std::vector<Instance>& instances, Variant v, const SearchConfig& base,
                                  const std::vector<std::uint64_t>& seeds, unsigned workers,
                                  const std::function<void(const RunReport&)>& on_done) {
    std::vector<Cell> cells;
    for (const auto& inst : instances)
        for (auto s : seeds) cells.push_back({&inst, s});
    std::vector<RunReport> out(cells.size());
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    auto worker = [&]() {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            SearchConfig cfg = base;
            cfg.seed = cells[i].seed;
            auto rep = run_one(*cells[i].instance, v, cfg);
            std::lock_guard lock(mu);
            out[i] = std::move(rep);
            if (on_done) on_done(out[i]);
        }
    };
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(cells.size())));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return out;
}

namespace {

nlohmann::json report_object(const RunReport& r) {
    nlohmann::json j;
    j["instance"] = r.instance;
    j["variant"] = to_string(r.variant);
    j["seed"] = r.seed;
    j["best"] = r.best ? nlohmann::json(*r.best) : nlohmann::json(nullptr);
    j["proven"] = r.proven;
    j["lb"] = r.lb;
    j["status"] = r.status;
    j["greedy"] = r.greedy ? nlohmann::json(*r.greedy) : nlohmann::json(nullptr);
    j["failures"] = r.failures;
    j["restarts"] = r.restarts;
    j["nodes"] = r.nodes;
    j["seconds"] = r.seconds;
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

std::string opt(const std::optional<Time>& v) { return v ? std::to_string(*v) : std::string(); }

std::string fixed2(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << v;
    return os.str();
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

} // namespace

std::string to_jsonl(const RunReport& r) { return report_object(r).dump(); }

std::string csv_header() {
    return "instance,variant,seed,best,proven,lb,status,greedy,failures,restarts,nodes,seconds,error";
}

std::string to_csv(const RunReport& r) {
    std::ostringstream os;
    os << csv_field(r.instance) << ',' << to_string(r.variant) << ',' << r.seed << ',' << opt(r.best) << ','
       << (r.proven ? 1 : 0) << ',' << r.lb << ',' << r.status << ',' << opt(r.greedy) << ',' << r.failures << ','
       << r.restarts << ',' << r.nodes << ',' << fixed2(r.seconds) << ',' << csv_field(r.error);
    return os.str();
}

std::string solution_json(const RunReport& r) {
    nlohmann::json j;
    j["instance"] = r.instance;
    j["variant"] = to_string(r.variant);
    j["seed"] = r.seed;
    j["starts"] = r.solution ? nlohmann::json(r.solution->starts) : nlohmann::json::array();
    j["objective"] = r.solution ? nlohmann::json(r.solution->objective) : nlohmann::json(nullptr);
    auto stats = report_object(r);
    for (const char* k : {"instance", "variant", "seed"}) stats.erase(k);
    j["stats"] = stats;
    return j.dump(2);
}

std::map<std::string, Time> read_reference(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open reference file " + path);
    std::map<std::string, Time> ref;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        std::istringstream ls(line);
        std::string name;
        if (!(ls >> name)) continue;
        Time v;
        std::string extra;
        if (!(ls >> v) || (ls >> extra))
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 'instance value'");
        ref[name] = v;
    }
    return ref;
}

std::vector<SummaryRow> summarize(const std::vector<RunReport>& reports, const std::map<std::string, Time>& ref) {
    std::vector<SummaryRow> rows;
    std::map<std::string, std::size_t> index;
    for (const auto& r : reports) {
        auto [it, fresh] = index.try_emplace(r.instance, rows.size());
        if (fresh) {
            rows.push_back({});
            rows.back().instance = r.instance;
        }
        auto& row = rows[it->second];
        ++row.runs;
        if (r.proven) ++row.proven;
        if (r.best) {
            row.best = row.best ? std::min(*row.best, *r.best) : *r.best;
            row.worst = row.worst ? std::max(*row.worst, *r.best) : *r.best;
        }
    }
    for (auto& row : rows) {
        auto it = ref.find(row.instance);
        if (it == ref.end()) continue;
        row.reference = it->second;
        if (it->second <= 0) continue;
        if (row.best) row.prd_best = prd(static_cast<double>(*row.best), static_cast<double>(it->second));
        if (row.worst) row.prd_worst = prd(static_cast<double>(*row.worst), static_cast<double>(it->second));
    }
    return rows;
}

std::string summary_csv(const std::vector<SummaryRow>& rows, bool with_reference) {
    std::ostringstream os;
    os << "instance,runs,proven,best,worst";
    if (with_reference) os << ",reference,prd_best,prd_worst";
    os << '\n';
    for (const auto& r : rows) {
        os << csv_field(r.instance) << ',' << r.runs << ',' << r.proven << ',' << opt(r.best) << ',' << opt(r.worst);
        if (with_reference) {
            os << ',' << opt(r.reference) << ',' << (r.prd_best ? fixed2(*r.prd_best) : "") << ','
               << (r.prd_worst ? fixed2(*r.prd_worst) : "");
        }
        os << '\n';
    }
    return os.str();
}

} // namespace jsched
