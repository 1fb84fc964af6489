// Benchmark driver: runs (instance x seed) matrices for one model variant.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "jsched/harness.hpp"

namespace fs = std::filesystem;
using namespace jsched;

namespace {

constexpr int kConfigError = 2;

struct Options {
    std::string model = "jsp";
    std::vector<std::string> instances;
    std::string dir;
    std::string input_format;
    std::string derive_lag;
    double time_limit = 3600.0;
    std::uint64_t node_limit = SearchConfig{}.dichotomy_node_limit;
    std::uint64_t fail_limit = 0;
    int seeds = 1;
    std::uint64_t first_seed = 1;
    std::string heuristic = "tdom-tw";
    std::uint64_t restart_base = 256;
    double restart_factor = 1.3;
    std::uint64_t greedy_iters = 1000;
    bool no_nogoods = false;
    std::string ref;
    std::string out;
    std::string format = "jsonl";
    unsigned jobs = 1;
};

std::vector<std::string> collect_paths(const Options& o) {
    std::vector<std::string> paths = o.instances;
    if (!o.dir.empty()) {
        std::vector<std::string> found;
        for (const auto& ent : fs::directory_iterator(o.dir))
            if (ent.is_regular_file()) found.push_back(ent.path().string());
        std::sort(found.begin(), found.end());
        paths.insert(paths.end(), found.begin(), found.end());
    }
    return paths;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constraint-programming solver for job-shop scheduling variants"};
    Options o;
    app.set_config("--config", "", "Read options from a TOML/INI file");
    app.add_option("--model", o.model, "jsp, et, tl, nw-task or nw-interval")
        ->check(CLI::IsMember({"jsp", "et", "tl", "nw-task", "nw-interval"}));
    app.add_option("--instance", o.instances, "Instance file (repeatable)");
    app.add_option("--dir", o.dir, "Run every file in this directory")->check(CLI::ExistingDirectory);
    app.add_option("--input-format", o.input_format, "jsp, et or tl; default follows the model")
        ->check(CLI::IsMember({"jsp", "et", "tl"}));
    app.add_option("--derive-lag", o.derive_lag, "Derive N_0_Y time-lag instances: Y is a decimal or inf");
    app.add_option("--time-limit", o.time_limit, "Wall-clock seconds per run")->check(CLI::PositiveNumber);
    app.add_option("--node-limit", o.node_limit, "Node limit of each dichotomy step");
    app.add_option("--fail-limit", o.fail_limit, "Failure cap per run, 0 for none");
    app.add_option("--seeds", o.seeds, "Runs per instance")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", o.first_seed, "First seed; run k uses seed + k");
    app.add_option("--heuristic", o.heuristic, "tdom-tw, tdom-bw or dom-wdeg")
        ->check(CLI::IsMember({"tdom-tw", "tdom-bw", "dom-wdeg"}));
    app.add_option("--restart-base", o.restart_base, "Failures before the first restart")->check(CLI::PositiveNumber);
    app.add_option("--restart-factor", o.restart_factor, "Geometric growth of the restart cutoff");
    app.add_option("--greedy-iters", o.greedy_iters, "Greedy descents for time-lag and no-wait models");
    app.add_flag("--no-nogoods", o.no_nogoods, "Do not record nogoods at restarts");
    app.add_option("--ref", o.ref, "Reference file: instance name and best-known value per line")
        ->check(CLI::ExistingFile);
    app.add_option("--out", o.out, "Output directory (default: reports on stdout)");
    app.add_option("--format", o.format, "jsonl or csv")->check(CLI::IsMember({"jsonl", "csv"}));
    app.add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    const Variant variant = *parse_variant(o.model);
    SearchConfig cfg;
    cfg.restart_base = o.restart_base;
    cfg.restart_factor = o.restart_factor;
    cfg.heuristic = *parse_heuristic(o.heuristic);
    cfg.dichotomy_node_limit = o.node_limit;
    cfg.time_limit = o.time_limit;
    cfg.greedy_iterations = o.greedy_iters;
    cfg.record_nogoods = !o.no_nogoods;
    cfg.failure_limit = o.fail_limit;

    std::optional<LagFactor> lag;
    std::map<std::string, Time> ref;
    std::vector<Instance> instances;
    try {
        cfg.check();
        if (!o.derive_lag.empty()) lag = LagFactor::parse(o.derive_lag);
        if (!o.ref.empty()) ref = read_reference(o.ref);
        std::string fmt = o.input_format;
        if (fmt.empty()) fmt = variant == Variant::Et ? "et" : "jsp";
        for (const auto& path : collect_paths(o)) {
            Instance inst = load_instance_file(path, fmt);
            if (lag)
                inst = derive_time_lag(inst, 0, *lag);
            else if (is_no_wait(variant) && !inst.has_lags())
                inst = derive_time_lag(inst, 0, LagFactor{});
            instances.push_back(std::move(inst));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    }

    std::vector<std::uint64_t> seeds;
    for (int k = 0; k < o.seeds; ++k) seeds.push_back(o.first_seed + static_cast<std::uint64_t>(k));

    std::ofstream report_file;
    std::ostream* report_out = &std::cout;
    if (!o.out.empty()) {
        std::error_code ec;
        fs::create_directories(fs::path(o.out) / "solutions", ec);
        if (ec) {
            std::cerr << "error: cannot create " << o.out << ": " << ec.message() << '\n';
            return kConfigError;
        }
        report_file.open(fs::path(o.out) / (o.format == "csv" ? "reports.csv" : "reports.jsonl"));
        report_out = &report_file;
    }
    const bool csv = o.format == "csv";
    if (csv) *report_out << csv_header() << '\n';

    auto reports = run_matrix(instances, variant, cfg, seeds, o.jobs, [&](const RunReport& r) {
        if (o.out.empty()) {
            *report_out << (csv ? to_csv(r) : to_jsonl(r)) << std::endl;
        } else {
            std::cerr << r.instance << " seed " << r.seed << ": " << (r.best ? std::to_string(*r.best) : "-")
                      << ' ' << r.status << '\n';
        }
    });

    if (!o.out.empty()) {
        // file output keeps cell order so reruns diff cleanly
        for (const auto& r : reports) {
            *report_out << (csv ? to_csv(r) : to_jsonl(r)) << '\n';
            std::ofstream sol(fs::path(o.out) / "solutions" /
                              (r.instance + "_" + to_string(variant) + "_" + std::to_string(r.seed) + ".json"));
            sol << solution_json(r) << '\n';
        }
        std::ofstream summary(fs::path(o.out) / "summary.csv");
        summary << summary_csv(summarize(reports, ref), !ref.empty());
    } else {
        std::cerr << summary_csv(summarize(reports, ref), !ref.empty());
    }
    return 0;
}
