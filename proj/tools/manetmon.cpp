#include "manetmon/metrics.hpp"
#include "manetmon/replay.hpp"
#include "manetmon/scenario.hpp"
#include "manetmon/simulator.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

using namespace manetmon;

namespace {

int apply_overrides(ScenarioConfig& cfg, const std::vector<std::string>& sets) {
    for (const auto& kv : sets) {
        size_t eq = kv.find('=');
        if (eq == std::string::npos) {
            std::cerr << "--set " << kv << ": expected key=value\n";
            return 1;
        }
        std::string err = apply_config_field(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        if (!err.empty()) {
            std::cerr << "--set " << err << "\n";
            return 1;
        }
    }
    return 0;
}

int check_config(const ScenarioConfig& cfg) {
    auto bad = validate_config(cfg);
    for (const auto& b : bad) std::cerr << "config error: " << b << "\n";
    return bad.empty() ? 0 : 1;
}

bool write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << path << ": cannot write\n";
        return false;
    }
    out << content;
    return out.good();
}

void print_run(const RunMetrics& m) {
    std::printf("seed %llu  root %s\n", static_cast<unsigned long long>(m.seed),
                node_address(m.root_index).c_str());
    if (m.converged)
        std::printf("converged at %.1f ms: value %.6f over %zu observations\n",
                    m.convergence_ms, m.verdict_value, m.verdict_observations);
    else
        std::printf("did not converge\n");
    std::printf("nodes reached %d, tree edges %zu, unreached %zu\n", m.nodes_reached,
                m.vht.edges.size(), m.vht.unreached.size());
    std::printf("messages %lld (", static_cast<long long>(m.messages_total));
    bool first = true;
    for (const auto& [tag, count] : m.messages_by_type) {
        std::printf("%s%s %d", first ? "" : ", ", tag.c_str(), count);
        first = false;
    }
    std::printf("), %lld bytes", static_cast<long long>(m.total_bytes));
    if (m.messages_total > 0)
        std::printf(", %.1f bytes/message",
                    static_cast<double>(m.total_bytes) / m.messages_total);
    std::printf("\n");
    if (m.errors > 0) std::printf("protocol errors reported: %d\n", m.errors);
    if (!m.aggregation_check_ok)
        std::printf("AGGREGATION CHECK FAILED: %s\n", m.aggregation_check_detail.c_str());
}

struct Job {
    size_t variant;
    ScenarioConfig cfg;
};

int cmd_run(const std::string& config_path, const std::vector<std::string>& sets,
            bool have_seed, std::uint64_t seed, const std::string& trace_path,
            const std::string& csv_path) {
    ScenarioConfig cfg;
    try {
        if (!config_path.empty()) cfg = load_scenario_file(config_path).base;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    if (apply_overrides(cfg, sets)) return 1;
    if (have_seed) cfg.seed = seed;
    if (check_config(cfg)) return 1;

    RunOptions opts;
    opts.record_trace = !trace_path.empty();
    RunMetrics m = run_scenario_once(cfg, opts);
    print_run(m);
    if (!trace_path.empty() && !write_file(trace_path, m.trace)) return 1;
    if (!csv_path.empty() && !write_file(csv_path, export_csv({m}))) return 1;
    return m.aggregation_check_ok ? 0 : 2;
}

int cmd_sweep(const std::string& config_path, const std::vector<std::string>& sets,
              int jobs, const std::string& csv_path, const std::string& summary_path) {
    SweepSpec spec;
    try {
        spec = load_scenario_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    if (apply_overrides(spec.base, sets)) return 1;

    std::vector<Variant> variants;
    try {
        variants = expand_variants(spec);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    std::vector<Job> joblist;
    for (size_t v = 0; v < variants.size(); ++v) {
        for (int k = 0; k < spec.repetitions; ++k) {
            Job j{v, variants[v].cfg};
            j.cfg.seed = run_seed(spec, v, k);
            joblist.push_back(std::move(j));
        }
    }
    for (const auto& j : joblist)
        if (check_config(j.cfg)) return 1;

    std::vector<RunMetrics> results(joblist.size());
    std::atomic<size_t> next{0};
    unsigned hw = std::thread::hardware_concurrency();
    int workers = jobs > 0 ? jobs : static_cast<int>(hw ? hw : 1);
    workers = std::min<int>(workers, static_cast<int>(joblist.size()));
    auto work = [&] {
        for (size_t i = next.fetch_add(1); i < joblist.size(); i = next.fetch_add(1))
            results[i] = run_scenario_once(joblist[i].cfg, {});
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    // Results are indexed by job, so collection order never depends on the
    // thread schedule.
    std::vector<std::pair<std::string, ScenarioSummary>> table;
    std::vector<RunMetrics> all;
    size_t cursor = 0;
    int bad_checks = 0;
    for (size_t v = 0; v < variants.size(); ++v) {
        std::vector<RunMetrics> slice(results.begin() + cursor,
                                      results.begin() + cursor + spec.repetitions);
        cursor += spec.repetitions;
        ScenarioSummary s = summarize(slice);
        bad_checks += s.aggregation_failures;
        const std::string& label = variants[v].label.empty() ? "base" : variants[v].label;
        std::printf(
            "%-40s  runs %3d  success %5.1f%%  conv %8.1f ms  obs %6.2f  msgs %7.1f  "
            "%5.1f B/msg\n",
            label.c_str(), s.runs, 100.0 * s.success_rate, s.mean_convergence_ms,
            s.mean_observations, s.mean_messages, s.mean_bytes_per_message);
        table.emplace_back(label, s);
        all.insert(all.end(), slice.begin(), slice.end());
    }
    if (!csv_path.empty() && !write_file(csv_path, export_csv(all))) return 1;
    if (!summary_path.empty() && !write_file(summary_path, export_summary_csv(table)))
        return 1;
    if (bad_checks > 0) {
        std::fprintf(stderr, "%d run(s) failed the aggregation cross-check\n", bad_checks);
        return 2;
    }
    return 0;
}

int cmd_replay(const std::string& trace_path) {
    ReplayReport report = replay_trace_file(trace_path);
    std::printf("%d records", report.lines);
    for (const auto& [kind, count] : report.records_by_kind)
        std::printf("  %s %d", kind.c_str(), count);
    std::printf("\n");
    if (report.ok()) {
        std::printf("trace is consistent\n");
        return 0;
    }
    for (const auto& issue : report.issues) std::printf("%s\n", issue.c_str());
    std::printf("%zu issue(s)\n", report.issues.size());
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"query driven monitoring over simulated ad hoc networks"};
    app.require_subcommand(1);

    std::string config_path, trace_path, csv_path, summary_path;
    std::vector<std::string> sets;
    std::uint64_t seed = 0;
    int jobs = 0;

    auto* run = app.add_subcommand("run", "run one scenario and print its outcome");
    run->add_option("config", config_path, "scenario file (defaults are used when omitted)");
    run->add_option("--seed", seed, "override the seed");
    run->add_option("--set", sets, "override a config field, key=value")->take_all();
    run->add_option("--trace", trace_path, "write a JSONL event trace here");
    run->add_option("--csv", csv_path, "write per-run metrics here");

    auto* sweep = app.add_subcommand("sweep", "expand sweeps and summarize each variant");
    sweep->add_option("config", config_path, "scenario file with sweep lines")->required();
    sweep->add_option("--jobs", jobs, "worker threads (default: all cores)");
    sweep->add_option("--set", sets, "override a base field, key=value")->take_all();
    sweep->add_option("--csv", csv_path, "write per-run metrics here");
    sweep->add_option("--summary-csv", summary_path, "write per-variant summaries here");

    auto* replay = app.add_subcommand("replay", "check a recorded trace for consistency");
    replay->add_option("trace", trace_path, "JSONL trace file")->required();

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand(run))
        return cmd_run(config_path, sets, run->count("--seed") > 0, seed, trace_path,
                       csv_path);
    if (app.got_subcommand(sweep))
        return cmd_sweep(config_path, sets, jobs, csv_path, summary_path);
    return cmd_replay(trace_path);
}
