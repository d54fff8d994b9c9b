#include "manetmon/metrics.hpp"

#include <cinttypes>
#include <cstdio>
#include <stdexcept>

namespace manetmon {

namespace {

// Fixed formatting keeps exports byte-identical across runs and platforms.
std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

ScenarioSummary summarize(const std::vector<RunMetrics>& runs) {
    if (runs.empty()) throw std::invalid_argument("summarize: no runs");
    ScenarioSummary s;
    s.runs = static_cast<int>(runs.size());
    double conv_ms = 0.0, obs = 0.0, msgs = 0.0, reached = 0.0;
    std::int64_t total_msgs = 0, total_bytes = 0;
    for (const auto& r : runs) {
        if (r.converged) {
            s.converged_runs++;
            conv_ms += r.convergence_ms;
            obs += static_cast<double>(r.verdict_observations);
        }
        if (!r.aggregation_check_ok) s.aggregation_failures++;
        msgs += static_cast<double>(r.messages_total);
        reached += static_cast<double>(r.nodes_reached);
        total_msgs += r.messages_total;
        total_bytes += r.total_bytes;
    }
    s.success_rate = static_cast<double>(s.converged_runs) / s.runs;
    if (s.converged_runs > 0) {
        s.mean_convergence_ms = conv_ms / s.converged_runs;
        s.mean_observations = obs / s.converged_runs;
    }
    s.mean_messages = msgs / s.runs;
    s.mean_nodes_reached = reached / s.runs;
    if (total_msgs > 0)
        s.mean_bytes_per_message =
            static_cast<double>(total_bytes) / static_cast<double>(total_msgs);
    return s;
}

std::string export_csv(const std::vector<RunMetrics>& runs) {
    std::string out =
        "seed,root_index,converged,convergence_ms,verdict_value,"
        "verdict_observations,nodes_reached,messages_total,total_bytes,"
        "errors,aggregation_check_ok\n";
    char buf[128];
    for (const auto& r : runs) {
        std::snprintf(buf, sizeof(buf), "%" PRIu64 ",%d,%d,", r.seed, r.root_index,
                      r.converged ? 1 : 0);
        out += buf;
        if (r.converged) {
            out += fmt(r.convergence_ms);
            out += ',';
            out += fmt(r.verdict_value);
            std::snprintf(buf, sizeof(buf), ",%zu,", r.verdict_observations);
            out += buf;
        } else {
            out += ",,,";
        }
        std::snprintf(buf, sizeof(buf), "%d,%d,%" PRId64 ",%d,%d\n", r.nodes_reached,
                      r.messages_total, r.total_bytes, r.errors,
                      r.aggregation_check_ok ? 1 : 0);
        out += buf;
    }
    return out;
}

std::string export_summary_csv(
    const std::vector<std::pair<std::string, ScenarioSummary>>& rows) {
    std::string out =
        "label,runs,converged_runs,success_rate,mean_convergence_ms,"
        "mean_observations,mean_messages,mean_bytes_per_message,"
        "mean_nodes_reached,aggregation_failures\n";
    char buf[64];
    for (const auto& [label, s] : rows) {
        // Labels never contain commas; fields are plain key=value words.
        out += label.empty() ? "base" : label;
        std::snprintf(buf, sizeof(buf), ",%d,%d,", s.runs, s.converged_runs);
        out += buf;
        out += fmt(s.success_rate);
        out += ',';
        out += fmt(s.mean_convergence_ms);
        out += ',';
        out += fmt(s.mean_observations);
        out += ',';
        out += fmt(s.mean_messages);
        out += ',';
        out += fmt(s.mean_bytes_per_message);
        out += ',';
        out += fmt(s.mean_nodes_reached);
        std::snprintf(buf, sizeof(buf), ",%d\n", s.aggregation_failures);
        out += buf;
    }
    return out;
}

}  // namespace manetmon
