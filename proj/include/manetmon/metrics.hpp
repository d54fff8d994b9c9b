#pragma once

#include "manetmon/simulator.hpp"

#include <string>
#include <vector>

namespace manetmon {

// Aggregate view over the repetitions of one scenario variant. Rate and
// message stats cover all runs; convergence time and observation counts
// average converged runs only.
struct ScenarioSummary {
    int runs = 0;
    int converged_runs = 0;
    double success_rate = 0.0;
    double mean_convergence_ms = 0.0;
    double mean_observations = 0.0;
    double mean_messages = 0.0;
    double mean_bytes_per_message = 0.0;
    double mean_nodes_reached = 0.0;
    int aggregation_failures = 0;
};

// Throws std::invalid_argument on an empty run list.
ScenarioSummary summarize(const std::vector<RunMetrics>& runs);

// One CSV row per run. Columns, in order:
//   seed, root_index, converged, convergence_ms, verdict_value,
//   verdict_observations, nodes_reached, messages_total, total_bytes,
//   errors, aggregation_check_ok
// convergence_ms, verdict_value and verdict_observations are empty for
// runs that did not converge.
std::string export_csv(const std::vector<RunMetrics>& runs);

// One CSV row per labeled summary. Columns, in order:
//   label, runs, converged_runs, success_rate, mean_convergence_ms,
//   mean_observations, mean_messages, mean_bytes_per_message,
//   mean_nodes_reached, aggregation_failures
std::string export_summary_csv(
    const std::vector<std::pair<std::string, ScenarioSummary>>& rows);

}  // namespace manetmon
