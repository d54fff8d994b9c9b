#pragma once

#include <map>
#include <string>
#include <vector>

namespace manetmon {

// Offline check of a JSONL trace. Three families of checks:
//   - every deliver's payload was sent earlier (causality),
//   - per node, recorded states only move along legal edges,
//   - the final tree record is structurally a tree rooted at the query node.
struct ReplayReport {
    int lines = 0;
    std::map<std::string, int> records_by_kind;
    std::vector<std::string> issues;    // "line 12: ..." each

    bool ok() const { return issues.empty(); }
};

ReplayReport replay_trace(const std::string& jsonl);
ReplayReport replay_trace_file(const std::string& path);

}  // namespace manetmon
