#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "manetmon/protocol.hpp"

// The virtual hierarchy is implicit in per-node state: each adopted node
// knows its parent and advertises a short fallback chain of ancestors.
// These helpers materialize the tree for inspection and check that a
// round actually produced a well-formed one.

namespace manetmon {

// What a node puts in its rebroadcast QUERY: its parent, then the nearest
// entries of its own relay set, deduplicated, capped at 3. The root
// advertises nothing (its children have no ancestor to fall back to).
std::vector<std::string> advertise_relay_set(const NodeCtx& ctx);

struct VhtEdge {
    std::string child;
    std::string parent;

    bool operator==(const VhtEdge&) const = default;
};

struct VhtSnapshot {
    std::string root;
    std::vector<VhtEdge> edges;
    std::vector<std::string> unreached;   // never adopted this round
};

VhtSnapshot extract_vht(const std::vector<NodeCtx>& nodes);

struct TreeCheck {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

// radio_edge_at_adoption: were child and parent within radio range when the
// child adopted? Pass nullptr to skip (e.g. when validating a snapshot
// parsed from a trace). adoption_time_us: per-address adoption stamps; when
// given, each child must have adopted strictly after its parent.
TreeCheck validate_tree(
    const VhtSnapshot& s,
    const std::function<bool(const std::string& child, const std::string& parent)>* radio_edge_at_adoption = nullptr,
    const std::map<std::string, std::int64_t>* adoption_time_us = nullptr);

}  // namespace manetmon
