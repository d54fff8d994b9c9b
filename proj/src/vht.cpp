#include "manetmon/vht.hpp"

#include <set>

namespace manetmon {

std::vector<std::string> advertise_relay_set(const NodeCtx& ctx) {
    std::vector<std::string> out;
    if (!ctx.parent) return out;    // root: children of the root have no fallback

    auto push = [&](const std::string& addr) {
        if (out.size() >= 3 || addr.empty() || addr == ctx.self_addr) return;
        for (const auto& seen : out)
            if (seen == addr) return;
        out.push_back(addr);
    };
    push(*ctx.parent);
    for (const auto& addr : ctx.own_relay_set) push(addr);
    return out;
}

VhtSnapshot extract_vht(const std::vector<NodeCtx>& nodes) {
    VhtSnapshot s;
    for (const auto& n : nodes) {
        if (n.is_root) s.root = n.self_addr;
        if (n.parent)
            s.edges.push_back({n.self_addr, *n.parent});
        else if (!n.is_root)
            s.unreached.push_back(n.self_addr);
    }
    return s;
}

TreeCheck validate_tree(
    const VhtSnapshot& s,
    const std::function<bool(const std::string&, const std::string&)>* radio_edge_at_adoption,
    const std::map<std::string, std::int64_t>* adoption_time_us) {
    TreeCheck check;
    auto bad = [&](std::string why) { check.violations.push_back(std::move(why)); };

    if (s.root.empty()) bad("no root");

    std::map<std::string, std::string> parent_of;
    for (const auto& e : s.edges) {
        if (e.child == e.parent) bad("self-loop at " + e.child);
        if (e.child == s.root) bad("root appears as a child");
        if (!parent_of.emplace(e.child, e.parent).second)
            bad("multiple parents for " + e.child);
    }

    // Every parent chain must terminate at the root without revisiting a node.
    for (const auto& [child, _] : parent_of) {
        std::set<std::string> seen{child};
        std::string cur = child;
        while (true) {
            auto it = parent_of.find(cur);
            if (it == parent_of.end()) {
                if (cur != s.root) bad("chain from " + child + " dangles at " + cur);
                break;
            }
            cur = it->second;
            if (!seen.insert(cur).second) {
                bad("cycle through " + cur);
                break;
            }
        }
    }

    if (radio_edge_at_adoption) {
        for (const auto& e : s.edges)
            if (!(*radio_edge_at_adoption)(e.child, e.parent))
                bad("edge " + e.child + " -> " + e.parent + " was not a radio link at adoption");
    }

    if (adoption_time_us) {
        for (const auto& e : s.edges) {
            auto child_t = adoption_time_us->find(e.child);
            if (child_t == adoption_time_us->end()) {
                bad("no adoption time for " + e.child);
                continue;
            }
            if (e.parent == s.root) continue;    // the root never adopts
            auto parent_t = adoption_time_us->find(e.parent);
            if (parent_t == adoption_time_us->end()) {
                bad("no adoption time for " + e.parent);
                continue;
            }
            if (child_t->second <= parent_t->second)
                bad("child " + e.child + " adopted no later than its parent " + e.parent);
        }
    }

    return check;
}

}  // namespace manetmon
