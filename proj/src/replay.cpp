#include "manetmon/replay.hpp"

#include "manetmon/protocol.hpp"
#include "manetmon/vht.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace manetmon {

namespace {

using nlohmann::json;

bool legal_edge(const std::string& from, const std::string& to) {
    static const std::map<std::string, std::set<std::string>> allowed = {
        {"INITIAL", {"INITIAL", "Q1"}},
        {"Q1", {"Q1", "Q2", "A1", "INITIAL"}},
        {"Q2", {"Q2", "A1", "INITIAL"}},
        {"A1", {"A1", "A2", "INITIAL"}},
        {"A2", {"A2", "A3", "INITIAL"}},
        {"A3", {"A3", "INITIAL"}},
    };
    auto it = allowed.find(from);
    return it != allowed.end() && it->second.count(to) > 0;
}

}  // namespace

ReplayReport replay_trace(const std::string& jsonl) {
    ReplayReport report;
    std::map<std::string, std::string> node_state;
    // Canonical payload text of every send seen so far.
    std::set<std::string> sent;
    double last_t = 0.0;
    std::string verdict_node;
    std::string vht_root;
    bool have_vht = false;

    std::stringstream ss(jsonl);
    std::string line;
    int lineno = 0;
    auto issue = [&](const std::string& what) {
        report.issues.push_back("line " + std::to_string(lineno) + ": " + what);
    };

    while (std::getline(ss, line)) {
        ++lineno;
        if (line.empty()) continue;
        report.lines++;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            issue("not a JSON object");
            continue;
        }
        if (!j.contains("t") || !j["t"].is_number() || !j.contains("kind") ||
            !j["kind"].is_string() || !j.contains("node") || !j["node"].is_string()) {
            issue("missing t, node or kind");
            continue;
        }
        double t = j["t"].get<double>();
        std::string kind = j["kind"].get<std::string>();
        std::string node = j["node"].get<std::string>();
        report.records_by_kind[kind]++;
        if (t + 1e-9 < last_t) issue("time went backwards");
        last_t = std::max(last_t, t);

        if (kind == "send") {
            if (!j.contains("payload") || !j["payload"].is_object())
                issue("send without payload");
            else
                sent.insert(j["payload"].dump());
        } else if (kind == "deliver") {
            if (!j.contains("payload") || !j["payload"].is_object()) {
                issue("deliver without payload");
            } else if (sent.count(j["payload"].dump()) == 0) {
                issue("delivered a payload nobody sent");
            }
        } else if (kind == "vht") {
            have_vht = true;
            if (!j.contains("root") || !j["root"].is_string() || !j.contains("edges") ||
                !j["edges"].is_array()) {
                issue("vht record missing root or edges");
            } else {
                VhtSnapshot snap;
                snap.root = j["root"].get<std::string>();
                vht_root = snap.root;
                bool edges_ok = true;
                for (const auto& e : j["edges"]) {
                    if (!e.is_array() || e.size() != 2 || !e[0].is_string() ||
                        !e[1].is_string()) {
                        issue("vht edge is not a [child, parent] pair");
                        edges_ok = false;
                        break;
                    }
                    snap.edges.push_back({e[0].get<std::string>(), e[1].get<std::string>()});
                }
                if (edges_ok) {
                    TreeCheck check = validate_tree(snap);
                    for (const auto& v : check.violations) issue("vht: " + v);
                }
            }
        } else if (kind == "verdict") {
            verdict_node = node;
        }

        // Records that carry the node's state after the event.
        if (j.contains("state")) {
            if (!j["state"].is_string()) {
                issue("state is not a string");
            } else {
                std::string next = j["state"].get<std::string>();
                auto it = node_state.find(node);
                std::string prev = it == node_state.end() ? "INITIAL" : it->second;
                if (!legal_edge(prev, next))
                    issue(node + ": illegal state change " + prev + " -> " + next);
                node_state[node] = next;
            }
        }
    }

    if (!verdict_node.empty() && have_vht && verdict_node != vht_root) {
        lineno = report.lines;
        issue("verdict came from " + verdict_node + " but the tree is rooted at " + vht_root);
    }
    return report;
}

ReplayReport replay_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        ReplayReport r;
        r.issues.push_back(path + ": cannot open");
        return r;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return replay_trace(buf.str());
}

}  // namespace manetmon
