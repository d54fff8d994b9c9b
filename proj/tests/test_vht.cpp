#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "manetmon/protocol.hpp"
#include "manetmon/vht.hpp"

#include <map>

using namespace manetmon;

namespace {

NodeCtx ctx_with(const std::string& self, std::optional<std::string> parent,
                 std::vector<std::string> relays = {}) {
    NodeCtx n = make_node(self, 1.0);
    n.parent = std::move(parent);
    n.own_relay_set = std::move(relays);
    if (n.parent) n.state = AutomatonState::Q1;
    return n;
}

}  // namespace

TEST_CASE("the root advertises an empty relay set") {
    NodeCtx root = make_node("r", 1.0);
    root.is_root = true;
    CHECK(advertise_relay_set(root).empty());
}

TEST_CASE("a child advertises its parent then inherited ancestors") {
    CHECK(advertise_relay_set(ctx_with("c", "p")) == std::vector<std::string>{"p"});
    CHECK(advertise_relay_set(ctx_with("c", "p", {"g"})) ==
          std::vector<std::string>{"p", "g"});
    CHECK(advertise_relay_set(ctx_with("c", "p", {"g1", "g2", "g3"})) ==
          std::vector<std::string>{"p", "g1", "g2"});
}

TEST_CASE("advertised relays skip the node itself and duplicates") {
    CHECK(advertise_relay_set(ctx_with("c", "p", {"p", "c", "g"})) ==
          std::vector<std::string>{"p", "g"});
}

TEST_CASE("extract collects edges, the root, and the unreached") {
    std::vector<NodeCtx> nodes;
    NodeCtx root = make_node("r", 1.0);
    root.is_root = true;
    nodes.push_back(root);
    nodes.push_back(ctx_with("a", "r"));
    nodes.push_back(ctx_with("b", "a"));
    nodes.push_back(make_node("lost", 1.0));

    VhtSnapshot snap = extract_vht(nodes);
    CHECK(snap.root == "r");
    REQUIRE(snap.edges.size() == 2);
    CHECK(snap.unreached == std::vector<std::string>{"lost"});
    CHECK(validate_tree(snap).ok());
}

TEST_CASE("validator flags structural defects") {
    VhtSnapshot snap;
    CHECK_FALSE(validate_tree(snap).ok());    // no root at all

    snap.root = "r";
    snap.edges = {{"a", "a"}};
    CHECK_FALSE(validate_tree(snap).ok());    // self loop

    snap.edges = {{"r", "a"}, {"a", "r"}};
    CHECK_FALSE(validate_tree(snap).ok());    // root as a child

    snap.edges = {{"a", "r"}, {"a", "b"}, {"b", "r"}};
    CHECK_FALSE(validate_tree(snap).ok());    // two parents for a

    snap.edges = {{"a", "b"}, {"b", "a"}};
    CHECK_FALSE(validate_tree(snap).ok());    // cycle never reaching the root

    snap.edges = {{"a", "ghost"}};
    CHECK_FALSE(validate_tree(snap).ok());    // dangling chain

    snap.edges = {{"a", "r"}, {"b", "r"}, {"c", "b"}};
    CHECK(validate_tree(snap).ok());
}

TEST_CASE("validator can check edges against the radio model") {
    VhtSnapshot snap;
    snap.root = "r";
    snap.edges = {{"a", "r"}, {"b", "a"}};
    std::function<bool(const std::string&, const std::string&)> in_range =
        [](const std::string& child, const std::string& parent) {
            return !(child == "b" && parent == "a");
        };
    TreeCheck check = validate_tree(snap, &in_range);
    REQUIRE(check.violations.size() == 1);
    CHECK(check.violations[0].find("b") != std::string::npos);
}

TEST_CASE("validator can check adoption times grow down the tree") {
    VhtSnapshot snap;
    snap.root = "r";
    snap.edges = {{"a", "r"}, {"b", "a"}};
    std::map<std::string, std::int64_t> at = {{"r", 0}, {"a", 10}, {"b", 5}};
    CHECK_FALSE(validate_tree(snap, nullptr, &at).ok());    // b adopted before a
    at["b"] = 20;
    CHECK(validate_tree(snap, nullptr, &at).ok());
}
