#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "manetmon/simulator.hpp"
#include "manetmon/vht.hpp"

#include <cmath>
#include <set>

using namespace manetmon;

TEST_CASE("node addresses skip dot zero and roll over octets") {
    CHECK(node_address(0) == "10.0.0.1");
    CHECK(node_address(1) == "10.0.0.2");
    CHECK(node_address(254) == "10.0.0.255");
    CHECK(node_address(255) == "10.0.1.0");
    CHECK(node_address(256) == "10.0.1.1");
}

TEST_CASE("splitmix output is frozen") {
    Rng rng(1);
    CHECK(rng.next_u64() == 0x910a2dec89025cc1ULL);
    CHECK(rng.next_u64() == 0xbeeb8da1658eec67ULL);
    CHECK(rng.next_u64() == 0xf893a2eefb32555eULL);
    Rng unit(1);
    CHECK(unit.next_unit() == doctest::Approx(0.5665615751722809).epsilon(1e-15));
}

TEST_CASE("rng ranges behave") {
    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
        double u = rng.next_unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        double v = rng.next_in(-3.0, 5.0);
        CHECK(v >= -3.0);
        CHECK(v < 5.0);
        CHECK(rng.next_below(10) < 10);
    }
    CHECK(Rng(42).next_u64() == Rng(42).next_u64());
    CHECK(Rng(42).next_u64() != Rng(43).next_u64());
    CHECK(mix_seed(1, 2) != mix_seed(2, 1));
    CHECK(mix_seed(1, 2, 3) != mix_seed(1, 2, 4));
}

TEST_CASE("grid placement is row major and must fit the area") {
    auto pos = place_grid(9, 100, 1000, 1000);
    REQUIRE(pos.size() == 9);
    CHECK(pos[0] == Vec2{0, 0});
    CHECK(pos[1] == Vec2{100, 0});
    CHECK(pos[2] == Vec2{200, 0});
    CHECK(pos[3] == Vec2{0, 100});
    CHECK(pos[8] == Vec2{200, 200});

    // 10 nodes need a 4-wide lattice: 300 m extent still fits 500.
    CHECK(place_grid(10, 100, 500, 500).size() == 10);
    CHECK_THROWS_AS(place_grid(100, 100, 500, 500), std::invalid_argument);
}

TEST_CASE("random placement is seeded and in bounds") {
    auto a = place_random(50, 500, 300, 9);
    auto b = place_random(50, 500, 300, 9);
    auto c = place_random(50, 500, 300, 10);
    CHECK(a == b);
    CHECK(a != c);
    for (const auto& p : a) {
        CHECK(p.x >= 0.0);
        CHECK(p.x < 500.0);
        CHECK(p.y >= 0.0);
        CHECK(p.y < 300.0);
    }
}

TEST_CASE("adjacency is boundary inclusive and irreflexive") {
    Vec2 origin{0, 0};
    CHECK(adjacent(origin, {125, 0}, 125));
    CHECK_FALSE(adjacent(origin, {125.0001, 0}, 125));
    CHECK(adjacent(origin, {0, 60}, 125));
    CHECK_FALSE(adjacent(origin, origin, 125));
    // Grid diagonal at 100 m spacing is out of range at 125.
    CHECK_FALSE(adjacent(origin, {100, 100}, 125));
}

TEST_CASE("routing finds shortest hops with lowest index winning ties") {
    std::vector<Vec2> line = {{0, 0}, {100, 0}, {200, 0}, {300, 0}};
    CHECK(routed_path(0, 3, line, 125) == std::vector<int>{0, 1, 2, 3});
    CHECK(routed_path(3, 0, line, 125) == std::vector<int>{3, 2, 1, 0});
    CHECK(routed_path(0, 0, line, 125).empty());

    std::vector<Vec2> split = {{0, 0}, {100, 0}, {1000, 1000}, {1100, 1000}};
    CHECK(routed_path(0, 2, split, 125).empty());

    // Diamond: 0 reaches 3 through 1 or 2; the lower index is chosen.
    std::vector<Vec2> diamond = {{0, 0}, {100, 0}, {0, 100}, {100, 100}};
    CHECK(routed_path(0, 3, diamond, 125) == std::vector<int>{0, 1, 3});
}

TEST_CASE("waypoint motion moves at the given speed and honors pauses") {
    Rng rng(5);
    RwpState s;
    s.pos = {0, 0};
    s.target = {100, 0};
    s.pause_left_s = 0;
    s = rwp_step(s, 2.0, 10.0, 0.5, 500, 500, rng);
    CHECK(s.pos.x == doctest::Approx(20.0));
    CHECK(s.pos.y == doctest::Approx(0.0));

    // 8 more seconds: reach the target, pause, then set off somewhere new.
    s = rwp_step(s, 9.0, 10.0, 0.5, 500, 500, rng);
    bool moved_past = std::hypot(s.pos.x - 100.0, s.pos.y) > 1e-9;
    CHECK(moved_past);
    CHECK(s.target.x >= 0.0);
    CHECK(s.target.x < 500.0);
    CHECK(s.target.y >= 0.0);
    CHECK(s.target.y < 500.0);

    // Paused node consumes pause time before moving.
    RwpState parked;
    parked.pos = {50, 50};
    parked.target = {100, 50};
    parked.pause_left_s = 2.0;
    RwpState still = rwp_step(parked, 1.0, 10.0, 0.0, 500, 500, rng);
    CHECK(still.pos.x == doctest::Approx(50.0));
    CHECK(still.pause_left_s == doctest::Approx(1.0));
}

TEST_CASE("config validation names the offending field") {
    ScenarioConfig cfg;
    cfg.node_count = 0;
    cfg.loss_prob = 1.5;
    auto bad = validate_config(cfg);
    REQUIRE(bad.size() >= 2);
    bool node_count_named = false, loss_named = false;
    for (const auto& b : bad) {
        node_count_named = node_count_named || b.find("node_count") != std::string::npos;
        loss_named = loss_named || b.find("loss_prob") != std::string::npos;
    }
    CHECK(node_count_named);
    CHECK(loss_named);
    CHECK_THROWS_AS(run_scenario_once(cfg, {}), std::invalid_argument);
}

TEST_CASE("a static grid round reaches everyone with two messages per node") {
    ScenarioConfig cfg;
    cfg.node_count = 25;
    cfg.area_w = cfg.area_h = 1000;
    cfg.grid_spacing = 100;
    cfg.radio_range = 125;
    cfg.loss_prob = 0;
    cfg.seed = 5;
    RunMetrics m = run_scenario_once(cfg, {});
    CHECK(m.converged);
    CHECK(m.verdict_observations == 25);
    CHECK(m.nodes_reached == 25);
    CHECK(m.messages_total == 50);
    CHECK(m.messages_by_type.at("query") == 25);
    CHECK(m.messages_by_type.at("aggregate") == 25);
    CHECK(m.errors == 0);
    CHECK(m.aggregation_check_ok);
    CHECK(m.vht.edges.size() == 24);
    CHECK(m.vht.unreached.empty());
    CHECK(m.final_states.at("INITIAL") == 25);

    std::function<bool(const std::string&, const std::string&)> edge_ok =
        [&](const std::string& child, const std::string& parent) {
            auto c = m.adoption_edge_pos.at(child);
            (void)parent;
            return adjacent(c.first, c.second, cfg.radio_range);
        };
    CHECK(validate_tree(m.vht, &edge_ok, &m.adoption_time_us).ok());
}

TEST_CASE("same seed same run, different seed different run") {
    ScenarioConfig cfg;
    cfg.node_count = 16;
    cfg.area_w = cfg.area_h = 500;
    cfg.placement = Placement::UniformRandom;
    cfg.loss_prob = 0.1;
    cfg.seed = 77;
    RunOptions opts;
    opts.record_trace = true;
    RunMetrics a = run_scenario_once(cfg, opts);
    RunMetrics b = run_scenario_once(cfg, opts);
    CHECK(a.trace == b.trace);
    CHECK(a.verdict_value == b.verdict_value);
    CHECK(a.messages_total == b.messages_total);
    CHECK(a.convergence_ms == b.convergence_ms);

    cfg.seed = 78;
    RunMetrics c = run_scenario_once(cfg, opts);
    CHECK(a.trace != c.trace);
}

TEST_CASE("the verdict matches the multiplicity-aware fold under heavy loss") {
    // The cross check folds exactly what the root merged, duplicates
    // included, so any bookkeeping drift in the merge path trips it. Lost
    // acks legitimately make a branch arrive twice; that shows up as
    // duplicate_observations, not as a check failure.
    ScenarioConfig cfg;
    cfg.node_count = 25;
    cfg.area_w = cfg.area_h = 1000;
    cfg.grid_spacing = 100;
    cfg.loss_prob = 0.15;
    cfg.timeout_ms = 200;
    int runs_with_duplicates = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        cfg.seed = seed;
        RunMetrics m = run_scenario_once(cfg, {});
        CAPTURE(seed);
        CHECK(m.aggregation_check_ok);
        if (!m.aggregation_check_ok) MESSAGE(m.aggregation_check_detail);
        if (m.duplicate_observations > 0) ++runs_with_duplicates;
    }
    MESSAGE(runs_with_duplicates, " of 50 lossy runs double counted a branch");
}

TEST_CASE("random roots are drawn from the seed") {
    ScenarioConfig cfg;
    cfg.node_count = 25;
    cfg.area_w = cfg.area_h = 1000;
    cfg.grid_spacing = 100;
    cfg.root_index = -1;
    std::set<int> roots;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        cfg.seed = seed;
        RunMetrics m = run_scenario_once(cfg, {});
        REQUIRE(m.root_index >= 0);
        REQUIRE(m.root_index < 25);
        roots.insert(m.root_index);
        CHECK(m.vht.root == node_address(m.root_index));
    }
    CHECK(roots.size() > 5);    // 30 draws over 25 slots should scatter
}

TEST_CASE("a scripted teleport cuts the parent link and the child recovers") {
    // Root at the origin, parent P east of it, leaf C further east, and a
    // bridge B that can hear all three. P vanishes after the query phase, so
    // C walks its escalation ladder: its aggregate broadcast dies, routing
    // to P finds no path, and the forward to the grandparent travels C-B-R.
    ScenarioConfig cfg;
    cfg.node_count = 4;
    cfg.area_w = cfg.area_h = 5000;
    cfg.placement = Placement::Grid;
    cfg.grid_spacing = 100;
    cfg.radio_range = 125;
    cfg.loss_prob = 0;
    cfg.hop_latency_jitter_ms = 0;
    cfg.timeout_ms = 100;
    cfg.duration_ms = 5000;
    cfg.observation_source = ObservationSource::Constant;
    cfg.observation_constant = 10.0;
    cfg.function = {AggKind::Sum, "x"};
    cfg.scripted_moves.push_back({0, 2, 200, 0});      // C completes the line
    cfg.scripted_moves.push_back({0, 3, 100, 75});     // B bridges R, P and C
    cfg.scripted_moves.push_back({50, 1, 4000, 4000}); // P leaves mid round

    RunMetrics m = run_scenario_once(cfg, {});
    CHECK(m.converged);
    CHECK(m.verdict_observations == 3);    // R, B and the recovered C
    CHECK(m.verdict_value == 30.0);
    CHECK(m.aggregation_check_ok);
    CHECK(m.messages_by_type.at("aggregate_forward") == 1);
    CHECK(m.messages_by_type.at("aggregate_ack") == 1);
    CHECK(m.final_states.at("INITIAL") == 4);
}

TEST_CASE("unreached nodes stay idle and are listed in the snapshot") {
    ScenarioConfig cfg;
    cfg.node_count = 4;
    cfg.area_w = cfg.area_h = 5000;
    cfg.placement = Placement::Grid;
    cfg.grid_spacing = 1000;    // nobody in range of anybody
    cfg.radio_range = 125;
    cfg.duration_ms = 3000;
    RunMetrics m = run_scenario_once(cfg, {});
    CHECK(m.converged);
    CHECK(m.verdict_observations == 1);
    CHECK(m.nodes_reached == 1);
    CHECK(m.vht.unreached.size() == 3);
    CHECK(m.final_states.at("INITIAL") == 4);
}
