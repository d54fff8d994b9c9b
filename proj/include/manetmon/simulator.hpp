#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "manetmon/protocol.hpp"
#include "manetmon/vht.hpp"

// Seeded discrete-event simulation: unit-disk radio, per-hop latency with
// jitter, independent packet loss, optional random-waypoint motion. Every
// source of randomness derives from ScenarioConfig::seed, so a run is a
// pure function of its config.

namespace manetmon {

struct Vec2 {
    double x = 0.0, y = 0.0;

    bool operator==(const Vec2&) const = default;
};

enum class Placement { Grid, UniformRandom };
enum class MobilityModel { None, RandomWaypoint };
enum class ObservationSource { Constant, SeededRandom };

struct ScenarioConfig {
    int node_count = 25;
    double area_w = 500.0, area_h = 500.0;
    Placement placement = Placement::Grid;
    double grid_spacing = 100.0;
    double radio_range = 125.0;
    int root_index = 0;                  // -1: drawn from the seed
    MonitorFunction function{AggKind::Avg, "cpu"};
    int timeout_ms = 500;
    double hop_latency_base_ms = 2.0;
    double hop_latency_jitter_ms = 1.0;  // uniform +/- around the base
    double loss_prob = 0.0;
    MobilityModel mobility = MobilityModel::None;
    double rwp_speed = 0.0;              // m/s; required > 0 when mobile
    double rwp_pause_s = 0.0;
    int move_update_ms = 100;
    int duration_ms = 20000;
    std::uint64_t seed = 1;
    ObservationSource observation_source = ObservationSource::SeededRandom;
    double observation_constant = 0.0;
    double observation_min = 0.0, observation_max = 100.0;

    // Scripted teleports for failure-injection tests: at at_ms, the node
    // jumps to (x, y). Applied before any delivery at the same instant.
    struct ScriptedMove {
        int at_ms = 0;
        int node = 0;
        double x = 0.0, y = 0.0;
    };
    std::vector<ScriptedMove> scripted_moves;
};

// Empty means runnable; otherwise one entry per offending field.
std::vector<std::string> validate_config(const ScenarioConfig& cfg);

// Row-major lattice from the origin; throws std::invalid_argument when the
// ceil(sqrt(n))-sided grid does not fit the area.
std::vector<Vec2> place_grid(int n, double spacing, double area_w, double area_h);
std::vector<Vec2> place_random(int n, double area_w, double area_h, std::uint64_t seed);

// Unit disk, boundary inclusive, never reflexive.
bool adjacent(const Vec2& a, const Vec2& b, double range);

// BFS shortest hop path expanding neighbors in index order (so equal-length
// ties resolve toward lower indexes). Includes both endpoints; empty when
// unreachable or from == to.
std::vector<int> routed_path(int from, int to, const std::vector<Vec2>& pos, double range);

// Small deterministic generator (splitmix64) so streams behave identically
// across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next_u64();
    double next_unit();                  // [0, 1)
    double next_in(double lo, double hi);
    std::uint64_t next_below(std::uint64_t n);

private:
    std::uint64_t state_;
};

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0);

struct RwpState {
    Vec2 pos;
    Vec2 target;
    double pause_left_s = 0.0;
};

// Advance one motion tick: walk toward the waypoint at constant speed,
// pause on arrival, then draw the next waypoint uniformly from the area.
RwpState rwp_step(RwpState s, double dt_s, double speed, double pause_s,
                  double area_w, double area_h, Rng& rng);

struct RunMetrics {
    bool converged = false;
    double convergence_ms = 0.0;
    double verdict_value = 0.0;
    std::uint64_t verdict_observations = 0;
    std::map<std::string, int> messages_by_type;    // wire tag -> sends
    int messages_total = 0;
    std::int64_t total_bytes = 0;
    int nodes_reached = 0;
    std::map<std::string, int> final_states;        // state name -> count
    int errors = 0;

    // Verdict re-checked against a direct fold over the observation values
    // of exactly the nodes that reached the root, with multiplicity: a lost
    // ack can make the escalation ladder deliver a branch twice.
    bool aggregation_check_ok = true;
    std::string aggregation_check_detail;
    int duplicate_observations = 0;    // extra countings the verdict carries

    std::uint64_t seed = 0;
    int root_index = 0;
    std::vector<double> observations;    // per node index, as synthesized
    VhtSnapshot vht;
    std::map<std::string, std::int64_t> adoption_time_us;
    std::map<std::string, std::pair<Vec2, Vec2>> adoption_edge_pos;  // child -> (child, parent) at link evaluation
    std::string trace;    // JSONL, only when requested
};

struct RunOptions {
    bool record_trace = false;
};

RunMetrics run_scenario_once(const ScenarioConfig& cfg, const RunOptions& opts = {});

std::string node_address(int index);

}  // namespace manetmon
